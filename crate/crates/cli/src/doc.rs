//! Versioned JSON documents. The canonical form has sorted keys and no
//! insignificant whitespace; instances are identified by the SHA-256 of it.

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pivotlab::problems::{Certifier, CircuitInstance, Gate, Graph, MaxCutInstance, SwopInstance};
use pivotlab::reductions::MisInstance;
use pivotlab::{LocalSearchProblem, Rational, Solution};

use crate::CliError;

pub const VERSION: u32 = 1;

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("invalid rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse::<BigInt>().map_err(|_| bad())?, q.parse::<BigInt>().map_err(|_| bad())?),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
    };
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CertifierDoc {
    IndependentSet,
    Clique,
    VertexCover,
    AllSubsets,
    GroupedAllOrNone { groups: Vec<Vec<usize>> },
    CutWithBoundary,
    All { parts: Vec<CertifierDoc> },
}

impl CertifierDoc {
    pub fn from_certifier(c: &Certifier) -> Self {
        match c {
            Certifier::IndependentSet => CertifierDoc::IndependentSet,
            Certifier::Clique => CertifierDoc::Clique,
            Certifier::VertexCover => CertifierDoc::VertexCover,
            Certifier::AllSubsets => CertifierDoc::AllSubsets,
            Certifier::GroupedAllOrNone(g) => CertifierDoc::GroupedAllOrNone { groups: g.clone() },
            Certifier::CutWithBoundary => CertifierDoc::CutWithBoundary,
            Certifier::All(parts) => CertifierDoc::All { parts: parts.iter().map(Self::from_certifier).collect() },
        }
    }

    pub fn to_certifier(&self) -> Certifier {
        match self {
            CertifierDoc::IndependentSet => Certifier::IndependentSet,
            CertifierDoc::Clique => Certifier::Clique,
            CertifierDoc::VertexCover => Certifier::VertexCover,
            CertifierDoc::AllSubsets => Certifier::AllSubsets,
            CertifierDoc::GroupedAllOrNone { groups } => Certifier::GroupedAllOrNone(groups.clone()),
            CertifierDoc::CutWithBoundary => Certifier::CutWithBoundary,
            CertifierDoc::All { parts } => Certifier::All(parts.iter().map(Self::to_certifier).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GateDoc {
    Input { index: usize },
    Const { value: bool },
    Not { arg: usize },
    And { args: Vec<usize> },
    Or { args: Vec<usize> },
}

impl GateDoc {
    fn from_gate(g: &Gate) -> Self {
        match g {
            Gate::Input(i) => GateDoc::Input { index: *i },
            Gate::Const(b) => GateDoc::Const { value: *b },
            Gate::Not(a) => GateDoc::Not { arg: *a },
            Gate::And(a) => GateDoc::And { args: a.clone() },
            Gate::Or(a) => GateDoc::Or { args: a.clone() },
        }
    }

    fn to_gate(&self) -> Gate {
        match self {
            GateDoc::Input { index } => Gate::Input(*index),
            GateDoc::Const { value } => Gate::Const(*value),
            GateDoc::Not { arg } => Gate::Not(*arg),
            GateDoc::And { args } => Gate::And(args.clone()),
            GateDoc::Or { args } => Gate::Or(args.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceDocument {
    Swop {
        version: u32,
        vertices: usize,
        edges: Vec<(usize, usize)>,
        directed: bool,
        vertex_weights: Vec<String>,
        edge_weights: Vec<String>,
        certifier: CertifierDoc,
        c: usize,
        include_edges: bool,
    },
    Circuit {
        version: u32,
        inputs: usize,
        gates: Vec<GateDoc>,
        outputs: Vec<usize>,
        weights: Vec<String>,
    },
    Maxcut {
        version: u32,
        vertices: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<String>,
    },
    /// Multicolored independent set; only a reduction source.
    Mis {
        version: u32,
        vertices: usize,
        edges: Vec<(usize, usize)>,
        classes: Vec<Vec<usize>>,
    },
}

/// A parsed instance ready for local search.
pub enum Problem {
    Swop(SwopInstance),
    Circuit(CircuitInstance),
    Maxcut(MaxCutInstance),
    Mis(MisInstance),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Swop(_) => "swop",
            Problem::Circuit(_) => "circuit",
            Problem::Maxcut(_) => "maxcut",
            Problem::Mis(_) => "mis",
        }
    }

    pub fn local_search(&self) -> Result<&dyn LocalSearchProblem, CliError> {
        match self {
            Problem::Swop(i) => Ok(i),
            Problem::Circuit(i) => Ok(i),
            Problem::Maxcut(i) => Ok(i),
            Problem::Mis(_) => Err(CliError::Usage("mis documents are reduction sources, not local search instances".into())),
        }
    }
}

fn rationals(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

impl InstanceDocument {
    pub fn version(&self) -> u32 {
        match self {
            InstanceDocument::Swop { version, .. }
            | InstanceDocument::Circuit { version, .. }
            | InstanceDocument::Maxcut { version, .. }
            | InstanceDocument::Mis { version, .. } => *version,
        }
    }

    pub fn from_swop(inst: &SwopInstance) -> Self {
        InstanceDocument::Swop {
            version: VERSION,
            vertices: inst.graph().vertex_count(),
            edges: inst.graph().edges().to_vec(),
            directed: inst.graph().is_directed(),
            vertex_weights: inst.vertex_weights().iter().map(rational_to_string).collect(),
            edge_weights: inst.edge_weights().iter().map(rational_to_string).collect(),
            certifier: CertifierDoc::from_certifier(inst.certifier()),
            c: inst.swap_bound(),
            include_edges: inst.include_edges(),
        }
    }

    pub fn from_circuit(inst: &CircuitInstance) -> Self {
        InstanceDocument::Circuit {
            version: VERSION,
            inputs: inst.input_count(),
            gates: inst.gates().iter().map(GateDoc::from_gate).collect(),
            outputs: inst.outputs().to_vec(),
            weights: inst.weights().iter().map(rational_to_string).collect(),
        }
    }

    pub fn from_maxcut(inst: &MaxCutInstance) -> Self {
        InstanceDocument::Maxcut {
            version: VERSION,
            vertices: inst.vertex_count(),
            edges: inst.graph().edges().to_vec(),
            weights: inst.weights().iter().map(u64::to_string).collect(),
        }
    }

    pub fn from_mis(inst: &MisInstance) -> Self {
        InstanceDocument::Mis {
            version: VERSION,
            vertices: inst.graph().vertex_count(),
            edges: inst.graph().edges().to_vec(),
            classes: inst.classes().to_vec(),
        }
    }

    pub fn from_problem(p: &Problem) -> Self {
        match p {
            Problem::Swop(i) => Self::from_swop(i),
            Problem::Circuit(i) => Self::from_circuit(i),
            Problem::Maxcut(i) => Self::from_maxcut(i),
            Problem::Mis(i) => Self::from_mis(i),
        }
    }

    pub fn to_problem(&self) -> Result<Problem, CliError> {
        if self.version() != VERSION {
            return Err(CliError::Usage(format!("unsupported document version {}", self.version())));
        }
        Ok(match self {
            InstanceDocument::Swop {
                vertices, edges, directed, vertex_weights, edge_weights, certifier, c, include_edges, ..
            } => Problem::Swop(SwopInstance::new(
                Graph::new(*vertices, edges.clone(), *directed)?,
                rationals(vertex_weights)?,
                rationals(edge_weights)?,
                certifier.to_certifier(),
                *c,
                *include_edges,
            )?),
            InstanceDocument::Circuit { inputs, gates, outputs, weights, .. } => Problem::Circuit(CircuitInstance::new(
                gates.iter().map(GateDoc::to_gate).collect(),
                *inputs,
                outputs.clone(),
                rationals(weights)?,
            )?),
            InstanceDocument::Maxcut { vertices, edges, weights, .. } => {
                let w = weights
                    .iter()
                    .map(|s| s.parse::<u64>().map_err(|_| CliError::Usage(format!("invalid edge weight {s:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Problem::Maxcut(MaxCutInstance::new(Graph::new(*vertices, edges.clone(), false)?, w)?)
            }
            InstanceDocument::Mis { vertices, edges, classes, .. } => {
                Problem::Mis(MisInstance::new(Graph::new(*vertices, edges.clone(), false)?, classes.clone())?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStep {
    /// Ground coordinates toggled by the move.
    pub toggled: Vec<usize>,
    pub solution: String,
    pub objective: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub version: u32,
    pub instance_hash: String,
    pub solver: String,
    pub rule: String,
    pub start: String,
    pub start_objective: String,
    pub steps: Vec<TraceStep>,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TightnessDoc {
    Tight,
    Bounded { ell: usize, metric: String },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleManifest {
    pub version: u32,
    pub reduction: String,
    pub source: InstanceDocument,
    pub source_hash: String,
    /// Present for reductions that need a seed instance.
    pub seed: Option<SeedDoc>,
    pub target_file: String,
    pub target_hash: String,
    pub tightness: TightnessDoc,
    /// How target solutions map back to source solutions.
    pub psi: serde_json::Value,
    /// The distinguished target set.
    pub r: serde_json::Value,
    /// Target vertex labels, when the target is built from gadgets.
    pub roles: Option<Vec<String>>,
    pub start: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedDoc {
    pub instance: InstanceDocument,
    pub start: String,
}

/// Canonical bytes: keys sorted (serde_json's default map is ordered),
/// compact separators.
pub fn canonical<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    serde_json::to_string(&value).expect("values serialize")
}

pub fn hash<T: Serialize>(doc: &T) -> String {
    hex::encode(Sha256::digest(canonical(doc).as_bytes()))
}

pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("cannot parse {what}: {e}")))
}

pub fn read<T: DeserializeOwned>(path: &std::path::Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, what)
}

pub fn parse_solution(bits: &str, len: usize) -> Result<Solution, CliError> {
    let s = match bits {
        "empty" => Solution::empty(len),
        "full" => Solution::from_indices(len, 0..len),
        _ => Solution::parse(bits)?,
    };
    if s.len() != len {
        return Err(CliError::Usage(format!("solution has {} bits, instance needs {len}", s.len())));
    }
    Ok(s)
}
