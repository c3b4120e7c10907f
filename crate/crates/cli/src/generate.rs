use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pivotlab::problems::{max_circuit_weights, Certifier, CircuitInstance, Gate, Graph, MaxCutInstance, SwopInstance};
use pivotlab::reductions::MisInstance;
use pivotlab::Rational;

use crate::doc::{canonical, parse_rational, InstanceDocument};
use crate::CliError;

const MAX_VERTICES: usize = 4096;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: Kind,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Path,
    Cycle,
    Complete,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertifierName {
    IndependentSet,
    Clique,
    VertexCover,
    AllSubsets,
}

#[derive(Debug, Subcommand)]
pub enum Kind {
    /// Max Cut with the flip neighborhood.
    Maxcut {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "path")]
        graph: Shape,
        /// Edge probability for random graphs.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Edge weights, repeated cyclically over the edges.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u64>,
        /// Upper bound for random weights when none are given.
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
    },
    /// Vertex-weighted subset problem with the c-swap neighborhood.
    Swop {
        #[arg(long, value_enum)]
        certifier: CertifierName,
        #[arg(long, group = "shape")]
        path: Option<usize>,
        #[arg(long, group = "shape")]
        cycle: Option<usize>,
        #[arg(long, group = "shape")]
        complete: Option<usize>,
        /// Random graph on this many vertices.
        #[arg(long, group = "shape")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, conflicts_with = "weights")]
        unit_weights: bool,
        /// Rational weights such as 3 or -1/2, repeated cyclically.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<String>,
        #[arg(long, default_value_t = 10)]
        max_weight: i64,
        #[arg(long, default_value_t = 1)]
        c: usize,
    },
    /// Random circuit over AND, OR and NOT gates.
    Circuit {
        #[arg(long)]
        inputs: usize,
        #[arg(long, default_value_t = 8)]
        gates: usize,
        #[arg(long, default_value_t = 2)]
        outputs: usize,
        /// Random integer weights in [-W, W] instead of powers of two.
        #[arg(long)]
        max_weight: Option<i64>,
    },
    /// Multicolored independent set with random edges between classes.
    Mis {
        /// Class sizes; the last must be 1.
        #[arg(long, value_delimiter = ',')]
        classes: Vec<usize>,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
}

fn check_density(d: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&d) {
        return Err(CliError::Usage(format!("density {d} is outside [0, 1]")));
    }
    Ok(())
}

fn check_vertices(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_VERTICES {
        return Err(CliError::Usage(format!("vertex count {n} is outside 1..={MAX_VERTICES}")));
    }
    Ok(())
}

fn shaped(shape: Shape, n: usize, density: f64, rng: &mut ChaCha8Rng) -> Result<Graph, CliError> {
    Ok(match shape {
        Shape::Path => Graph::path(n),
        Shape::Cycle if n < 3 => return Err(CliError::Usage("a cycle needs at least 3 vertices".into())),
        Shape::Cycle => Graph::cycle(n),
        Shape::Complete => Graph::complete(n),
        Shape::Random => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(density) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, edges, false)?
        }
    })
}

pub fn document(kind: &Kind, seed: u64) -> Result<InstanceDocument, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Kind::Maxcut { n, graph, density, weights, max_weight } => {
            check_vertices(*n)?;
            check_density(*density)?;
            if *n < 2 {
                return Err(CliError::Usage("max cut needs at least 2 vertices".into()));
            }
            let g = shaped(*graph, *n, *density, &mut rng)?;
            let w: Vec<u64> = if weights.is_empty() {
                if *max_weight == 0 {
                    return Err(CliError::Usage("max-weight must be positive".into()));
                }
                (0..g.edge_count()).map(|_| rng.gen_range(1..=*max_weight)).collect()
            } else {
                (0..g.edge_count()).map(|i| weights[i % weights.len()]).collect()
            };
            Ok(InstanceDocument::from_maxcut(&MaxCutInstance::new(g, w)?))
        }
        Kind::Swop { certifier, path, cycle, complete, random, density, unit_weights, weights, max_weight, c } => {
            check_density(*density)?;
            let (shape, n) = match (path, cycle, complete, random) {
                (Some(n), _, _, _) => (Shape::Path, *n),
                (_, Some(n), _, _) => (Shape::Cycle, *n),
                (_, _, Some(n), _) => (Shape::Complete, *n),
                (_, _, _, Some(n)) => (Shape::Random, *n),
                _ => return Err(CliError::Usage("choose one of --path, --cycle, --complete, --random".into())),
            };
            check_vertices(n)?;
            if *c == 0 {
                return Err(CliError::Usage("c must be positive".into()));
            }
            let g = shaped(shape, n, *density, &mut rng)?;
            let w: Vec<Rational> = if *unit_weights {
                vec![Rational::from_integer(1.into()); n]
            } else if !weights.is_empty() {
                let parsed = weights.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
                (0..n).map(|i| parsed[i % parsed.len()].clone()).collect()
            } else {
                if *max_weight < 1 {
                    return Err(CliError::Usage("max-weight must be positive".into()));
                }
                (0..n).map(|_| Rational::from_integer(rng.gen_range(1..=*max_weight).into())).collect()
            };
            let cert = match certifier {
                CertifierName::IndependentSet => Certifier::IndependentSet,
                CertifierName::Clique => Certifier::Clique,
                CertifierName::VertexCover => Certifier::VertexCover,
                CertifierName::AllSubsets => Certifier::AllSubsets,
            };
            Ok(InstanceDocument::from_swop(&SwopInstance::vertex_weighted(g, w, cert, *c)?))
        }
        Kind::Circuit { inputs, gates, outputs, max_weight } => {
            check_vertices(*inputs)?;
            if *outputs == 0 || *outputs > 62 {
                return Err(CliError::Usage(format!("output count {outputs} is outside 1..=62")));
            }
            let mut list: Vec<Gate> = (0..*inputs).map(Gate::Input).collect();
            for _ in 0..*gates {
                let len = list.len();
                let a = rng.gen_range(0..len);
                let b = rng.gen_range(0..len);
                list.push(match rng.gen_range(0..3) {
                    0 => Gate::Not(a),
                    1 => Gate::And(vec![a, b]),
                    _ => Gate::Or(vec![a, b]),
                });
            }
            // Outputs are drawn from the newest gates.
            let len = list.len();
            let outs: Vec<usize> = (0..*outputs).map(|i| len - 1 - (i % len)).collect();
            let w = match max_weight {
                None => max_circuit_weights(*outputs, false),
                Some(m) if *m < 1 => return Err(CliError::Usage("max-weight must be positive".into())),
                Some(m) => (0..*outputs).map(|_| Rational::from_integer(rng.gen_range(-*m..=*m).into())).collect(),
            };
            Ok(InstanceDocument::from_circuit(&CircuitInstance::new(list, *inputs, outs, w)?))
        }
        Kind::Mis { classes, density } => {
            check_density(*density)?;
            let n: usize = classes.iter().sum();
            check_vertices(n)?;
            let mut groups = Vec::new();
            let mut next = 0;
            for &size in classes {
                groups.push((next..next + size).collect::<Vec<usize>>());
                next += size;
            }
            let mut class_of = vec![0; n];
            for (i, g) in groups.iter().enumerate() {
                for &v in g {
                    class_of[v] = i;
                }
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if class_of[u] == class_of[v] || rng.gen_bool(*density) {
                        edges.push((u, v));
                    }
                }
            }
            let inst = MisInstance::new(Graph::new(n, edges, false)?, groups).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(InstanceDocument::from_mis(&inst))
        }
    }
}

pub fn run(args: &GenerateArgs) -> Result<i32, CliError> {
    let doc = document(&args.kind, args.seed)?;
    crate::commands::write_output(args.output.as_deref(), &canonical(&doc))?;
    Ok(0)
}
