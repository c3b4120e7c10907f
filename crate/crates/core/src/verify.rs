//! Exhaustive checkers for reduction tightness and for shortest maximal
//! improving sequences.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::{build_transition_graph, LocalSearchProblem, Solution};
use crate::reductions::{DistanceMetric, ReductionBundle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionOutcome {
    Pass,
    /// The witness is replayable: a single solution, a pair, or a path.
    Fail { witness: Vec<Solution>, detail: String },
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass)
    }

    fn fail(witness: Vec<Solution>, detail: impl Into<String>) -> Self {
        ConditionOutcome::Fail { witness, detail: detail.into() }
    }
}

impl fmt::Display for ConditionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionOutcome::Pass => f.write_str("pass"),
            ConditionOutcome::Fail { detail, .. } => write!(f, "fail: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessReport {
    /// Every target local optimum is in `R`.
    pub condition1: ConditionOutcome,
    /// Every source solution embeds into `R` and maps back to itself.
    pub condition2: ConditionOutcome,
    /// `R`-to-`R` paths without interior `R` nodes map to equal or adjacent solutions.
    pub condition3: ConditionOutcome,
    pub source_solutions: u64,
    pub optimum_candidates: u64,
    pub r_size: u64,
    pub nodes_explored: u64,
}

impl TightnessReport {
    pub fn passed(&self) -> bool {
        self.condition1.passed() && self.condition2.passed() && self.condition3.passed()
    }
}

fn over_budget(what: &str, count: u64, budget: u64) -> Error {
    Error::Resource(format!("{what}: more than {budget} items (reached {count})"))
}

fn collect_r(bundle: &dyn ReductionBundle, budget: u64) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    let mut overflow = false;
    bundle.for_each_r(&mut |r| {
        if out.len() as u64 >= budget {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(r.clone());
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(over_budget("distinguished set", budget + 1, budget));
    }
    Ok(out)
}

/// Checks the three conditions of a tight reduction by enumeration.
pub fn check_tight_reduction(bundle: &dyn ReductionBundle, budget: u64) -> Result<TightnessReport> {
    let source = bundle.source();
    let target = bundle.target();

    let mut condition1 = ConditionOutcome::Pass;
    let mut candidates = 0u64;
    let mut overflow = false;
    target.for_each_optimum_candidate(&mut |t| {
        candidates += 1;
        if candidates > budget {
            overflow = true;
            return ControlFlow::Break(());
        }
        if !bundle.r_member(t) && !target.has_improving_neighbor(t) {
            condition1 = ConditionOutcome::fail(vec![t.clone()], "local optimum outside R");
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(over_budget("target optimum candidates", candidates, budget));
    }

    let source_graph = build_transition_graph(source, budget)?;
    let mut condition2 = ConditionOutcome::Pass;
    for s in source_graph.nodes() {
        let witness = match bundle.embed(s) {
            Err(e) => Some((vec![s.clone()], format!("embedding failed: {e}"))),
            Ok(t) if target.certify(&t).is_err() => Some((vec![s.clone(), t], "embedding is not a target solution".into())),
            Ok(t) if !bundle.r_member(&t) => Some((vec![s.clone(), t], "embedding is outside R".into())),
            Ok(t) if bundle.psi(&t) != *s => Some((vec![s.clone(), t], "psi does not invert the embedding".into())),
            Ok(_) => None,
        };
        if let Some((w, d)) = witness {
            condition2 = ConditionOutcome::fail(w, d);
            break;
        }
    }

    let r_nodes = collect_r(bundle, budget)?;
    let mut explored = 0u64;
    let mut condition3 = ConditionOutcome::Pass;
    'outer: for r in &r_nodes {
        let pr = bundle.psi(r);
        let pr_index = source_graph.index_of(&pr);
        let mut parent: HashMap<Solution, Solution> = HashMap::new();
        let mut seen: HashSet<Solution> = HashSet::new();
        let mut stack = vec![r.clone()];
        seen.insert(r.clone());
        while let Some(cur) = stack.pop() {
            explored += 1;
            if explored > budget {
                return Err(over_budget("condition 3 search", explored, budget));
            }
            for next in target.improving_neighbors(&cur) {
                if bundle.r_member(&next) {
                    let pn = bundle.psi(&next);
                    let adjacent = match (pr_index, source_graph.index_of(&pn)) {
                        (Some(a), Some(b)) => source_graph.has_edge(a, b),
                        _ => false,
                    };
                    if pn != pr && !adjacent {
                        let mut path = vec![next.clone(), cur.clone()];
                        let mut at = cur.clone();
                        while let Some(p) = parent.get(&at) {
                            path.push(p.clone());
                            at = p.clone();
                        }
                        path.reverse();
                        condition3 = ConditionOutcome::fail(path, format!("psi images {pr} and {pn} are not adjacent"));
                        break 'outer;
                    }
                } else if seen.insert(next.clone()) {
                    parent.insert(next.clone(), cur.clone());
                    stack.push(next);
                }
            }
        }
    }

    Ok(TightnessReport {
        condition1,
        condition2,
        condition3,
        source_solutions: source_graph.len() as u64,
        optimum_candidates: candidates,
        r_size: r_nodes.len() as u64,
        nodes_explored: explored,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LTightReport {
    pub ell: usize,
    pub metric: DistanceMetric,
    pub outcome: ConditionOutcome,
    pub pairs_checked: u64,
    /// Largest required distance observed (capped at `ell + 1` when out of reach).
    pub worst: usize,
}

impl LTightReport {
    pub fn passed(&self) -> bool {
        self.outcome.passed()
    }
}

/// Breadth-first distances from `start` up to depth `limit`.
fn bounded_distances(
    target: &dyn LocalSearchProblem,
    start: &Solution,
    limit: usize,
    metric: DistanceMetric,
    explored: &mut u64,
    budget: u64,
) -> Result<HashMap<Solution, usize>> {
    let mut dist = HashMap::new();
    dist.insert(start.clone(), 0usize);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        if d == limit {
            continue;
        }
        *explored += 1;
        if *explored > budget {
            return Err(over_budget("distance search", *explored, budget));
        }
        let next = match metric {
            DistanceMetric::Improving => target.improving_neighbors(&cur),
            DistanceMetric::Neighborhood => target.neighbors(&cur),
        };
        for t in next {
            if !dist.contains_key(&t) {
                dist.insert(t.clone(), d + 1);
                queue.push_back(t);
            }
        }
    }
    Ok(dist)
}

/// Checks that `R` members whose images are equal or source-adjacent are at
/// most `ell` apart in the target.
pub fn check_l_tight(
    bundle: &dyn ReductionBundle,
    ell: usize,
    metric: DistanceMetric,
    budget: u64,
) -> Result<LTightReport> {
    let source = bundle.source();
    let target = bundle.target();
    let source_graph = build_transition_graph(source, budget)?;
    let r_nodes = collect_r(bundle, budget)?;
    let mut groups: HashMap<Solution, Vec<usize>> = HashMap::new();
    let images: Vec<Solution> = r_nodes.iter().map(|r| bundle.psi(r)).collect();
    for (i, p) in images.iter().enumerate() {
        groups.entry(p.clone()).or_default().push(i);
    }
    let mut explored = 0u64;
    let mut pairs = 0u64;
    let mut worst = 0usize;
    for (i, r) in r_nodes.iter().enumerate() {
        let p = &images[i];
        let mut wanted: Vec<usize> = groups.get(p).cloned().unwrap_or_default();
        if let Some(pi) = source_graph.index_of(p) {
            for &succ in source_graph.successors(pi) {
                wanted.extend(groups.get(source_graph.node(succ)).into_iter().flatten());
            }
        }
        let dist = bounded_distances(target, r, ell, metric, &mut explored, budget)?;
        for j in wanted {
            pairs += 1;
            match dist.get(&r_nodes[j]) {
                Some(&d) => worst = worst.max(d),
                None => {
                    return Ok(LTightReport {
                        ell,
                        metric,
                        outcome: ConditionOutcome::fail(
                            vec![r.clone(), r_nodes[j].clone()],
                            format!("no path of length at most {ell} from {r} to {}", r_nodes[j]),
                        ),
                        pairs_checked: pairs,
                        worst: ell + 1,
                    });
                }
            }
        }
    }
    Ok(LTightReport { ell, metric, outcome: ConditionOutcome::Pass, pairs_checked: pairs, worst })
}

/// Breadth-first distance from `start` to the nearest local optimum.
pub fn measure_shortest_max_sequence(inst: &dyn LocalSearchProblem, start: &Solution, budget: u64) -> Result<usize> {
    inst.certify(start)?;
    let mut dist: HashMap<Solution, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        let next = inst.improving_neighbors(&cur);
        if next.is_empty() {
            return Ok(d);
        }
        for t in next {
            if !dist.contains_key(&t) {
                if dist.len() as u64 >= budget {
                    return Err(over_budget("shortest sequence search", dist.len() as u64 + 1, budget));
                }
                dist.insert(t.clone(), d + 1);
                queue.push_back(t);
            }
        }
    }
    Err(Error::Invariant("no local optimum reachable in a finite acyclic transition graph".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub id: String,
    pub size: usize,
    pub length: std::result::Result<usize, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of `ln(length)` against size over rows with a
    /// positive length.
    pub log_slope: Option<f64>,
}

pub type FamilyMember = (String, Box<dyn LocalSearchProblem>, Solution);

/// Shortest maximal sequence lengths over a family; row errors are recorded.
pub fn growth_experiment(
    family: &dyn Fn(usize) -> Result<FamilyMember>,
    sizes: &[usize],
    budget: u64,
) -> GrowthTable {
    let rows: Vec<GrowthRow> = sizes
        .iter()
        .map(|&size| match family(size) {
            Ok((id, inst, start)) => GrowthRow {
                id,
                size,
                length: measure_shortest_max_sequence(inst.as_ref(), &start, budget).map_err(|e| e.to_string()),
            },
            Err(e) => GrowthRow { id: format!("size-{size}"), size, length: Err(e.to_string()) },
        })
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| match r.length {
            Ok(l) if l > 0 => Some((r.size as f64, (l as f64).ln())),
            _ => None,
        })
        .collect();
    GrowthTable { log_slope: least_squares_slope(&points), rows }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
