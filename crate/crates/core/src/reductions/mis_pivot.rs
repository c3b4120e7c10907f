use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gadgets::{attach_elevator, Direction, Elevator, GraphBuilder, Role};
use crate::model::{LocalSearchProblem, Rational, Solution};
use crate::problems::{Graph, SwopInstance};

/// Multicolored independent set: a graph whose vertices are split into color
/// classes, each a clique, with a singleton last class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisInstance {
    graph: Graph,
    classes: Vec<Vec<usize>>,
}

impl MisInstance {
    pub fn new(graph: Graph, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.vertex_count();
        if classes.len() < 3 {
            return Err(Error::InputContract(format!("need at least 3 color classes, got {}", classes.len())));
        }
        let mut seen = vec![false; n];
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InputContract(format!("color class {} is empty", i + 1)));
            }
            for &v in class {
                if v >= n || seen[v] {
                    return Err(Error::InputContract(format!("vertex {v} is out of range or in two classes")));
                }
                seen[v] = true;
            }
            for (a, &u) in class.iter().enumerate() {
                for &w in &class[a + 1..] {
                    if !graph.has_edge(u, w) && !graph.has_edge(w, u) {
                        return Err(Error::InputContract(format!("color class {} is not a clique", i + 1)));
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InputContract(format!("vertex {v} has no color")));
        }
        if classes.last().map(Vec::len) != Some(1) {
            return Err(Error::InputContract("the last color class must have exactly one vertex".into()));
        }
        Ok(MisInstance { graph, classes })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// Whether `set` picks one vertex per class and is independent.
    pub fn is_multicolored_independent(&self, set: &[usize]) -> bool {
        set.len() == self.k()
            && self.classes.iter().all(|c| c.iter().filter(|v| set.contains(v)).count() == 1)
            && set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&w| !self.graph.has_edge(u, w) && !self.graph.has_edge(w, u)))
    }
}

/// A weighted independent set instance with a start solution whose improving
/// sequences either stop after a few steps at a multicolored independent set
/// or must pass through `S ∪ {w*}` into the seed.
#[derive(Debug, Clone)]
pub struct MisPivotReduction {
    pub target: SwopInstance,
    pub start: Solution,
    pub builder: GraphBuilder,
    pub v_ids: Vec<usize>,
    pub u_ids: Vec<usize>,
    pub x_ids: Vec<usize>,
    pub y: Option<Elevator>,
    pub v_star: usize,
    pub w_star: usize,
    pub seed_start: Solution,
    pub seed_weights: Vec<Rational>,
}

impl MisPivotReduction {
    /// `S ∪ {w*}` in the target.
    pub fn seed_with_w_star(&self) -> Solution {
        let mut s = Solution::empty(self.builder.vertex_count());
        for i in self.seed_start.ones() {
            s.set(self.u_ids[i], true);
        }
        s.set(self.w_star, true);
        s
    }

    pub fn y_ids(&self) -> &[usize] {
        self.y.as_ref().map_or(&[], |e| &e.levels)
    }

    /// Target solution `S ∪ {v*} ∪ set` for MIS vertices `set`.
    pub fn with_mis_vertices(&self, set: &[usize]) -> Solution {
        let mut s = Solution::empty(self.builder.vertex_count());
        for i in self.seed_start.ones() {
            s.set(self.u_ids[i], true);
        }
        s.set(self.v_star, true);
        for &v in set {
            s.set(self.v_ids[v], true);
        }
        s
    }

    /// The MIS vertices selected by a target solution.
    pub fn mis_part(&self, t: &Solution) -> Vec<usize> {
        self.v_ids.iter().enumerate().filter(|(_, &id)| t.get(id)).map(|(v, _)| v).collect()
    }
}

/// Builds the pivoting instance. Seed weights are first multiplied by
/// `8n` times the least common denominator, `n` the MIS vertex count.
pub fn reduce_mis_to_wis_pivot(
    mis: &MisInstance,
    seed_graph: &Graph,
    seed_weights: &[Rational],
    seed_start: &Solution,
) -> Result<MisPivotReduction> {
    let seed = SwopInstance::weighted_independent_set(seed_graph.clone(), seed_weights.to_vec(), 3)?;
    seed.certify(seed_start)?;
    if seed_weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InputContract("seed weights must be positive".into()));
    }
    let n = mis.graph.vertex_count();
    let k = mis.k();
    let lcm = seed_weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let factor = Rational::from_integer(lcm * BigInt::from(8 * n));
    let scaled: Vec<Rational> = seed_weights.iter().map(|w| w * &factor).collect();
    let w_max = scaled.iter().max().cloned().unwrap_or_else(Rational::zero);
    let int = |v: i64| Rational::from_integer(BigInt::from(v));

    let mut b = GraphBuilder::new();
    let v_ids: Vec<usize> = (0..n).map(|v| b.add_vertex(int(1), Role::Named(format!("v{v}")))).collect();
    for &(u, w) in mis.graph.edges() {
        b.add_edge(v_ids[u], v_ids[w]);
    }
    let u_ids: Vec<usize> =
        scaled.iter().enumerate().map(|(i, w)| b.add_vertex(w.clone(), Role::Named(format!("u{i}")))).collect();
    for &(u, w) in seed_graph.edges() {
        b.add_edge(u_ids[u], u_ids[w]);
    }
    // x_i for i = 2..k-1 (1-based classes) sees classes i-1, i, i+1.
    let mut x_ids = Vec::new();
    for i in 2..k {
        let x = b.add_vertex(int(3), Role::Named(format!("x{i}")));
        for class in &mis.classes[i - 2..=i] {
            for &v in class {
                b.add_edge(x, v_ids[v]);
            }
        }
        x_ids.push(x);
    }
    let y = if x_ids.len() >= 2 { Some(attach_elevator(&mut b, Direction::Up, &x_ids, &v_ids, 0)?) } else { None };
    let y_ids: Vec<usize> = y.as_ref().map_or(Vec::new(), |e| e.levels.clone());
    let v_star = b.add_vertex(&w_max * int(2), Role::Named("v*".into()));
    let w_star = b.add_vertex(&w_max * int(3) + int(1), Role::Named("w*".into()));
    b.add_edge(v_star, w_star);
    let vxy: Vec<usize> = v_ids.iter().chain(&x_ids).chain(&y_ids).copied().collect();
    b.connect_all(&[w_star], &vxy);
    let outside: Vec<usize> = (0..u_ids.len()).filter(|&i| !seed_start.get(i)).map(|i| u_ids[i]).collect();
    let mut blockers = vxy.clone();
    blockers.push(v_star);
    b.connect_all(&blockers, &outside);

    // At most one vertex per class, all of X and one level of Y.
    let light: Rational = int(k as i64)
        + x_ids.iter().map(|&x| b.weight(x).clone()).sum::<Rational>()
        + y_ids.iter().map(|&y| b.weight(y).clone()).max().unwrap_or_else(Rational::zero);
    if light >= int(8 * n as i64) {
        return Err(Error::Invariant(format!("gadget weight {light} is not below 8n = {}", 8 * n)));
    }

    let target = b.to_wis(3)?;
    let mut start = Solution::empty(b.vertex_count());
    for i in seed_start.ones() {
        start.set(u_ids[i], true);
    }
    start.set(v_ids[mis.classes[k - 1][0]], true);
    start.set(v_star, true);
    target.certify(&start)?;
    Ok(MisPivotReduction {
        target,
        start,
        builder: b,
        v_ids,
        u_ids,
        x_ids,
        y,
        v_star,
        w_star,
        seed_start: seed_start.clone(),
        seed_weights: scaled,
    })
}
