use std::ops::ControlFlow;

use num_bigint::BigInt;

use super::graph::Graph;
use super::swop::{Certifier, SwopInstance};
use crate::error::{Error, Result};
use crate::model::{check_arity, LocalSearchProblem, Rational, Sense, Solution};

/// Max Cut with the flip neighborhood. A solution marks the vertices on side
/// `B`; unmarked vertices are on side `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutInstance {
    graph: Graph,
    weights: Vec<u64>,
}

impl MaxCutInstance {
    pub fn new(graph: Graph, weights: Vec<u64>) -> Result<Self> {
        if !graph.is_simple() {
            return Err(Error::InputContract("max cut needs a simple undirected graph".into()));
        }
        if weights.len() != graph.edge_count() {
            return Err(Error::Arity { expected: graph.edge_count(), got: weights.len() });
        }
        if weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w)).is_none() {
            return Err(Error::InputContract("total edge weight overflows 64 bits".into()));
        }
        Ok(MaxCutInstance { graph, weights })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Weight of the edge `{u, v}`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        self.graph
            .edges()
            .iter()
            .position(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v))
            .map(|e| self.weights[e])
    }

    /// Total weight of edges crossing the partition.
    pub fn cut_value(&self, partition: &Solution) -> u64 {
        self.graph
            .edges()
            .iter()
            .zip(&self.weights)
            .filter(|(&(u, v), _)| partition.get(u) != partition.get(v))
            .map(|(_, &w)| w)
            .sum()
    }

    /// Whether moving `v` to the other side strictly increases the cut.
    pub fn flip_improves(&self, partition: &Solution, v: usize) -> bool {
        let (mut same, mut other) = (0u64, 0u64);
        for (&(a, b), &w) in self.graph.edges().iter().zip(&self.weights) {
            let u = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if partition.get(u) == partition.get(v) {
                same += w;
            } else {
                other += w;
            }
        }
        same > other
    }
}

impl LocalSearchProblem for MaxCutInstance {
    fn ground_size(&self) -> usize {
        self.graph.vertex_count()
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn certify(&self, s: &Solution) -> Result<()> {
        check_arity(self, s)
    }

    fn objective(&self, s: &Solution) -> Rational {
        Rational::from_integer(BigInt::from(self.cut_value(s)))
    }

    fn objective_scaled(&self, s: &Solution) -> Option<i128> {
        Some(self.cut_value(s) as i128)
    }

    fn neighbors(&self, s: &Solution) -> Vec<Solution> {
        let mut out: Vec<Solution> = (0..s.len()).map(|v| s.flipped(v)).collect();
        out.sort();
        out
    }

    fn is_neighbor(&self, a: &Solution, b: &Solution) -> bool {
        a.len() == self.ground_size() && b.len() == a.len() && a.distance(b) == 1
    }

    fn neighborhood_arity_bound(&self) -> String {
        self.ground_size().to_string()
    }

    fn for_each_solution(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        fn rec(k: usize, cur: &mut Solution, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) -> ControlFlow<()> {
            if k == cur.len() {
                return visit(cur);
            }
            rec(k + 1, cur, visit)?;
            cur.set(k, true);
            let r = rec(k + 1, cur, visit);
            cur.set(k, false);
            r
        }
        let mut cur = Solution::empty(self.ground_size());
        let _ = rec(0, &mut cur, visit);
    }
}

/// Max Cut as a SWOP instance: every vertex gets `Δ` isolated companions that
/// must move with it, and a solution is a vertex set plus its cut edges.
///
/// Ground layout: original vertices `0..n`, companions of `v` at
/// `n + v·Δ .. n + (v+1)·Δ`, then the edges.
pub fn embed_maxcut_as_swop(inst: &MaxCutInstance) -> Result<SwopInstance> {
    let delta = inst.max_degree();
    if delta == 0 {
        return Err(Error::Precondition("embedding needs maximum degree at least 1".into()));
    }
    let n = inst.vertex_count();
    let total = n * (delta + 1);
    let edges = inst.graph().edges().to_vec();
    let graph = Graph::new(total, edges, false)?;
    let groups: Vec<Vec<usize>> =
        (0..n).map(|v| std::iter::once(v).chain((0..delta).map(|i| n + v * delta + i)).collect()).collect();
    let vertex_weights = vec![Rational::from_integer(0.into()); total];
    let edge_weights = inst.weights().iter().map(|&w| Rational::from_integer(BigInt::from(w))).collect();
    SwopInstance::new(
        graph,
        vertex_weights,
        edge_weights,
        Certifier::All(vec![Certifier::CutWithBoundary, Certifier::GroupedAllOrNone(groups)]),
        2 * delta + 1,
        true,
    )
}

/// The SWOP solution of [`embed_maxcut_as_swop`] for a partition, taking the
/// `B` side as the selected vertex set.
pub fn cut_embedding_solution(inst: &MaxCutInstance, partition: &Solution) -> Solution {
    let n = inst.vertex_count();
    let delta = inst.max_degree();
    let m = inst.graph().edge_count();
    let mut s = Solution::empty(n * (delta + 1) + m);
    for v in partition.ones() {
        s.set(v, true);
        for i in 0..delta {
            s.set(n + v * delta + i, true);
        }
    }
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        if partition.get(u) != partition.get(v) {
            s.set(n * (delta + 1) + e, true);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_transition_graph, DEFAULT_SOLUTION_BUDGET};

    #[test]
    fn single_edge_values() {
        let inst = MaxCutInstance::new(Graph::path(2), vec![7]).unwrap();
        assert_eq!(inst.cut_value(&Solution::parse("01").unwrap()), 7);
        assert_eq!(inst.cut_value(&Solution::parse("11").unwrap()), 0);
    }

    #[test]
    fn triangle_two_one_split() {
        let inst = MaxCutInstance::new(Graph::complete(3), vec![1, 1, 1]).unwrap();
        for bits in ["100", "010", "001", "011", "101", "110"] {
            assert_eq!(inst.cut_value(&Solution::parse(bits).unwrap()), 2);
        }
    }

    #[test]
    fn single_edge_graph_has_two_sinks() {
        let inst = MaxCutInstance::new(Graph::path(2), vec![3]).unwrap();
        let g = build_transition_graph(&inst, DEFAULT_SOLUTION_BUDGET).unwrap();
        assert_eq!(g.len(), 4);
        let sinks: Vec<String> = g.sinks().iter().map(|&i| g.node(i).to_bit_string()).collect();
        assert_eq!(sinks, vec!["01", "10"]);
    }

    #[test]
    fn embedding_sizes() {
        let edge = MaxCutInstance::new(Graph::path(2), vec![1]).unwrap();
        let e = embed_maxcut_as_swop(&edge).unwrap();
        assert_eq!(e.graph().vertex_count(), 4);
        assert_eq!(e.swap_bound(), 3);
        let tri = MaxCutInstance::new(Graph::complete(3), vec![1, 1, 1]).unwrap();
        let t = embed_maxcut_as_swop(&tri).unwrap();
        assert_eq!(t.graph().vertex_count(), 9);
        assert_eq!(t.swap_bound(), 5);
    }

    #[test]
    fn empty_cut_has_two_improving_moves() {
        let edge = MaxCutInstance::new(Graph::path(2), vec![5]).unwrap();
        let e = embed_maxcut_as_swop(&edge).unwrap();
        let start = cut_embedding_solution(&edge, &Solution::parse("00").unwrap());
        let moves = e.improving_neighbors(&start);
        let expected: Vec<Solution> = ["01", "10"]
            .iter()
            .map(|b| cut_embedding_solution(&edge, &Solution::parse(b).unwrap()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(moves, expected);
    }

    #[test]
    fn embedding_rejects_edgeless() {
        let inst = MaxCutInstance::new(Graph::empty(2), vec![]).unwrap();
        assert!(matches!(embed_maxcut_as_swop(&inst), Err(Error::Precondition(_))));
    }
}
