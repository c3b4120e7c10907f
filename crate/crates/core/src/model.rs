//! Problem-agnostic local search vocabulary: solutions, neighborhoods,
//! improving sequences, transition graphs and pivoting rules.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default cap on the number of solutions enumerated for a transition graph.
pub const DEFAULT_SOLUTION_BUDGET: u64 = 1 << 22;

/// A subset of `0..len`, stored most-significant-bit first so that the derived
/// ordering on equal-length solutions is lexicographic with coordinate 0 most
/// significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

impl Solution {
    pub fn empty(len: usize) -> Self {
        Solution { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut s = Solution::empty(len);
        for i in indices {
            s.set(i, true);
        }
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Solution::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Parses a string of `0`/`1` characters, position 0 first.
    pub fn parse(bits: &str) -> Result<Self> {
        let mut s = Solution::empty(bits.len());
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => s.set(i, true),
                other => return Err(Error::InputContract(format!("invalid bit character {other:?}"))),
            }
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for solution of length {}", self.len);
        if value {
            self.words[i / 64] |= mask(i);
        } else {
            self.words[i / 64] &= !mask(i);
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for solution of length {}", self.len);
        self.words[i / 64] ^= mask(i);
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.toggle(i);
        s
    }

    pub fn xor(&self, other: &Solution) -> Solution {
        assert_eq!(self.len, other.len);
        Solution { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect() }
    }

    /// Size of the symmetric difference.
    pub fn distance(&self, other: &Solution) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset_of(&self, other: &Solution) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Solution) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn and(&self, other: &Solution) -> Solution {
        Solution { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn or(&self, other: &Solution) -> Solution {
        Solution { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn and_not(&self, other: &Solution) -> Solution {
        Solution { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect() }
    }

    pub fn intersection_count(&self, other: &Solution) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set coordinates in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let lz = w.leading_zeros() as usize;
                w &= !(1u64 << (63 - lz));
                Some(wi * 64 + lz)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// The sub-solution over coordinates `range`.
    pub fn slice(&self, start: usize, end: usize) -> Solution {
        Solution::from_indices(end - start, (start..end).filter(|&i| self.get(i)).map(|i| i - start))
    }

    pub fn concat(parts: &[&Solution]) -> Solution {
        let len = parts.iter().map(|p| p.len).sum();
        let mut out = Solution::empty(len);
        let mut offset = 0;
        for p in parts {
            for i in p.ones() {
                out.set(offset + i, true);
            }
            offset += p.len;
        }
        out
    }

    fn fingerprint(&self) -> u64 {
        // FNV-1a over the words; only used to derive per-solution RNG seeds.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for w in &self.words {
            for b in w.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h ^ self.len as u64
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution({})", self.to_bit_string())
    }
}

/// The sorted coordinates in which two solutions differ. Pivot rules order
/// candidate moves by comparing these tuples lexicographically.
pub fn move_key(from: &Solution, to: &Solution) -> Vec<usize> {
    from.xor(to).ones().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// Whether `candidate` is strictly better than `current`.
    pub fn improves(self, candidate: &Rational, current: &Rational) -> bool {
        match self {
            Sense::Maximize => candidate > current,
            Sense::Minimize => candidate < current,
        }
    }

    fn improves_i128(self, candidate: i128, current: i128) -> bool {
        match self {
            Sense::Maximize => candidate > current,
            Sense::Minimize => candidate < current,
        }
    }
}

/// A local search problem instance: certified solutions over a fixed ground
/// set, an exact objective, and a symmetric neighborhood.
pub trait LocalSearchProblem: Send + Sync {
    fn ground_size(&self) -> usize;

    fn sense(&self) -> Sense;

    /// Checks validity, naming the violated certifier on failure.
    fn certify(&self, s: &Solution) -> Result<()>;

    /// Objective of a certified solution.
    fn objective(&self, s: &Solution) -> Rational;

    /// A scaled integer objective, if the instance has one. The scale must be
    /// positive and identical for every solution, so comparisons agree with
    /// [`LocalSearchProblem::objective`].
    fn objective_scaled(&self, _s: &Solution) -> Option<i128> {
        None
    }

    /// All certified neighbors of a certified solution, in lexicographic order.
    fn neighbors(&self, s: &Solution) -> Vec<Solution>;

    fn is_neighbor(&self, a: &Solution, b: &Solution) -> bool;

    /// Human-readable bound on the number of neighbors of a solution.
    fn neighborhood_arity_bound(&self) -> String;

    /// Visits every certified solution in lexicographic order.
    fn for_each_solution(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>);

    /// Visits a superset of the local optima. Instances may skip solutions
    /// that provably have an improving neighbor.
    fn for_each_optimum_candidate(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        self.for_each_solution(visit)
    }

    fn improving_neighbors(&self, s: &Solution) -> Vec<Solution> {
        let sense = self.sense();
        if let Some(base) = self.objective_scaled(s) {
            return self
                .neighbors(s)
                .into_iter()
                .filter(|t| sense.improves_i128(self.objective_scaled(t).expect("scaled objective"), base))
                .collect();
        }
        let base = self.objective(s);
        self.neighbors(s).into_iter().filter(|t| sense.improves(&self.objective(t), &base)).collect()
    }

    fn has_improving_neighbor(&self, s: &Solution) -> bool {
        !self.improving_neighbors(s).is_empty()
    }

    /// Strict comparison of two certified solutions in the problem's sense.
    fn better(&self, candidate: &Solution, current: &Solution) -> bool {
        match (self.objective_scaled(candidate), self.objective_scaled(current)) {
            (Some(a), Some(b)) => self.sense().improves_i128(a, b),
            _ => self.sense().improves(&self.objective(candidate), &self.objective(current)),
        }
    }
}

/// Whether a valid solution has no strictly better neighbor.
pub fn is_local_optimum(inst: &dyn LocalSearchProblem, s: &Solution) -> Result<bool> {
    check_arity(inst, s)?;
    inst.certify(s)?;
    Ok(!inst.has_improving_neighbor(s))
}

pub(crate) fn check_arity(inst: &dyn LocalSearchProblem, s: &Solution) -> Result<()> {
    if s.len() != inst.ground_size() {
        return Err(Error::Arity { expected: inst.ground_size(), got: s.len() });
    }
    Ok(())
}

/// Which improving neighbor to move to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PivotRule {
    /// The improving move with the lexicographically smallest sorted tuple of
    /// changed coordinates.
    FirstImprovement,
    /// The move of maximal gain, ties broken as in first-improvement.
    BestImprovement,
    /// Uniform choice among improving moves, ordered as in first-improvement.
    /// The generator is ChaCha8 seeded with `seed` xor an FNV-1a fingerprint
    /// of the current solution, so the choice depends only on the solution.
    Random { seed: u64 },
}

impl PivotRule {
    pub const RANDOM_ALGORITHM: &'static str = "chacha8-fnv1a";
}

/// Picks an improving neighbor by `rule`, or `None` at a local optimum.
pub fn apply_pivot(inst: &dyn LocalSearchProblem, s: &Solution, rule: PivotRule) -> Result<Option<Solution>> {
    check_arity(inst, s)?;
    inst.certify(s)?;
    Ok(choose_improving(inst, s, inst.improving_neighbors(s), rule))
}

pub(crate) fn choose_improving(
    inst: &dyn LocalSearchProblem,
    s: &Solution,
    candidates: Vec<Solution>,
    rule: PivotRule,
) -> Option<Solution> {
    if candidates.is_empty() {
        return None;
    }
    let mut keyed: Vec<(Vec<usize>, Solution)> = candidates.into_iter().map(|t| (move_key(s, &t), t)).collect();
    keyed.sort();
    match rule {
        PivotRule::FirstImprovement => keyed.into_iter().next().map(|(_, t)| t),
        PivotRule::BestImprovement => {
            let mut best = 0;
            for i in 1..keyed.len() {
                if inst.better(&keyed[i].1, &keyed[best].1) {
                    best = i;
                }
            }
            Some(keyed.swap_remove(best).1)
        }
        PivotRule::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ s.fingerprint());
            let i = rng.gen_range(0..keyed.len());
            Some(keyed.swap_remove(i).1)
        }
    }
}

/// An ordered list of solutions with their cached objective values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovingSequence {
    steps: Vec<Solution>,
    objectives: Vec<Rational>,
}

impl ImprovingSequence {
    /// Caches objectives; validity is checked by [`verify_improving_sequence`].
    pub fn new(inst: &dyn LocalSearchProblem, steps: Vec<Solution>) -> Self {
        let objectives = steps.iter().map(|s| inst.objective(s)).collect();
        ImprovingSequence { steps, objectives }
    }

    pub fn steps(&self) -> &[Solution] {
        &self.steps
    }

    pub fn objectives(&self) -> &[Rational] {
        &self.objectives
    }

    /// Number of moves, one less than the number of solutions.
    pub fn moves(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn first(&self) -> Option<&Solution> {
        self.steps.first()
    }

    pub fn last(&self) -> Option<&Solution> {
        self.steps.last()
    }

    pub fn into_steps(self) -> Vec<Solution> {
        self.steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    InvalidSolution,
    NotImproving,
    NotNeighbor,
    NotMaximal,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::InvalidSolution => "invalid-solution",
            ViolationKind::NotImproving => "not-improving",
            ViolationKind::NotNeighbor => "not-neighbor",
            ViolationKind::NotMaximal => "not-maximal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceViolation {
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for SequenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at index {}", self.kind, self.index)
    }
}

/// Checks every step of `steps` against the instance. Objectives are
/// recomputed, not taken from any cache.
pub fn verify_steps(
    inst: &dyn LocalSearchProblem,
    steps: &[Solution],
    require_maximal: bool,
) -> std::result::Result<(), SequenceViolation> {
    for (i, s) in steps.iter().enumerate() {
        if s.len() != inst.ground_size() || inst.certify(s).is_err() {
            return Err(SequenceViolation { index: i, kind: ViolationKind::InvalidSolution });
        }
        if i > 0 {
            let prev = &steps[i - 1];
            if !inst.better(s, prev) {
                return Err(SequenceViolation { index: i, kind: ViolationKind::NotImproving });
            }
            if !inst.is_neighbor(prev, s) {
                return Err(SequenceViolation { index: i, kind: ViolationKind::NotNeighbor });
            }
        }
    }
    if require_maximal {
        if let Some(last) = steps.last() {
            if inst.has_improving_neighbor(last) {
                return Err(SequenceViolation { index: steps.len() - 1, kind: ViolationKind::NotMaximal });
            }
        }
    }
    Ok(())
}

pub fn verify_improving_sequence(
    inst: &dyn LocalSearchProblem,
    seq: &ImprovingSequence,
    require_maximal: bool,
) -> std::result::Result<(), SequenceViolation> {
    verify_steps(inst, seq.steps(), require_maximal)
}

/// Collects every certified solution, failing once more than `budget` exist.
pub fn enumerate_solutions(inst: &dyn LocalSearchProblem, budget: u64) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    let mut overflow = false;
    inst.for_each_solution(&mut |s| {
        if out.len() as u64 >= budget {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::EnumerationOverflow { reached: out.len() as u64 + 1, budget });
    }
    Ok(out)
}

/// The explicit digraph of improving moves over all valid solutions.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    nodes: Vec<Solution>,
    objectives: Vec<Rational>,
    edges: Vec<Vec<usize>>,
    sinks: Vec<usize>,
    index: HashMap<Solution, usize>,
}

pub fn build_transition_graph(inst: &dyn LocalSearchProblem, budget: u64) -> Result<TransitionGraph> {
    let mut nodes = enumerate_solutions(inst, budget)?;
    nodes.sort();
    let index: HashMap<Solution, usize> = nodes.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let objectives: Vec<Rational> = nodes.iter().map(|s| inst.objective(s)).collect();
    let sense = inst.sense();
    let mut edges = Vec::with_capacity(nodes.len());
    for (i, s) in nodes.iter().enumerate() {
        let mut out = Vec::new();
        for t in inst.neighbors(s) {
            let j = *index
                .get(&t)
                .ok_or_else(|| Error::Invariant(format!("neighbor {t} of {s} was not enumerated")))?;
            if sense.improves(&objectives[j], &objectives[i]) {
                out.push(j);
            }
        }
        out.sort_unstable();
        edges.push(out);
    }
    let sinks = (0..nodes.len()).filter(|&i| edges[i].is_empty()).collect();
    Ok(TransitionGraph { nodes, objectives, edges, sinks, index })
}

impl TransitionGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Solution] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Solution {
        &self.nodes[i]
    }

    pub fn objective(&self, i: usize) -> &Rational {
        &self.objectives[i]
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().enumerate().flat_map(|(i, out)| out.iter().map(move |&j| (i, j)))
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges[from].binary_search(&to).is_ok()
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.edges[i].is_empty()
    }

    pub fn index_of(&self, s: &Solution) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// A topological order, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for (_, j) in self.edges() {
            indeg[j] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &self.edges[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// BFS distances along improving edges; `None` for unreachable nodes.
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let d = dist[i].unwrap();
            for &j in &self.edges[i] {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// A shortest path from `start` to the nearest sink.
    pub fn shortest_path_to_sink(&self, start: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.nodes.len()];
        parent[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            if self.is_sink(i) {
                let mut path = vec![i];
                let mut cur = i;
                while cur != start {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            for &j in &self.edges[i] {
                if parent[j] == usize::MAX {
                    parent[j] = i;
                    queue.push_back(j);
                }
            }
        }
        unreachable!("a finite acyclic graph always reaches a sink")
    }

    pub fn path_to_sequence(&self, inst: &dyn LocalSearchProblem, path: &[usize]) -> ImprovingSequence {
        ImprovingSequence::new(inst, path.iter().map(|&i| self.nodes[i].clone()).collect())
    }
}
