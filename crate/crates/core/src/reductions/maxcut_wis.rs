use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;

use super::{DistanceMetric, ReductionBundle, Tightness};
use crate::error::{Error, Result};
use crate::gadgets::{build_simulator, CutCore, FlipDirection, GraphBuilder, Role, Side, Simulator};
use crate::model::{ImprovingSequence, LocalSearchProblem, Rational, Solution};
use crate::problems::{Graph, MaxCutInstance, SwopInstance};

/// Default cap on `Σ_v 2^deg(v)`, the number of neighbor partitions examined.
pub const DEFAULT_PARTITION_BUDGET: u64 = 1 << 16;

/// Max Cut with flips reduced to weighted independent set with 3-swaps.
#[derive(Debug, Clone)]
pub struct MaxCutToWis {
    source: MaxCutInstance,
    normalized: MaxCutInstance,
    scale: u64,
    builder: GraphBuilder,
    core: CutCore,
    simulators: Vec<Simulator>,
    index: HashMap<(usize, FlipDirection, Vec<usize>), usize>,
    target: SwopInstance,
}

pub fn reduce_maxcut_to_wis(inst: &MaxCutInstance) -> Result<MaxCutToWis> {
    reduce_maxcut_to_wis_with_budget(inst, DEFAULT_PARTITION_BUDGET)
}

/// Drops zero-weight edges and, unless every weight is already a multiple of
/// `2·max(n, 3)`, multiplies all weights by that factor. This keeps the top
/// levels of every simulator far enough apart.
fn normalize(inst: &MaxCutInstance) -> Result<(MaxCutInstance, u64)> {
    let n = inst.vertex_count();
    let unit = 2 * n.max(3) as u64;
    let kept: Vec<(usize, (usize, usize))> = inst
        .weights()
        .iter()
        .zip(inst.graph().edges())
        .filter(|(&w, _)| w > 0)
        .map(|(&w, &e)| (w as usize, e))
        .collect();
    let scale = if kept.iter().all(|&(w, _)| (w as u64).is_multiple_of(unit)) { 1 } else { unit };
    let mut weights = Vec::with_capacity(kept.len());
    for &(w, _) in &kept {
        weights.push(
            (w as u64).checked_mul(scale).ok_or_else(|| Error::Resource("normalized weight overflows 64 bits".into()))?,
        );
    }
    let graph = Graph::new(n, kept.iter().map(|&(_, e)| e).collect(), false)?;
    Ok((MaxCutInstance::new(graph, weights)?, scale))
}

pub fn reduce_maxcut_to_wis_with_budget(inst: &MaxCutInstance, budget: u64) -> Result<MaxCutToWis> {
    let (normalized, scale) = normalize(inst)?;
    let adjacency = normalized.graph().adjacency();
    let demand: u128 = adjacency.iter().map(|nb| 1u128 << nb.len().min(127)).sum();
    if demand > budget as u128 {
        return Err(Error::Resource(format!("neighbor partitions need {demand} subsets, budget is {budget}")));
    }

    let mut builder = GraphBuilder::new();
    let core = CutCore::build(&mut builder, &normalized)?;
    let core_size = builder.vertex_count();
    let mut simulators = Vec::new();
    let mut index = HashMap::new();
    for (v, nb) in adjacency.iter().enumerate() {
        for mask in 0u64..(1u64 << nb.len()) {
            let (p, q): (Vec<usize>, Vec<usize>) = (0..nb.len()).map(|i| (i, nb[i])).fold(
                (Vec::new(), Vec::new()),
                |(mut p, mut q), (i, u)| {
                    if mask >> i & 1 == 1 {
                        p.push(u);
                    } else {
                        q.push(u);
                    }
                    (p, q)
                },
            );
            let side_sum = |side: &[usize]| -> u64 { side.iter().map(|&u| normalized.edge_weight(v, u).unwrap()).sum() };
            if side_sum(&p) >= side_sum(&q) {
                continue;
            }
            for direction in [FlipDirection::AToB, FlipDirection::BToA] {
                let gadget = simulators.len();
                let sim = build_simulator(&mut builder, &core, &normalized, v, &p, &q, direction, gadget)?;
                if !sim.satisfies_top_level_margin(&builder) {
                    return Err(Error::Invariant(format!("simulator {gadget} violates the top-level margin")));
                }
                index.insert((v, direction, p.clone()), gadget);
                simulators.push(sim);
            }
        }
    }
    let d: Vec<usize> = (core_size..builder.vertex_count()).collect();
    builder.make_clique(&d);
    let target = builder.to_wis(3)?;
    Ok(MaxCutToWis { source: inst.clone(), normalized, scale, builder, core, simulators, index, target })
}

impl MaxCutToWis {
    pub fn wis(&self) -> &SwopInstance {
        &self.target
    }

    pub fn max_cut(&self) -> &MaxCutInstance {
        &self.source
    }

    /// The source after dropping zero-weight edges and rescaling.
    pub fn normalized(&self) -> &MaxCutInstance {
        &self.normalized
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn core(&self) -> &CutCore {
        &self.core
    }

    pub fn core_size(&self) -> usize {
        6 * self.core.vertex_count() + self.core.edge_copies.len()
    }

    pub fn simulators(&self) -> &[Simulator] {
        &self.simulators
    }

    pub fn builder(&self) -> &GraphBuilder {
        &self.builder
    }

    pub fn roles(&self) -> &[Role] {
        self.builder.roles()
    }

    pub fn simulator_for(&self, v: usize, direction: FlipDirection, p: &[usize]) -> Option<&Simulator> {
        self.index.get(&(v, direction, p.to_vec())).map(|&i| &self.simulators[i])
    }

    /// `g(A, B)` for a partition given as its `B` side.
    pub fn g(&self, partition: &Solution) -> Solution {
        self.core.g(partition, self.builder.vertex_count())
    }

    /// The same reduction with the turn vertex of one simulator reweighted.
    pub fn with_turn_weight_delta(&self, simulator: usize, delta: i64) -> Result<MaxCutToWis> {
        let sim = self
            .simulators
            .get(simulator)
            .ok_or_else(|| Error::Precondition(format!("no simulator {simulator}")))?;
        let mut out = self.clone();
        let w = out.builder.weight(sim.turn) + Rational::from_integer(BigInt::from(delta));
        out.builder.set_weight(sim.turn, w);
        out.target = out.builder.to_wis(3)?;
        Ok(out)
    }

    /// The explicit improving sequence from `g(A, B)` to the `g` of the
    /// partition with `v` flipped, walking the matching simulator.
    pub fn direct_sequence(&self, partition: &Solution, v: usize) -> Result<ImprovingSequence> {
        let n = self.source.vertex_count();
        if partition.len() != n {
            return Err(Error::Arity { expected: n, got: partition.len() });
        }
        if v >= n {
            return Err(Error::Precondition(format!("vertex {v} out of range")));
        }
        let nb = &self.core.neighbors[v];
        let (p, q): (Vec<usize>, Vec<usize>) = nb.iter().partition(|&&u| partition.get(u) != partition.get(v));
        let sum = |side: &[usize]| -> Rational {
            side.iter().map(|&u| Rational::from_integer(self.source.edge_weight(v, u).unwrap_or(0).into())).sum()
        };
        if !self.normalized.flip_improves(partition, v) {
            return Err(Error::NotImproving { far: Box::new(sum(&p)), near: Box::new(sum(&q)) });
        }
        let direction = if partition.get(v) { FlipDirection::BToA } else { FlipDirection::AToB };
        let sim = self
            .simulator_for(v, direction, &p)
            .ok_or_else(|| Error::Invariant(format!("missing simulator for vertex {v}")))?;
        let own = direction.own();
        let own_heavy = self.core.heavy(v, own);
        let other_heavy = self.core.heavy(v, own.other());
        let start = self.g(partition);
        let mut steps = vec![start.clone()];
        let up_count = sim.up.levels.len();
        for i in 0..up_count {
            let mut s = start.clone();
            s.set(sim.up.levels[i], true);
            for &x in &sim.up.base[..i + 2] {
                s.set(x, false);
            }
            steps.push(s);
        }
        let mut cleared = start.clone();
        for &x in &sim.up.base {
            cleared.set(x, false);
        }
        cleared.set(own_heavy, false);
        let mut turn = cleared.clone();
        turn.set(sim.turn, true);
        steps.push(turn);
        cleared.set(other_heavy, true);
        let down_count = sim.down.levels.len();
        let base = &sim.down.base;
        for j in (0..down_count).rev() {
            let mut s = cleared.clone();
            s.set(sim.down.levels[j], true);
            for &x in &base[j + 2..] {
                s.set(x, true);
            }
            steps.push(s);
        }
        let mut last = cleared;
        for &x in base {
            last.set(x, true);
        }
        steps.push(last);
        Ok(ImprovingSequence::new(&self.target, steps))
    }
}

impl ReductionBundle for MaxCutToWis {
    fn source(&self) -> &dyn LocalSearchProblem {
        &self.source
    }

    fn target(&self) -> &dyn LocalSearchProblem {
        &self.target
    }

    /// `v` goes to `A` iff one of `v_A, v_A', v_A''` is selected.
    fn psi(&self, t: &Solution) -> Solution {
        let n = self.core.vertex_count();
        let mut out = Solution::empty(n);
        for v in 0..n {
            if !self.core.triple(v, Side::A).iter().any(|&x| t.get(x)) {
                out.set(v, true);
            }
        }
        out
    }

    fn embed(&self, s: &Solution) -> Result<Solution> {
        self.source.certify(s)?;
        Ok(self.g(s))
    }

    fn r_member(&self, t: &Solution) -> bool {
        t.len() == self.target.ground_size() && *t == self.g(&self.psi(t))
    }

    fn tightness(&self) -> Tightness {
        Tightness::Bounded { ell: self.source.max_degree() + 4, metric: DistanceMetric::Improving }
    }

    fn for_each_r(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        self.source.for_each_solution(&mut |s| visit(&self.g(s)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::verify_improving_sequence;

    fn edge(w: u64) -> MaxCutInstance {
        MaxCutInstance::new(Graph::path(2), vec![w]).unwrap()
    }

    #[test]
    fn single_edge_sizes() {
        let red = reduce_maxcut_to_wis(&edge(4)).unwrap();
        assert_eq!(red.core_size(), 14);
        assert_eq!(red.simulators().len(), 4);
        assert!(red.simulators().iter().all(|s| s.vertices().len() == 4));
        assert_eq!(red.wis().graph().vertex_count(), 30);
        // 4 is not a multiple of 2·3, so weights are scaled by 6.
        assert_eq!(red.scale(), 6);
        assert_eq!(red.core().alpha, 48);
    }

    #[test]
    fn single_edge_direct_sequence() {
        let red = reduce_maxcut_to_wis(&edge(4)).unwrap();
        let start = Solution::parse("00").unwrap();
        let seq = red.direct_sequence(&start, 1).unwrap();
        assert_eq!(seq.moves(), 5);
        verify_improving_sequence(red.wis(), &seq, false).unwrap();
        assert_eq!(*seq.last().unwrap(), red.g(&Solution::parse("01").unwrap()));
        for s in &seq.steps()[1..seq.moves()] {
            assert!(!red.r_member(s));
        }
        assert!(red.r_member(seq.last().unwrap()));
    }

    #[test]
    fn direct_sequence_rejects_non_improving_flip() {
        let red = reduce_maxcut_to_wis(&edge(4)).unwrap();
        let err = red.direct_sequence(&Solution::parse("01").unwrap(), 1).unwrap_err();
        assert!(matches!(err, Error::NotImproving { .. }));
    }

    #[test]
    fn budget_is_enforced() {
        let k4 = MaxCutInstance::new(Graph::complete(4), vec![1; 6]).unwrap();
        assert!(matches!(reduce_maxcut_to_wis_with_budget(&k4, 8), Err(Error::Resource(_))));
    }
}
