//! Algorithms for producing maximal improving sequences.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{apply_pivot, ImprovingSequence, LocalSearchProblem, PivotRule, Rational, Solution};
use crate::problems::{CircuitInstance, SwopInstance};
use crate::weights::{frank_tardos_reduce, ReducedWeights};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    LocalOptimumFound,
    BudgetExhausted,
    PromiseViolated,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::LocalOptimumFound => "local-optimum-found",
            Outcome::BudgetExhausted => "budget-exhausted",
            Outcome::PromiseViolated => "promise-violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub sequence: ImprovingSequence,
    pub outcome: Outcome,
}

impl SolveReport {
    pub fn steps(&self) -> usize {
        self.sequence.moves()
    }
}

/// Follows `rule` from `start` until a local optimum or `budget` moves.
pub fn standard_local_search(
    inst: &dyn LocalSearchProblem,
    start: &Solution,
    rule: PivotRule,
    budget: u64,
) -> Result<SolveReport> {
    inst.certify(start)?;
    let mut steps = vec![start.clone()];
    let mut cur = start.clone();
    let mut moves = 0u64;
    loop {
        let Some(next) = apply_pivot(inst, &cur, rule)? else {
            return Ok(SolveReport { sequence: ImprovingSequence::new(inst, steps), outcome: Outcome::LocalOptimumFound });
        };
        if moves == budget {
            return Ok(SolveReport { sequence: ImprovingSequence::new(inst, steps), outcome: Outcome::BudgetExhausted });
        }
        moves += 1;
        steps.push(next.clone());
        cur = next;
    }
}

/// Depth-first search over improving paths of at most `ell` moves, children
/// in lexicographic order. Returns the first path ending at a local optimum.
pub fn pivot_search_bounded(inst: &dyn LocalSearchProblem, start: &Solution, ell: usize) -> Result<SolveReport> {
    inst.certify(start)?;
    // Largest remaining depth at which a solution is known to have no sink in reach.
    let mut failed: HashMap<Solution, usize> = HashMap::new();
    let mut path = vec![start.clone()];
    fn dfs(
        inst: &dyn LocalSearchProblem,
        remaining: usize,
        path: &mut Vec<Solution>,
        failed: &mut HashMap<Solution, usize>,
    ) -> bool {
        let s = path.last().expect("nonempty path").clone();
        let next = inst.improving_neighbors(&s);
        if next.is_empty() {
            return true;
        }
        if remaining == 0 || failed.get(&s).is_some_and(|&r| r >= remaining) {
            return false;
        }
        for t in next {
            path.push(t);
            if dfs(inst, remaining - 1, path, failed) {
                return true;
            }
            path.pop();
        }
        failed.insert(s, remaining);
        false
    }
    let outcome = if dfs(inst, ell, &mut path, &mut failed) {
        Outcome::LocalOptimumFound
    } else {
        path.truncate(1);
        Outcome::PromiseViolated
    };
    Ok(SolveReport { sequence: ImprovingSequence::new(inst, path), outcome })
}

/// Distinct values in order of first occurrence and each position's class.
pub fn distinct_values(values: &[Rational]) -> (Vec<Rational>, Vec<usize>) {
    let mut distinct: Vec<Rational> = Vec::new();
    let classes = values
        .iter()
        .map(|v| match distinct.iter().position(|d| d == v) {
            Some(i) => i,
            None => {
                distinct.push(v.clone());
                distinct.len() - 1
            }
        })
        .collect();
    (distinct, classes)
}

/// Reduced weights for a SWOP instance with few distinct weights.
#[derive(Debug, Clone)]
pub struct DistinctWeightReduction {
    pub distinct: Vec<Rational>,
    pub reduced: ReducedWeights,
    pub instance: SwopInstance,
    /// `Σ_i |w̄_i|` over the ground set, an upper bound on any improving sequence.
    pub step_bound: BigInt,
}

/// Replaces every ground weight by the reduced value of its class, with the
/// reduction certified for `N = c + 1`.
pub fn reduce_distinct_weights(inst: &SwopInstance) -> Result<DistinctWeightReduction> {
    let weights = inst.ground_weights();
    let (distinct, classes) = distinct_values(&weights);
    let reduced = frank_tardos_reduce(&distinct, inst.swap_bound() as u64 + 1)?;
    let new_weights: Vec<Rational> =
        classes.iter().map(|&c| Rational::from_integer(reduced.entries[c].clone())).collect();
    let step_bound = classes.iter().map(|&c| reduced.entries[c].abs()).sum();
    let instance = inst.with_ground_weights(&new_weights)?;
    Ok(DistinctWeightReduction { distinct, reduced, instance, step_bound })
}

#[derive(Debug, Clone)]
pub struct FptReport {
    pub report: SolveReport,
    pub reduction: DistinctWeightReduction,
}

/// Local search on the weight-reduced instance, re-expressed against the
/// original weights.
pub fn fpt_distinct_weights_solve(inst: &SwopInstance, start: &Solution, rule: PivotRule) -> Result<FptReport> {
    inst.certify(start)?;
    let reduction = reduce_distinct_weights(inst)?;
    let budget = u64::try_from(&reduction.step_bound).unwrap_or(u64::MAX);
    let inner = standard_local_search(&reduction.instance, start, rule, budget)?;
    if inner.outcome != Outcome::LocalOptimumFound {
        return Err(Error::Invariant(format!("reduced search exceeded its step bound {}", reduction.step_bound)));
    }
    let sequence = ImprovingSequence::new(inst, inner.sequence.into_steps());
    crate::model::verify_improving_sequence(inst, &sequence, true)
        .map_err(|v| Error::Invariant(format!("reduced sequence is not valid for the original weights: {v}")))?;
    Ok(FptReport { report: SolveReport { sequence, outcome: Outcome::LocalOptimumFound }, reduction })
}

/// Local search on a circuit with a hard ceiling of `2^m` moves, `m` the
/// number of outputs: each move strictly improves an objective determined by
/// the output vector.
pub fn circuit_output_bounded_solve(inst: &CircuitInstance, start: &Solution, rule: PivotRule) -> Result<SolveReport> {
    let m = inst.outputs().len();
    if m >= 63 {
        return Err(Error::Resource(format!("2^{m} does not fit a 64-bit step counter")));
    }
    let ceiling = 1u64 << m;
    let report = standard_local_search(inst, start, rule, ceiling)?;
    if report.outcome == Outcome::BudgetExhausted {
        return Err(Error::Invariant(format!("search took more than 2^{m} moves")));
    }
    Ok(report)
}

/// Step bound for circuits whose inputs each influence few outputs.
#[derive(Debug, Clone)]
pub struct OutputDegreeBound {
    /// Largest number of outputs depending on a single input.
    pub t: usize,
    pub distinct: Vec<Rational>,
    pub reduced: ReducedWeights,
    pub instance: CircuitInstance,
    pub step_bound: BigInt,
}

pub fn bound_steps_by_output_degree(inst: &CircuitInstance) -> Result<OutputDegreeBound> {
    let t = inst.outputs_per_input().into_iter().max().unwrap_or(0);
    let (distinct, classes) = distinct_values(inst.weights());
    if distinct.is_empty() {
        let reduced = ReducedWeights { entries: Vec::new(), certified_n: (t + 1).max(2) as u64 };
        return Ok(OutputDegreeBound { t, distinct, reduced, instance: inst.clone(), step_bound: BigInt::zero() });
    }
    let reduced = frank_tardos_reduce(&distinct, (t + 1).max(2) as u64)?;
    let weights: Vec<Rational> = classes.iter().map(|&c| Rational::from_integer(reduced.entries[c].clone())).collect();
    let step_bound = classes.iter().map(|&c| reduced.entries[c].abs()).sum();
    let instance = inst.with_weights(weights)?;
    Ok(OutputDegreeBound { t, distinct, reduced, instance, step_bound })
}

/// `Σ rank(i)` over selected elements, ranks `1..=n` by increasing weight
/// (ties by index). With positive weights and `c = 2`, every improving swap
/// raises it, so sequences have at most `n²` moves.
pub fn potential(inst: &SwopInstance, s: &Solution) -> usize {
    let w = inst.ground_weights();
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[a].cmp(&w[b]).then(a.cmp(&b)));
    let mut rank = vec![0usize; w.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    s.ones().map(|i| rank[i]).sum()
}

/// Whether every ground weight is strictly positive.
pub fn all_positive(inst: &SwopInstance) -> bool {
    inst.ground_weights().iter().all(|w| w.is_positive())
}

/// `2^m` as a big integer.
pub fn output_state_count(m: usize) -> BigInt {
    BigInt::one() << m
}
