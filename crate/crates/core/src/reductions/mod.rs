//! Reductions between local search problems, each packaged with its solution
//! map, embedding and distinguished solution set.

mod maxcut_wis;
mod mis_pivot;
mod swop_circuit;

use std::ops::ControlFlow;

pub use maxcut_wis::{reduce_maxcut_to_wis, reduce_maxcut_to_wis_with_budget, MaxCutToWis, DEFAULT_PARTITION_BUDGET};
pub use mis_pivot::{reduce_mis_to_wis_pivot, MisInstance, MisPivotReduction};
pub use swop_circuit::{decode_structured, reduce_swop_to_maxcircuit, Form, StructuredString, SwopToCircuit};

use crate::error::Result;
use crate::model::{LocalSearchProblem, Solution};

/// How distances between distinguished solutions are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceMetric {
    /// Length of a shortest improving path in the transition graph.
    Improving,
    /// Length of a shortest path in the undirected neighborhood graph.
    Neighborhood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tightness {
    Tight,
    Bounded { ell: usize, metric: DistanceMetric },
}

/// A reduction with its solution map `psi`, the embedding of source solutions
/// into the distinguished set `R`, and a membership test for `R`.
pub trait ReductionBundle {
    fn source(&self) -> &dyn LocalSearchProblem;

    fn target(&self) -> &dyn LocalSearchProblem;

    fn psi(&self, t: &Solution) -> Solution;

    fn embed(&self, s: &Solution) -> Result<Solution>;

    fn r_member(&self, t: &Solution) -> bool;

    fn tightness(&self) -> Tightness;

    /// Visits every member of `R`.
    fn for_each_r(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        self.target().for_each_solution(&mut |t| if self.r_member(t) { visit(t) } else { ControlFlow::Continue(()) });
    }
}

/// The identity reduction of an instance to itself.
#[derive(Debug, Clone)]
pub struct IdentityBundle<P> {
    inst: P,
}

impl<P: LocalSearchProblem> IdentityBundle<P> {
    pub fn new(inst: P) -> Self {
        IdentityBundle { inst }
    }
}

impl<P: LocalSearchProblem> ReductionBundle for IdentityBundle<P> {
    fn source(&self) -> &dyn LocalSearchProblem {
        &self.inst
    }

    fn target(&self) -> &dyn LocalSearchProblem {
        &self.inst
    }

    fn psi(&self, t: &Solution) -> Solution {
        t.clone()
    }

    fn embed(&self, s: &Solution) -> Result<Solution> {
        self.inst.certify(s)?;
        Ok(s.clone())
    }

    fn r_member(&self, _t: &Solution) -> bool {
        true
    }

    fn tightness(&self) -> Tightness {
        Tightness::Bounded { ell: 1, metric: DistanceMetric::Improving }
    }
}
