//! Concrete problem families: SWOP with c-swaps, weighted circuits with
//! flips, and Max Cut with flips.

mod circuit;
mod graph;
mod maxcut;
mod swop;

pub use circuit::{max_circuit_weights, CircuitBuilder, CircuitInstance, Gate};
pub use graph::Graph;
pub use maxcut::{cut_embedding_solution, embed_maxcut_as_swop, MaxCutInstance};
pub use swop::{Certifier, SwopInstance};

use crate::error::Result;
use crate::model::{Rational, Solution};

/// Neighbors of a certified SWOP solution, in lexicographic order.
pub fn swop_neighbors(inst: &SwopInstance, s: &Solution) -> Result<Vec<Solution>> {
    use crate::model::LocalSearchProblem;
    inst.certify(s)?;
    Ok(inst.neighbors(s))
}

/// Output bits and objective of a circuit on one input vector.
pub fn circuit_evaluate(inst: &CircuitInstance, x: &Solution) -> Result<(Vec<bool>, Rational)> {
    inst.evaluate(x)
}
