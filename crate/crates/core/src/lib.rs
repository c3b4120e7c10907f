//! Local search laboratory: pivoting-style local search over subset, circuit
//! and cut problems, the gadget reductions between them, weight reduction,
//! and brute-force checkers for reduction tightness.

pub mod error;
pub mod gadgets;
pub mod model;
pub mod problems;
pub mod reductions;
pub mod solvers;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use model::{
    apply_pivot, build_transition_graph, is_local_optimum, verify_improving_sequence, ImprovingSequence,
    LocalSearchProblem, PivotRule, Rational, Sense, SequenceViolation, Solution, TransitionGraph, ViolationKind,
    DEFAULT_SOLUTION_BUDGET,
};
