//! When a network reduces to a PI operator, and what that operator is.

mod check;
pub mod generate;
mod linear;
mod reduce;

pub use check::{
    check_reducibility, effective_pi_curves, omega_contained, omega_contained_in, Condition,
    EffectiveCurves, ReducibilityReport, Witness, DEFAULT_CHECK_TOL,
};
pub use linear::{
    branch_effective, linear_effective_params, BranchEffective, GenericityTie,
    LinearConnectionSpec, LinearEffective,
};
pub use reduce::reduce_graph;
