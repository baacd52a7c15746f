//! Networks of Prandtl elastic-ideal plastic springs driven by one moving
//! distance constraint.
//!
//! The crate builds the configuration geometry of a network (the scaled
//! admissible-stress box intersected with the force-balance subspace),
//! integrates the resulting stop-type sweeping process by catch-up
//! projections, traces the vector loading curve exactly, checks when the
//! network behaves as a Prandtl-Ishlinskii operator and extracts the
//! effective operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod error;
pub mod hysteresis;
pub mod linalg;
pub mod network;
pub mod reducibility;
pub mod sweep;
pub mod trace;

pub use error::{Error, Result};
