//! Scalar rate-independent hysteresis: stops, Prandtl-Ishlinskii operators,
//! running main extrema and loading-curve algebra.

mod curve;
mod memory;
mod pi;
mod signal;
mod stop;

pub use curve::{EvalMode, LoadingCurve};
pub use memory::{memory_evaluate, MainExtremaMemory};
pub use pi::{PiOperator, Stop};
pub use signal::Signal;
pub use stop::{clamp_stop, StopState};
