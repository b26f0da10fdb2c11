//! Time evolution of the symmetric-subspace density matrix under the
//! thermal master equation with level-dependent rates.

mod density;
mod integrate;
mod liouvillian;

pub use density::{DensityMatrix, C64};
pub use integrate::{heuristic_step, integrate, Diagnostics, IntegrateOptions, StepControl, Trajectory};
pub use liouvillian::{
    dicke_limit_liouvillian, liouvillian_apply, steady_state_residual, steady_state_residual_with, Generator,
    GeneratorKind, RateModel,
};

/// Largest atom count accepted by the dense dynamics.
pub const MAX_DYNAMICS_ATOMS: usize = 200;
