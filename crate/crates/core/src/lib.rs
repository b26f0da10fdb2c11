//! Thermal-equilibrium quantum statistics of `N` dipole-dipole coupled
//! two-level emitters in the Dicke limit.
//!
//! The ensemble lives on the `N+1` symmetric Dicke states `|n⟩`. The crate
//! provides the Gibbs steady state of the atomic Hamiltonian, the scattered
//! intensity `G₁` and zero-delay correlation `g⁽²⁾(0)`, closed-form limits
//! of both, and the full master-equation dynamics used to verify that the
//! Gibbs state is the attractor.
//!
//! ```
//! use dicke_therm::{correlators, EnsembleParams, Statistics};
//!
//! let p = EnsembleParams::new(2, 0.1, 10.0).unwrap();
//! let r = correlators::evaluate(&p).unwrap();
//! assert!((r.g2norm - 0.302018).abs() < 1e-6);
//! assert_eq!(r.classification, Statistics::SubPoissonian);
//! ```

pub mod asymptotics;
pub mod correlators;
pub mod dynamics;
mod error;
pub mod numeric;
mod params;
mod spectrum;
mod thermal;

pub use correlators::{CorrelatorResult, FarFieldGeometry, Statistics};
pub use error::{Error, Result};
pub use params::{eta_lower_bound, EnsembleParams};
pub use spectrum::{DickeSpectrum, LadderCoeffs};
pub use thermal::ThermalState;
