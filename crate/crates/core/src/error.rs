use thiserror::Error;

/// Errors raised by parameter validation, the correlator engine and the
/// master-equation integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom count must be at least 1")]
    ZeroAtoms,
    #[error("a single atom cannot carry a dipole-dipole coupling (eta = {eta})")]
    SingleAtomWithCoupling { eta: f64 },
    #[error("eta = {eta} outside the admissible range ({lower}, 1) for N = {n}")]
    EtaOutOfRange { n: usize, eta: f64, lower: f64 },
    #[error("x must be a positive finite number, got {x}")]
    NonPositiveX { x: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scattered intensity underflows to zero; use the asymptotic forms")]
    ZeroIntensity,
    #[error("transition frequency {omega} at level {level} is not positive")]
    NonPositiveFrequency { level: usize, omega: f64 },
    #[error("trace drift {drift:e} in one step at t = {t}; reduce the step size")]
    StepTooLarge { t: f64, drift: f64 },
    #[error("density matrix became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("invalid integration request: {0}")]
    InvalidIntegration(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid far-field geometry: {0}")]
    InvalidGeometry(String),
}

impl Error {
    /// Stable machine-readable identifier, used on diagnostic streams.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroAtoms => "ZeroAtoms",
            Error::SingleAtomWithCoupling { .. } => "SingleAtomWithCoupling",
            Error::EtaOutOfRange { .. } => "EtaOutOfRange",
            Error::NonPositiveX { .. } => "NonPositiveX",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroIntensity => "ZeroIntensity",
            Error::NonPositiveFrequency { .. } => "NonPositiveFrequency",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonFiniteState { .. } => "NonFiniteState",
            Error::InvalidIntegration(_) => "InvalidIntegration",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidGeometry(_) => "InvalidGeometry",
        }
    }

    /// True for errors produced by [`crate::EnsembleParams::new`].
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ZeroAtoms
                | Error::SingleAtomWithCoupling { .. }
                | Error::EtaOutOfRange { .. }
                | Error::NonPositiveX { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
