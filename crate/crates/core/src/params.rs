//! Validated ensemble parameters.
//!
//! Code units: ω₀ = ħ = k_B = 1 and the single-atom decay rate Γ(ω₀) = 1,
//! which fixes the time unit of the dynamics. Every quantity here is
//! dimensionless.

use crate::error::{Error, Result};

/// Atom count `N`, coupling ratio `eta = δ/ω₀` and inverse temperature
/// `x = ħω₀/(k_B T)`.
///
/// Only constructible through [`EnsembleParams::new`], so every value in
/// circulation satisfies the regime bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    n: usize,
    eta: f64,
    x: f64,
}

impl EnsembleParams {
    /// Validates a raw `(N, eta, x)` triple.
    pub fn new(n: usize, eta: f64, x: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroAtoms);
        }
        if n == 1 {
            if eta != 0.0 {
                return Err(Error::SingleAtomWithCoupling { eta });
            }
        } else {
            let lower = eta_lower_bound(n);
            if !(eta.abs() < 1.0 && eta > lower) {
                return Err(Error::EtaOutOfRange { n, eta, lower });
            }
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::NonPositiveX { x });
        }
        Ok(Self { n, eta, x })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Inverse temperature in code units (β = x since ω₀ = 1).
    pub fn beta(&self) -> f64 {
        self.x
    }

    /// Pairwise coupling δ̃ = η/(N−1); zero for a single atom.
    pub fn delta_tilde(&self) -> f64 {
        if self.n == 1 {
            0.0
        } else {
            self.eta / (self.n - 1) as f64
        }
    }

    /// Shifted transition frequency ω̄₀ = 1 + δ̃.
    pub fn omega_bar(&self) -> f64 {
        1.0 + self.delta_tilde()
    }

    /// Same `N` and `x` with a different coupling.
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.n, eta, self.x)
    }

    /// Same `N` and `eta` at a different temperature.
    pub fn with_x(&self, x: f64) -> Result<Self> {
        Self::new(self.n, self.eta, x)
    }
}

/// Lowest admissible coupling, −(N−1)/(N+1): below it the top transition
/// frequency 1 + η(N+1)/(N−1) is no longer positive.
pub fn eta_lower_bound(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        -((n - 1) as f64) / ((n + 1) as f64)
    }
}
