//! Steady-state photon correlators of the far-zone scattered field.
//!
//! With the field traced out, the detected intensity and the zero-delay
//! two-photon rate reduce to atomic expectation values,
//!
//! ```text
//! G₁ / Ψ(R)  = ⟨S⁺ ω̂⁴ S⁻⟩
//! G₂ / Ψ(R)² = ⟨S⁺ ω̂² S⁺ ω̂⁴ S⁻ ω̂² S⁻⟩
//! ```
//!
//! which are diagonal in the Dicke basis and therefore evaluated as index
//! sums over the Gibbs populations. Sums run in the log domain so that the
//! normalized `g⁽²⁾(0)` stays finite when both moments are exponentially
//! small.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use crate::params::EnsembleParams;
use crate::spectrum::{DickeSpectrum, LadderCoeffs};
use crate::thermal::ThermalState;

/// Default half-width of the Poissonian band around `g⁽²⁾(0) = 1`.
pub const DEFAULT_POISSON_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    SubPoissonian,
    Poissonian,
    SuperPoissonian,
}

impl Statistics {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statistics::SubPoissonian => "SubPoissonian",
            Statistics::Poissonian => "Poissonian",
            Statistics::SuperPoissonian => "SuperPoissonian",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "SubPoissonian" => Ok(Statistics::SubPoissonian),
            "Poissonian" => Ok(Statistics::Poissonian),
            "SuperPoissonian" => Ok(Statistics::SuperPoissonian),
            other => Err(format!("unknown photon statistics '{other}'")),
        }
    }
}

/// Ψ-normalized correlators of one steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorResult {
    /// `G₁/Ψ(R)`.
    pub g1: f64,
    /// `G₂/Ψ(R)²`; may underflow to zero while `g2norm` is still accurate.
    pub g2raw: f64,
    /// `g⁽²⁾(0) = G₂/G₁²`.
    pub g2norm: f64,
    pub ln_g1: f64,
    pub ln_g2raw: f64,
    pub classification: Statistics,
}

fn check_dims(state: &ThermalState, spec: &DickeSpectrum, coeffs: &LadderCoeffs) -> Result<()> {
    let expected = state.dim();
    for found in [spec.dim(), coeffs.dim()] {
        if found != expected {
            return Err(Error::DimensionMismatch { expected, found });
        }
    }
    Ok(())
}

// ln Σ_{n≥1} p̃_n n(N−n+1) ω_{n−1}⁴ with shifted weights p̃_n = e^{ℓ_n}
fn ln_first_moment(state: &ThermalState, spec: &DickeSpectrum, coeffs: &LadderCoeffs) -> f64 {
    let w = spec.frequencies();
    let terms: Vec<f64> = (1..state.dim())
        .map(|k| state.log_weights()[k] + coeffs.lower_sq(k).ln() + 4.0 * w[k - 1].ln())
        .collect();
    log_sum_exp(&terms)
}

// ln Σ_{n≥2} p̃_n n(N−n+1)(n−1)(N−n+2) ω_{n−1}⁴ ω_{n−2}⁴
fn ln_second_moment(state: &ThermalState, spec: &DickeSpectrum, coeffs: &LadderCoeffs) -> f64 {
    let w = spec.frequencies();
    let terms: Vec<f64> = (2..state.dim())
        .map(|k| {
            state.log_weights()[k]
                + coeffs.lower_sq(k).ln()
                + coeffs.lower_sq(k - 1).ln()
                + 4.0 * (w[k - 1].ln() + w[k - 2].ln())
        })
        .collect();
    log_sum_exp(&terms)
}

/// Steady-state intensity `G₁/Ψ(R) = Σ_n p_n n(N−n+1) ω_{n−1}⁴`.
pub fn g1_intensity(state: &ThermalState, spec: &DickeSpectrum, coeffs: &LadderCoeffs) -> Result<f64> {
    check_dims(state, spec, coeffs)?;
    Ok((ln_first_moment(state, spec, coeffs) - state.log_z()).exp())
}

/// Intensity, unnormalized two-photon rate and `g⁽²⁾(0)`.
///
/// A single atom gives `g2raw = 0` and hence `g⁽²⁾(0) = 0`. Fails with
/// [`Error::ZeroIntensity`] once `G₁` itself underflows.
pub fn g2_zero(state: &ThermalState, spec: &DickeSpectrum, coeffs: &LadderCoeffs) -> Result<CorrelatorResult> {
    g2_zero_with_tol(state, spec, coeffs, DEFAULT_POISSON_TOL)
}

pub fn g2_zero_with_tol(
    state: &ThermalState,
    spec: &DickeSpectrum,
    coeffs: &LadderCoeffs,
    tol: f64,
) -> Result<CorrelatorResult> {
    check_dims(state, spec, coeffs)?;
    let ln_s1 = ln_first_moment(state, spec, coeffs);
    let ln_s2 = ln_second_moment(state, spec, coeffs);
    let ln_g1 = ln_s1 - state.log_z();
    let ln_g2raw = ln_s2 - state.log_z();
    let g1 = ln_g1.exp();
    if g1 == 0.0 {
        return Err(Error::ZeroIntensity);
    }
    let g2norm = if ln_s2 == f64::NEG_INFINITY {
        0.0
    } else {
        (ln_s2 + state.log_z() - 2.0 * ln_s1).exp()
    };
    Ok(CorrelatorResult {
        g1,
        g2raw: ln_g2raw.exp(),
        g2norm,
        ln_g1,
        ln_g2raw,
        classification: classify_statistics(g2norm, tol),
    })
}

/// Builds spectrum, ladder and Gibbs state for `params` and evaluates the
/// correlators.
pub fn evaluate(params: &EnsembleParams) -> Result<CorrelatorResult> {
    let spec = DickeSpectrum::new(params);
    let coeffs = LadderCoeffs::new(params.n());
    let state = ThermalState::new(params, &spec);
    g2_zero(&state, &spec, &coeffs)
}

/// `G₁(η)/G₁(η = 0)` at the same `N` and `x`.
pub fn intensity_ratio(params: &EnsembleParams) -> Result<f64> {
    let coupled = evaluate(params)?;
    let bare = evaluate(&params.with_eta(0.0)?)?;
    Ok((coupled.ln_g1 - bare.ln_g1).exp())
}

pub fn classify_statistics(g2norm: f64, tol: f64) -> Statistics {
    if g2norm < 1.0 - tol {
        Statistics::SubPoissonian
    } else if g2norm > 1.0 + tol {
        Statistics::SuperPoissonian
    } else {
        Statistics::Poissonian
    }
}

/// Detector placement relative to the emitting dipole, in any consistent
/// length unit. Only meaningful in the far zone `R ≫ λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldGeometry {
    pub r: f64,
    /// Angle between the observation direction and the dipole, in `[0, π]`.
    pub xi: f64,
    pub dipole: f64,
    pub c: f64,
}

impl FarFieldGeometry {
    pub fn new(r: f64, xi: f64, dipole: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidGeometry(format!("detector distance must be positive, got {r}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&xi) {
            return Err(Error::InvalidGeometry(format!("angle must lie in [0, π], got {xi}")));
        }
        Ok(Self { r, xi, dipole, c: 1.0 })
    }
}

/// `Ψ(R) = d²(1 − cos²ξ)/(c⁴R²)`.
pub fn far_field_prefactor(geom: &FarFieldGeometry) -> f64 {
    let s = geom.xi.sin();
    geom.dipole * geom.dipole * s * s / (geom.c.powi(4) * geom.r * geom.r)
}
