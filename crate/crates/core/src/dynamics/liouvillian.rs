//! Generator of the thermal master equation on the Dicke subspace,
//!
//! ```text
//! dρ/dt = −[S⁺, D₁ S⁻ ρ] − [S⁻, S⁺ D₂ ρ] + H.c.,
//! D₁ = Γ(ω̂)(1 + n̄(ω̂))/2,   D₂ = Γ(ω̂) n̄(ω̂)/2,
//! ```
//!
//! with the rate operators placed exactly as written: `D₁` between `S⁻` and
//! `ρ`, `D₂` between `S⁺` and `ρ`. Both are diagonal in `|n⟩`, so the
//! generator acts entrywise in `O(N²)`.

use nalgebra::DMatrix;

use super::density::{DensityMatrix, C64};
use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::spectrum::{DickeSpectrum, LadderCoeffs};
use crate::thermal::ThermalState;

/// Level-dependent decay rate `Γ(ω) = Γ₀ω³` and thermal occupation
/// `n̄(ω) = 1/(e^{xω} − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    pub gamma0: f64,
    pub x: f64,
}

impl RateModel {
    pub fn new(gamma0: f64, x: f64) -> Self {
        Self { gamma0, x }
    }

    /// `Γ₀ = 1` at the temperature of `params`.
    pub fn thermal(params: &EnsembleParams) -> Self {
        Self { gamma0: 1.0, x: params.x() }
    }

    pub fn gamma(&self, omega: f64) -> f64 {
        self.gamma0 * omega * omega * omega
    }

    pub fn nbar(&self, omega: f64) -> f64 {
        1.0 / (self.x * omega).exp_m1()
    }
}

/// Which master equation a [`Generator`] implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Operator-valued rates evaluated at the eigenvalues of `ω̂`.
    Full,
    /// Scalar rates at `ω₀`; the `η → 0` collective master equation.
    DickeLimit,
}

/// Precomputed coefficients of the structured generator.
#[derive(Debug, Clone)]
pub struct Generator {
    dim: usize,
    // S⁻|n⟩ = c[n]|n−1⟩, with c[N+1] = 0 appended
    c: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    // diagonal loss a_j = c_j² D₁(j−1) + c_{j+1}² D₂(j)
    loss: Vec<f64>,
}

impl Generator {
    pub fn new(params: &EnsembleParams, rates: &RateModel, kind: GeneratorKind) -> Result<Self> {
        let n = params.n();
        let omegas: Vec<f64> = match kind {
            GeneratorKind::Full => DickeSpectrum::new(params).frequencies().to_vec(),
            GeneratorKind::DickeLimit => vec![1.0; n + 1],
        };
        if let Some((level, &omega)) = omegas.iter().enumerate().find(|(_, &w)| w.is_nan() || w <= 0.0) {
            return Err(Error::NonPositiveFrequency { level, omega });
        }
        let mut c = LadderCoeffs::new(n).lower().to_vec();
        c.push(0.0);
        let d1: Vec<f64> = omegas.iter().map(|&w| 0.5 * rates.gamma(w) * (1.0 + rates.nbar(w))).collect();
        let d2: Vec<f64> = omegas.iter().map(|&w| 0.5 * rates.gamma(w) * rates.nbar(w)).collect();
        let loss = (0..=n)
            .map(|j| {
                let emit = if j > 0 { c[j] * c[j] * d1[j - 1] } else { 0.0 };
                emit + c[j + 1] * c[j + 1] * d2[j]
            })
            .collect();
        Ok(Self { dim: n + 1, c, d1, d2, loss })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest diagonal loss rate; bounds the stiffness of the generator.
    pub fn max_rate(&self) -> f64 {
        self.loss.iter().copied().fold(0.0, f64::max)
    }

    // (−[S⁺, D₁S⁻ρ] − [S⁻, S⁺D₂ρ])_{jk}
    #[inline]
    fn half(&self, rho: &DMatrix<C64>, j: usize, k: usize) -> C64 {
        let c = &self.c;
        let mut v = rho[(j, k)] * -self.loss[j];
        if j + 1 < self.dim && k + 1 < self.dim {
            v += rho[(j + 1, k + 1)] * (self.d1[j] * c[j + 1] * c[k + 1]);
        }
        if j > 0 && k > 0 {
            v += rho[(j - 1, k - 1)] * (self.d2[j - 1] * c[j] * c[k]);
        }
        v
    }

    /// Writes `L[ρ]` into `out`. The result is exactly Hermitian for any
    /// input, Hermitian or not, since the `H.c.` half is added entrywise.
    pub fn apply_into(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = self.dim;
        for j in 0..d {
            for k in 0..d {
                out[(j, k)] = self.half(rho, j, k) + self.half(rho, k, j).conj();
            }
        }
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        self.apply_into(rho, &mut out);
        out
    }
}

fn check_dim(rho: &DensityMatrix, params: &EnsembleParams) -> Result<()> {
    if rho.dim() != params.n() + 1 {
        return Err(Error::DimensionMismatch { expected: params.n() + 1, found: rho.dim() });
    }
    Ok(())
}

/// `dρ/dt` under the full master equation.
pub fn liouvillian_apply(rho: &DensityMatrix, params: &EnsembleParams, rates: &RateModel) -> Result<DMatrix<C64>> {
    check_dim(rho, params)?;
    Ok(Generator::new(params, rates, GeneratorKind::Full)?.apply(rho.matrix()))
}

/// `dρ/dt` under the `η → 0` collective master equation
/// `−Γ(1+n̄)/2·[S⁺, S⁻ρ] − Γn̄/2·[S⁻, S⁺ρ] + H.c.` with scalar rates at ω₀.
/// The coupling in `params` is ignored.
///
/// Evaluated through explicit ladder products rather than the structured
/// kernel of [`Generator`].
pub fn dicke_limit_liouvillian(rho: &DensityMatrix, params: &EnsembleParams, rates: &RateModel) -> Result<DMatrix<C64>> {
    check_dim(rho, params)?;
    let n = params.n();
    let c = LadderCoeffs::new(n);
    let a = C64::new(0.5 * rates.gamma(1.0) * (1.0 + rates.nbar(1.0)), 0.0);
    let b = C64::new(0.5 * rates.gamma(1.0) * rates.nbar(1.0), 0.0);
    let r = rho.matrix();
    let lower = lower_op(&c);
    let raise = lower.transpose();
    let sm_rho = &lower * r;
    let sp_rho = &raise * r;
    let m = (&raise * &sm_rho - &sm_rho * &raise) * (-a) + (&lower * &sp_rho - &sp_rho * &lower) * (-b);
    Ok(&m + m.adjoint())
}

fn lower_op(c: &LadderCoeffs) -> DMatrix<C64> {
    let d = c.dim();
    let mut s = DMatrix::zeros(d, d);
    for k in 1..d {
        s[(k - 1, k)] = C64::new(c.lower()[k], 0.0);
    }
    s
}

/// `max |L[ρ_s]_{jk}| / Γ₀` for the Gibbs state of `params`.
pub fn steady_state_residual(params: &EnsembleParams, rates: &RateModel) -> Result<f64> {
    steady_state_residual_with(params, rates, GeneratorKind::Full)
}

pub fn steady_state_residual_with(params: &EnsembleParams, rates: &RateModel, kind: GeneratorKind) -> Result<f64> {
    let gibbs_params = match kind {
        GeneratorKind::Full => *params,
        GeneratorKind::DickeLimit => params.with_eta(0.0)?,
    };
    let spec = DickeSpectrum::new(&gibbs_params);
    let rho = DensityMatrix::gibbs(&ThermalState::new(&gibbs_params, &spec));
    let l = match kind {
        GeneratorKind::Full => liouvillian_apply(&rho, params, rates)?,
        GeneratorKind::DickeLimit => dicke_limit_liouvillian(&rho, params, rates)?,
    };
    Ok(l.iter().map(|z| z.norm()).fold(0.0, f64::max) / rates.gamma0)
}
