//! Spectrum of the atomic Hamiltonian on the symmetric Dicke subspace and
//! the collective ladder coefficients.
//!
//! `H_a = ω̄₀ S_z − δ̃ S⁺S⁻` and `ω̂ = ω̄₀ + 2δ̃ S_z` are both diagonal in
//! the Dicke basis `|n⟩` (n atoms excited), so everything here is a closed
//! form in `n`.

use crate::params::EnsembleParams;

/// Energies `E_n` of `H_a` and eigenfrequencies `ω_m` of `ω̂`, `n, m = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeSpectrum {
    n: usize,
    delta_tilde: f64,
    energies: Vec<f64>,
    frequencies: Vec<f64>,
}

impl DickeSpectrum {
    pub fn new(params: &EnsembleParams) -> Self {
        let n = params.n();
        let nf = n as f64;
        let dt = params.delta_tilde();
        let wb = params.omega_bar();
        let energies = (0..=n)
            .map(|k| {
                let k = k as f64;
                wb * (k - 0.5 * nf) - dt * k * (nf - k + 1.0)
            })
            .collect();
        // ω_m = ω̄₀ + 2δ̃(m − N/2) = 1 + δ̃(2m + 1 − N)
        let frequencies = (0..=n)
            .map(|m| 1.0 + dt * (2.0 * m as f64 + 1.0 - nf))
            .collect();
        Self { n, delta_tilde: dt, energies, frequencies }
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvalues of `ω̂`. `ω_m` is also the frequency of the `m+1 → m`
    /// transition, `E_{m+1} − E_m`.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// `E_a − E_b` without the cancellation of subtracting two large energies.
    pub fn gap(&self, a: usize, b: usize) -> f64 {
        let (a, b) = (a as f64, b as f64);
        (a - b) * (1.0 + self.delta_tilde * (a + b - self.n as f64))
    }

    /// Index of the lowest energy level (first one on ties).
    pub fn ground_index(&self) -> usize {
        let mut best = 0;
        for (k, &e) in self.energies.iter().enumerate() {
            if e < self.energies[best] {
                best = k;
            }
        }
        best
    }
}

/// `S⁻|n⟩ = C⁻(n)|n−1⟩` and `S⁺|n⟩ = C⁺(n)|n+1⟩` for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderCoeffs {
    lower: Vec<f64>,
    raise: Vec<f64>,
}

impl LadderCoeffs {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        let lower = (0..=n).map(|k| (k as f64 * (nf - k as f64 + 1.0)).sqrt()).collect();
        let raise = (0..=n).map(|k| ((nf - k as f64) * (k as f64 + 1.0)).sqrt()).collect();
        Self { lower, raise }
    }

    pub fn atoms(&self) -> usize {
        self.lower.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `C⁻(n) = √(n(N−n+1))`.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `C⁺(n) = √((N−n)(n+1))`.
    pub fn raise(&self) -> &[f64] {
        &self.raise
    }

    /// `C⁻(n)² = n(N−n+1)`, exact in floating point.
    pub fn lower_sq(&self, k: usize) -> f64 {
        let n = self.atoms() as f64;
        let k = k as f64;
        k * (n - k + 1.0)
    }
}
