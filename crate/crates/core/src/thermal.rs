//! Gibbs steady state `ρ_s = e^{−βH_a}/Z` over the Dicke states.
//!
//! Weights are kept in the log domain relative to the lowest level, so
//! `x ≫ 1` never underflows the dominant population.

use crate::numeric::{log_sum_exp, neumaier_sum};
use crate::params::EnsembleParams;
use crate::spectrum::DickeSpectrum;

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    log_weights: Vec<f64>,
    populations: Vec<f64>,
    log_z: f64,
    offset: f64,
}

impl ThermalState {
    pub fn new(params: &EnsembleParams, spectrum: &DickeSpectrum) -> Self {
        let x = params.x();
        let ground = spectrum.ground_index();
        // ℓ_n = −x(E_n − E_min), max ℓ_n = 0 at the ground level
        let log_weights: Vec<f64> = (0..spectrum.dim())
            .map(|k| if k == ground { 0.0 } else { -x * spectrum.gap(k, ground) })
            .collect();
        let weights: Vec<f64> = log_weights.iter().map(|l| l.exp()).collect();
        let z = neumaier_sum(weights.iter().copied());
        let populations = weights.iter().map(|w| w / z).collect();
        let log_z = log_sum_exp(&log_weights);
        let offset = -x * spectrum.energies()[ground];
        Self { log_weights, populations, log_z, offset }
    }

    /// Shifted log weights `ℓ_n`, with `max ℓ_n = 0`.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    /// `ln Σ exp(ℓ_n)`, the log partition function of the shifted weights.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// Unshifted `ln Z = ln Σ e^{−x E_n}`.
    pub fn ln_partition(&self) -> f64 {
        self.offset + self.log_z
    }

    /// `ln p_n`, finite even where `p_n` itself underflows.
    pub fn log_population(&self, k: usize) -> f64 {
        self.log_weights[k] - self.log_z
    }

    pub fn dim(&self) -> usize {
        self.populations.len()
    }
}
