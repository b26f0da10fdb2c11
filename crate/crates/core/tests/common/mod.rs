//! Dense-matrix reference implementations, independent of the indexed
//! sums and structured generator in the library.

#![allow(dead_code)]

use dicke_therm::dynamics::C64;
use dicke_therm::EnsembleParams;
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;

pub struct DenseOps {
    pub lower: DMatrix<f64>,
    pub raise: DMatrix<f64>,
    pub sz: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub h_atom: DMatrix<f64>,
}

impl DenseOps {
    pub fn new(p: &EnsembleParams) -> Self {
        let n = p.n();
        let d = n + 1;
        let nf = n as f64;
        let mut lower = DMatrix::zeros(d, d);
        for k in 1..=n {
            let kf = k as f64;
            lower[(k - 1, k)] = (kf * (nf - kf + 1.0)).sqrt();
        }
        let raise = lower.transpose();
        let sz = DMatrix::from_fn(d, d, |j, k| if j == k { j as f64 - nf / 2.0 } else { 0.0 });
        let dt = if n == 1 { 0.0 } else { p.eta() / (nf - 1.0) };
        let wb = 1.0 + dt;
        let id = DMatrix::<f64>::identity(d, d);
        let omega = &id * wb + &sz * (2.0 * dt);
        let h_atom = &sz * wb - (&raise * &lower) * dt;
        Self { lower, raise, sz, omega, h_atom }
    }

    pub fn dim(&self) -> usize {
        self.sz.nrows()
    }

    /// f(ω̂) for a diagonal ω̂.
    pub fn func_of_omega(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |j, k| if j == k { f(self.omega[(j, j)]) } else { 0.0 })
    }

    /// e^{−xH_a}/Z with plain exponentials.
    pub fn gibbs(&self, x: f64) -> DMatrix<f64> {
        let d = self.dim();
        let e_min = (0..d).map(|k| self.h_atom[(k, k)]).fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = (0..d).map(|k| (-x * (self.h_atom[(k, k)] - e_min)).exp()).collect();
        let z: f64 = w.iter().sum();
        DMatrix::from_fn(d, d, |j, k| if j == k { w[j] / z } else { 0.0 })
    }
}

/// `(⟨S⁺ω̂⁴S⁻⟩, ⟨S⁺ω̂²S⁺ω̂⁴S⁻ω̂²S⁻⟩)` as traces against the Gibbs matrix.
pub fn matrix_trace_correlators(p: &EnsembleParams) -> (f64, f64) {
    let ops = DenseOps::new(p);
    let rho = ops.gibbs(p.x());
    let w2 = ops.func_of_omega(|w| w * w);
    let w4 = ops.func_of_omega(|w| w.powi(4));
    let g1 = (&rho * &ops.raise * &w4 * &ops.lower).trace();
    let g2 = (&rho * &ops.raise * &w2 * &ops.raise * &w4 * &ops.lower * &w2 * &ops.lower).trace();
    (g1, g2)
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

/// `−[S⁺, D₁S⁻ρ] − [S⁻, S⁺D₂ρ] + H.c.` by full matrix products.
pub fn dense_liouvillian(p: &EnsembleParams, gamma0: f64, rho: &DMatrix<C64>) -> DMatrix<C64> {
    let ops = DenseOps::new(p);
    let x = p.x();
    let nbar = |w: f64| 1.0 / ((x * w).exp() - 1.0);
    let d1 = to_complex(&ops.func_of_omega(|w| 0.5 * gamma0 * w.powi(3) * (1.0 + nbar(w))));
    let d2 = to_complex(&ops.func_of_omega(|w| 0.5 * gamma0 * w.powi(3) * nbar(w)));
    let sp = to_complex(&ops.raise);
    let sm = to_complex(&ops.lower);
    let a = &d1 * &sm * rho;
    let b = &sp * &d2 * rho;
    let m = -(&sp * &a - &a * &sp) - (&sm * &b - &b * &sm);
    &m + m.adjoint()
}

/// Random Hermitian, positive, unit-trace matrix `AA†/Tr(AA†)`.
pub fn random_density(rng: &mut StdRng, d: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = m.trace();
    m / tr
}

/// Random admissible `(N, η, x)` with `N ≤ n_max`.
pub fn random_params(rng: &mut StdRng, n_max: usize) -> EnsembleParams {
    let n = rng.gen_range(1..=n_max);
    let eta = if n == 1 {
        0.0
    } else {
        let lo = dicke_therm::eta_lower_bound(n).max(-0.9) * 0.95;
        rng.gen_range(lo..0.9)
    };
    let x = 10f64.powf(rng.gen_range(-2.0..1.5));
    EnsembleParams::new(n, eta, x).unwrap()
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
