//! Explicit Runge–Kutta integration of the master equation.

use nalgebra::DMatrix;

use super::density::{hermiticity_defect, DensityMatrix, C64};
use super::liouvillian::{Generator, GeneratorKind, RateModel};
use super::MAX_DYNAMICS_ATOMS;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::spectrum::DickeSpectrum;
use crate::thermal::ThermalState;

/// Largest trace change tolerated in a single step.
pub const MAX_STEP_TRACE_DRIFT: f64 = 1e-8;
/// Minimum eigenvalue below which a positivity warning is logged.
pub const POSITIVITY_WARN: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    /// Classical RK4 with at most this step (shrunk to land on sample times).
    Fixed(f64),
    /// RK4 with [`heuristic_step`].
    Auto,
    /// Dormand–Prince 5(4) with error control.
    Adaptive { rtol: f64, atol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub control: StepControl,
    /// Number of snapshots after `t = 0`, equally spaced up to `t_end`.
    pub samples: usize,
    /// Keep full density matrices, not just populations and diagnostics.
    pub record_states: bool,
    /// Rescale to unit trace after every step. Off by default so that drift
    /// stays visible in the diagnostics.
    pub renormalize_trace: bool,
    pub kind: GeneratorKind,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            control: StepControl::Auto,
            samples: 100,
            record_states: false,
            renormalize_trace: false,
            kind: GeneratorKind::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `Re Tr ρ`.
    pub trace: f64,
    /// `|Tr ρ − 1|`.
    pub trace_drift: f64,
    pub herm_defect: f64,
    pub min_eig: f64,
    pub trace_dist_to_gibbs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Empty unless [`IntegrateOptions::record_states`] is set.
    pub states: Vec<DensityMatrix>,
    pub populations: Vec<Vec<f64>>,
    pub diagnostics: Vec<Diagnostics>,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_diagnostics(&self) -> &Diagnostics {
        self.diagnostics.last().expect("trajectory has at least the initial snapshot")
    }
}

/// `0.01 / (Γ₀ (1 + n̄_max) N²)`, with `n̄_max` taken at the lowest
/// transition frequency.
pub fn heuristic_step(params: &EnsembleParams, rates: &RateModel) -> f64 {
    let spec = DickeSpectrum::new(params);
    let w_min = spec.frequencies().iter().copied().fold(f64::INFINITY, f64::min);
    let n = params.n() as f64;
    0.01 / (rates.gamma0 * (1.0 + rates.nbar(w_min)) * n * n)
}

struct Rk4Work {
    k: [DMatrix<C64>; 4],
    tmp: DMatrix<C64>,
}

impl Rk4Work {
    fn new(d: usize) -> Self {
        let z = || DMatrix::zeros(d, d);
        Self { k: [z(), z(), z(), z()], tmp: z() }
    }
}

fn axpy_into(out: &mut DMatrix<C64>, y: &DMatrix<C64>, a: f64, k: &DMatrix<C64>) {
    for ((o, &yv), &kv) in out.as_mut_slice().iter_mut().zip(y.as_slice()).zip(k.as_slice()) {
        *o = yv + kv * a;
    }
}

fn add_scaled(out: &mut DMatrix<C64>, a: f64, k: &DMatrix<C64>) {
    for (o, &kv) in out.as_mut_slice().iter_mut().zip(k.as_slice()) {
        *o += kv * a;
    }
}

fn rk4_step(gen: &Generator, y: &mut DMatrix<C64>, h: f64, w: &mut Rk4Work) {
    let [k1, k2, k3, k4] = &mut w.k;
    gen.apply_into(y, k1);
    axpy_into(&mut w.tmp, y, 0.5 * h, k1);
    gen.apply_into(&w.tmp, k2);
    axpy_into(&mut w.tmp, y, 0.5 * h, k2);
    gen.apply_into(&w.tmp, k3);
    axpy_into(&mut w.tmp, y, h, k3);
    gen.apply_into(&w.tmp, k4);
    let s = h / 6.0;
    for (i, v) in y.as_mut_slice().iter_mut().enumerate() {
        *v += (k1.as_slice()[i] + (k2.as_slice()[i] + k3.as_slice()[i]) * 2.0 + k4.as_slice()[i]) * s;
    }
}

// Dormand–Prince 5(4); the generator is autonomous so the nodes c_i drop out
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince attempt; returns the proposed state and the scaled
/// error norm (accept when ≤ 1).
fn dopri_attempt(gen: &Generator, y: &DMatrix<C64>, h: f64, rtol: f64, atol: f64) -> (DMatrix<C64>, f64) {
    let d = y.nrows();
    let mut k: Vec<DMatrix<C64>> = Vec::with_capacity(7);
    let mut stage = DMatrix::zeros(d, d);
    for row in DP_A.iter() {
        stage.copy_from(y);
        for (kj, &a) in k.iter().zip(row) {
            if a != 0.0 {
                add_scaled(&mut stage, h * a, kj);
            }
        }
        k.push(gen.apply(&stage));
    }
    // the last stage argument is the fifth-order solution
    let y_new = stage;
    let mut err = DMatrix::zeros(d, d);
    for (kj, &e) in k.iter().zip(DP_E.iter()) {
        if e != 0.0 {
            add_scaled(&mut err, h * e, kj);
        }
    }
    let norm = err
        .iter()
        .zip(y.iter().zip(y_new.iter()))
        .map(|(e, (a, b))| e.norm() / (atol + rtol * a.norm().max(b.norm())))
        .fold(0.0, f64::max);
    (y_new, norm)
}

fn check_step(prev_trace: C64, y: &DMatrix<C64>, t: f64) -> Result<C64> {
    if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFiniteState { t });
    }
    let tr = y.trace();
    let drift = (tr - prev_trace).norm();
    if drift > MAX_STEP_TRACE_DRIFT {
        return Err(Error::StepTooLarge { t, drift });
    }
    Ok(tr)
}

fn renormalize(y: &mut DMatrix<C64>) -> C64 {
    let tr = y.trace().re;
    *y /= C64::new(tr, 0.0);
    y.trace()
}

/// Integrates `ρ(t)` from `rho0` at `t = 0` to `t_end` (units of 1/Γ₀).
pub fn integrate(
    rho0: &DensityMatrix,
    t_end: f64,
    params: &EnsembleParams,
    rates: &RateModel,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if params.n() > MAX_DYNAMICS_ATOMS {
        return Err(Error::InvalidIntegration(format!(
            "N = {} exceeds the dynamics cap of {MAX_DYNAMICS_ATOMS}",
            params.n()
        )));
    }
    if rho0.dim() != params.n() + 1 {
        return Err(Error::DimensionMismatch { expected: params.n() + 1, found: rho0.dim() });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidIntegration(format!("t_end must be positive, got {t_end}")));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidIntegration("at least one sample is required".into()));
    }
    let h_max = match opts.control {
        StepControl::Fixed(h) if !(h > 0.0 && h.is_finite()) => {
            return Err(Error::InvalidIntegration(format!("step must be positive, got {h}")));
        }
        StepControl::Fixed(h) => h,
        StepControl::Auto | StepControl::Adaptive { .. } => heuristic_step(params, rates),
    };

    let gen = Generator::new(params, rates, opts.kind)?;
    let gibbs_params = match opts.kind {
        GeneratorKind::Full => *params,
        GeneratorKind::DickeLimit => params.with_eta(0.0)?,
    };
    let gibbs = DensityMatrix::gibbs(&ThermalState::new(&gibbs_params, &DickeSpectrum::new(&gibbs_params)));

    let mut traj = Trajectory {
        times: Vec::with_capacity(opts.samples + 1),
        states: Vec::new(),
        populations: Vec::with_capacity(opts.samples + 1),
        diagnostics: Vec::with_capacity(opts.samples + 1),
        steps: 0,
    };
    let mut warned = false;
    let mut record = |traj: &mut Trajectory, t: f64, y: &DMatrix<C64>| -> Result<()> {
        let rho = DensityMatrix::from_matrix_unchecked(y.clone());
        let diag = Diagnostics {
            trace: rho.trace().re,
            trace_drift: (rho.trace() - C64::new(1.0, 0.0)).norm(),
            herm_defect: hermiticity_defect(y),
            min_eig: rho.min_eigenvalue(),
            trace_dist_to_gibbs: rho.trace_distance(&gibbs)?,
        };
        if diag.min_eig < POSITIVITY_WARN && !warned {
            log::warn!("density matrix lost positivity at t = {t}: min eigenvalue {:e}", diag.min_eig);
            warned = true;
        }
        traj.times.push(t);
        traj.populations.push(rho.populations());
        traj.diagnostics.push(diag);
        if opts.record_states {
            traj.states.push(rho);
        }
        Ok(())
    };

    let mut y = rho0.matrix().clone();
    let mut tr = y.trace();
    let mut t = 0.0;
    record(&mut traj, t, &y)?;
    let mut work = Rk4Work::new(gen.dim());
    let mut h_adapt = h_max;

    for i in 1..=opts.samples {
        let target = t_end * i as f64 / opts.samples as f64;
        match opts.control {
            StepControl::Fixed(_) | StepControl::Auto => {
                let steps = ((target - t) / h_max).ceil().max(1.0) as usize;
                let h = (target - t) / steps as f64;
                for s in 0..steps {
                    rk4_step(&gen, &mut y, h, &mut work);
                    let ts = t + h * (s + 1) as f64;
                    tr = check_step(tr, &y, ts)?;
                    if opts.renormalize_trace {
                        tr = renormalize(&mut y);
                    }
                }
                traj.steps += steps;
            }
            StepControl::Adaptive { rtol, atol } => {
                while t < target {
                    let h = h_adapt.min(target - t);
                    let (y_new, err) = dopri_attempt(&gen, &y, h, rtol, atol);
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if err <= 1.0 {
                        let ts = if h == target - t { target } else { t + h };
                        tr = check_step(tr, &y_new, ts)?;
                        y = y_new;
                        if opts.renormalize_trace {
                            tr = renormalize(&mut y);
                        }
                        t = ts;
                        traj.steps += 1;
                    }
                    h_adapt = h * factor;
                    if h_adapt < 1e-14 * t_end {
                        return Err(Error::InvalidIntegration(format!("step size underflow at t = {t}")));
                    }
                }
            }
        }
        t = target;
        record(&mut traj, t, &y)?;
    }
    Ok(traj)
}
