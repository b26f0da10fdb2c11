//! Closed-form limits of the photon statistics and a validator that checks
//! them against the exact correlator engine.
//!
//! Validity windows are conventions of this crate: the strong-bath forms
//! are compared for `x ≤ 1e−4`, the weak-bath forms for `x ≥ 10`.

use std::fmt;

use crate::correlators::{evaluate, intensity_ratio, CorrelatorResult};
use crate::error::Result;
use crate::params::EnsembleParams;

/// `ln √2`.
pub fn ln_sqrt2() -> f64 {
    0.5 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathRegime {
    /// `x → 0`.
    StrongBath,
    /// `x ≫ 1`.
    WeakBath,
}

/// Uncoupled (`η = 0`) `g⁽²⁾(0)`: `6(N+3)(N−1)/(5N(N+2))` for a hot bath,
/// `2 − 2/N` for a cold one.
pub fn g2_limit_eta0(n: usize, regime: BathRegime) -> f64 {
    let nf = n as f64;
    match regime {
        BathRegime::StrongBath => 6.0 * (nf + 3.0) * (nf - 1.0) / (5.0 * nf * (nf + 2.0)),
        BathRegime::WeakBath => 2.0 - 2.0 / nf,
    }
}

/// Coefficient of `η²` in the hot-bath expansion of `g⁽²⁾(0)`,
/// `48(N+3)(N²+2N−18)/(25N(N−1)(N+2))`. Requires `N ≥ 2`.
pub fn strong_bath_eta2_coefficient(n: usize) -> f64 {
    let nf = n as f64;
    48.0 * (nf + 3.0) * (nf * nf + 2.0 * nf - 18.0) / (25.0 * nf * (nf - 1.0) * (nf + 2.0))
}

/// Hot-bath `g⁽²⁾(0)` to second order in `η`. Intended for `|η| ≤ 0.2`.
pub fn g2_strong_bath(n: usize, eta: f64) -> f64 {
    g2_limit_eta0(n, BathRegime::StrongBath) + strong_bath_eta2_coefficient(n) * eta * eta
}

/// Cold-bath `g⁽²⁾(0)`,
/// `2(1 − 1/N)·[(N−1−(N−3)η)/((N−1)(1−η))]⁴·exp(−2ηx/(N−1))`.
///
/// Requires `N ≥ 2`; accurate once `x` is large against the level spacing
/// (roughly `x ≥ 10`).
pub fn g2_weak_bath(n: usize, eta: f64, x: f64) -> f64 {
    let nf = n as f64;
    let ratio = (nf - 1.0 - (nf - 3.0) * eta) / ((nf - 1.0) * (1.0 - eta));
    2.0 * (1.0 - 1.0 / nf) * ratio.powi(4) * (-2.0 * eta * x / (nf - 1.0)).exp()
}

/// Cold-bath intensity `G₁/Ψ = N(1−η)⁴ exp(−x(1−η))`.
pub fn g1_weak_bath(n: usize, eta: f64, x: f64) -> f64 {
    n as f64 * (1.0 - eta).powi(4) * (-x * (1.0 - eta)).exp()
}

/// Coupling above which a large, cold ensemble emits sub-Poissonian light,
/// `(N/x)·ln√2`.
pub fn eta_threshold(n: usize, x: f64) -> f64 {
    n as f64 / x * ln_sqrt2()
}

/// Published hot-bath intensity ratio `1 + 72η² + 2064η⁴/7`.
///
/// Carries no `N` dependence, unlike the exact ratio (`1 + 6η² + η⁴` at
/// `N = 2`), so it is only ever reported next to the exact value.
pub fn intensity_ratio_strong_bath(eta: f64) -> f64 {
    let e2 = eta * eta;
    1.0 + 72.0 * e2 + 2064.0 * e2 * e2 / 7.0
}

/// Which closed form a report row compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eta0StrongBath,
    Eta0WeakBath,
    StrongBathCoefficient,
    StrongBathG2,
    WeakBathG2,
    WeakBathG1,
    WeakBathRatio,
    StrongBathRatio,
}

impl Formula {
    pub const ALL: [Formula; 8] = [
        Formula::Eta0StrongBath,
        Formula::Eta0WeakBath,
        Formula::StrongBathCoefficient,
        Formula::StrongBathG2,
        Formula::WeakBathG2,
        Formula::WeakBathG1,
        Formula::WeakBathRatio,
        Formula::StrongBathRatio,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Formula::Eta0StrongBath => "eta0_strong_bath_g2",
            Formula::Eta0WeakBath => "eta0_weak_bath_g2",
            Formula::StrongBathCoefficient => "strong_bath_eta2_coefficient",
            Formula::StrongBathG2 => "strong_bath_g2",
            Formula::WeakBathG2 => "weak_bath_g2",
            Formula::WeakBathG1 => "weak_bath_g1",
            Formula::WeakBathRatio => "weak_bath_intensity_ratio",
            Formula::StrongBathRatio => "strong_bath_intensity_ratio",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Relative tolerances per formula; `None` makes a formula informational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eta0_limits: f64,
    pub strong_coefficient: f64,
    pub weak_g2: f64,
    pub weak_g1: f64,
    pub weak_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eta0_limits: 1e-3,
            strong_coefficient: 1e-2,
            weak_g2: 1e-2,
            weak_g1: 1e-2,
            weak_ratio: 1e-2,
        }
    }
}

impl Tolerances {
    pub fn for_formula(&self, f: Formula) -> Option<f64> {
        match f {
            Formula::Eta0StrongBath | Formula::Eta0WeakBath => Some(self.eta0_limits),
            Formula::StrongBathCoefficient => Some(self.strong_coefficient),
            Formula::WeakBathG2 => Some(self.weak_g2),
            Formula::WeakBathG1 => Some(self.weak_g1),
            Formula::WeakBathRatio => Some(self.weak_ratio),
            Formula::StrongBathG2 | Formula::StrongBathRatio => None,
        }
    }
}

/// Regime boundaries deciding which formulas apply to a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Windows {
    pub strong_x_max: f64,
    pub weak_x_min: f64,
    /// Coupling step of the central second difference for the `η²` coefficient.
    pub fd_step: f64,
}

impl Default for Windows {
    fn default() -> Self {
        Self { strong_x_max: 1e-4, weak_x_min: 10.0, fd_step: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Pass,
    Fail,
    Info,
    Skipped(String),
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Info => "INFO",
            RowStatus::Skipped(_) => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub eta: f64,
    pub x: f64,
    pub formula: Formula,
    pub exact: Option<f64>,
    pub approx: f64,
    pub deviation: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaSummary {
    pub formula: Formula,
    pub rows: usize,
    pub failures: usize,
    pub informational: bool,
    /// Largest deviation and the `(N, η, x)` where it occurs.
    pub worst: Option<(f64, (usize, f64, f64))>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub grid: Vec<EnsembleParams>,
    pub rows: Vec<ReportRow>,
    pub summaries: Vec<FormulaSummary>,
}

impl AsymptoticReport {
    /// True when no toleranced row exceeds its tolerance.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }

    pub fn summary(&self, f: Formula) -> Option<&FormulaSummary> {
        self.summaries.iter().find(|s| s.formula == f)
    }

    pub fn rows_for(&self, f: Formula) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.formula == f)
    }
}

/// `|approx − exact| / max(|exact|, 1e−300)`.
pub fn relative_deviation(approx: f64, exact: f64) -> f64 {
    (approx - exact).abs() / exact.abs().max(1e-300)
}

/// `N ∈ {2, 3, 7}`, `η ∈ {0, 0.1}`, `x ∈ {1e−6, 10, 30}`.
pub fn default_grid() -> Vec<EnsembleParams> {
    let mut grid = Vec::new();
    for n in [2, 3, 7] {
        for eta in [0.0, 0.1] {
            for x in [1e-6, 10.0, 30.0] {
                grid.push(EnsembleParams::new(n, eta, x).expect("default grid is valid"));
            }
        }
    }
    grid
}

/// `η²` coefficient of the exact `g⁽²⁾(0)` by a central second difference
/// in `η` at fixed `N`, `x`.
pub fn numerical_eta2_coefficient(n: usize, x: f64, h: f64) -> Result<f64> {
    let g = |eta: f64| -> Result<f64> { Ok(evaluate(&EnsembleParams::new(n, eta, x)?)?.g2norm) };
    Ok((g(h)? + g(-h)? - 2.0 * g(0.0)?) / (2.0 * h * h))
}

struct RowBuilder<'a> {
    p: &'a EnsembleParams,
    tol: &'a Tolerances,
    rows: &'a mut Vec<ReportRow>,
}

impl RowBuilder<'_> {
    fn push(&mut self, formula: Formula, approx: f64, exact: Result<f64>) {
        let tolerance = self.tol.for_formula(formula);
        let (exact, deviation, status) = match exact {
            Ok(e) => {
                let d = relative_deviation(approx, e);
                let status = match tolerance {
                    None => RowStatus::Info,
                    Some(t) if d <= t => RowStatus::Pass,
                    Some(_) => RowStatus::Fail,
                };
                (Some(e), Some(d), status)
            }
            Err(err) => (None, None, RowStatus::Skipped(err.name().to_string())),
        };
        self.rows.push(ReportRow {
            n: self.p.n(),
            eta: self.p.eta(),
            x: self.p.x(),
            formula,
            exact,
            approx,
            deviation,
            tolerance,
            status,
        });
    }
}

/// Compares every applicable closed form against the exact engine at each
/// grid point. Rows come out in grid order, then in [`Formula`] order.
pub fn validate_asymptotics(grid: &[EnsembleParams]) -> AsymptoticReport {
    validate_asymptotics_with(grid, &Tolerances::default(), &Windows::default())
}

pub fn validate_asymptotics_with(grid: &[EnsembleParams], tol: &Tolerances, win: &Windows) -> AsymptoticReport {
    let mut rows = Vec::new();
    for p in grid {
        let mut rows_here = Vec::new();
        let mut b = RowBuilder { p, tol, rows: &mut rows_here };
        let (n, eta, x) = (p.n(), p.eta(), p.x());
        let exact: Result<CorrelatorResult> = evaluate(p);
        let g2 = || exact.as_ref().map(|r| r.g2norm).map_err(Clone::clone);
        let g1 = || exact.as_ref().map(|r| r.g1).map_err(Clone::clone);

        if x <= win.strong_x_max {
            if eta == 0.0 {
                b.push(Formula::Eta0StrongBath, g2_limit_eta0(n, BathRegime::StrongBath), g2());
            } else if n >= 2 {
                b.push(
                    Formula::StrongBathCoefficient,
                    strong_bath_eta2_coefficient(n),
                    numerical_eta2_coefficient(n, x, win.fd_step),
                );
                b.push(Formula::StrongBathG2, g2_strong_bath(n, eta), g2());
            }
        }
        if x >= win.weak_x_min {
            if eta == 0.0 {
                b.push(Formula::Eta0WeakBath, g2_limit_eta0(n, BathRegime::WeakBath), g2());
            }
            if n >= 2 {
                b.push(Formula::WeakBathG2, g2_weak_bath(n, eta, x), g2());
            }
            b.push(Formula::WeakBathG1, g1_weak_bath(n, eta, x), g1());
            if eta != 0.0 {
                let approx = g1_weak_bath(n, eta, x) / g1_weak_bath(n, 0.0, x);
                b.push(Formula::WeakBathRatio, approx, intensity_ratio(p));
            }
        }
        if x <= win.strong_x_max && eta != 0.0 {
            b.push(Formula::StrongBathRatio, intensity_ratio_strong_bath(eta), intensity_ratio(p));
        }
        rows.append(&mut rows_here);
    }
    let summaries = summarize(&rows);
    AsymptoticReport { grid: grid.to_vec(), rows, summaries }
}

fn summarize(rows: &[ReportRow]) -> Vec<FormulaSummary> {
    Formula::ALL
        .iter()
        .filter_map(|&f| {
            let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.formula == f).collect();
            if mine.is_empty() {
                return None;
            }
            let worst = mine
                .iter()
                .filter_map(|r| r.deviation.map(|d| (d, (r.n, r.eta, r.x))))
                .fold(None, |acc: Option<(f64, (usize, f64, f64))>, cur| match acc {
                    Some(a) if a.0 >= cur.0 => Some(a),
                    _ => Some(cur),
                });
            Some(FormulaSummary {
                formula: f,
                rows: mine.len(),
                failures: mine.iter().filter(|r| r.status == RowStatus::Fail).count(),
                informational: Tolerances::default().for_formula(f).is_none(),
                worst,
            })
        })
        .collect()
}
