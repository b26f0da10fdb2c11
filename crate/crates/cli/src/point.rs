//! Single-point evaluation as a JSON document.

use dicke_therm::asymptotics::{
    eta_threshold, g1_weak_bath, g2_limit_eta0, g2_strong_bath, g2_weak_bath, intensity_ratio_strong_bath,
    BathRegime,
};
use dicke_therm::correlators::evaluate;
use dicke_therm::EnsembleParams;
use serde::Serialize;

use crate::error::CliResult;
use crate::format::round_sig;

#[derive(Debug, Clone, Serialize)]
pub struct UncoupledLimits {
    pub strong_bath: Option<f64>,
    pub weak_bath: Option<f64>,
}

/// Closed-form predictions at the same point. Entries that need `N ≥ 2` (or `η = 0`) are `null` otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct Predictions {
    pub eq15: UncoupledLimits,
    pub eq16: Option<f64>,
    pub eq17: Option<f64>,
    pub eq18: f64,
    pub eq19_threshold: Option<f64>,
    pub eq20: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub eta: f64,
    pub x: f64,
    pub g1: f64,
    pub g2: f64,
    pub classification: String,
    pub asymptotic_predictions: Predictions,
}

pub fn run_point(n: usize, eta: f64, x: f64, digits: usize) -> CliResult<PointReport> {
    let p = EnsembleParams::new(n, eta, x)?;
    let r = evaluate(&p)?;
    let multi = n >= 2;
    let rs = |v: f64| round_sig(v, digits);
    let uncoupled = |regime| (eta == 0.0).then(|| rs(g2_limit_eta0(n, regime)));
    Ok(PointReport {
        n,
        eta: rs(eta),
        x: rs(x),
        g1: rs(r.g1),
        g2: rs(r.g2norm),
        classification: r.classification.to_string(),
        asymptotic_predictions: Predictions {
            eq15: UncoupledLimits {
                strong_bath: uncoupled(BathRegime::StrongBath),
                weak_bath: uncoupled(BathRegime::WeakBath),
            },
            eq16: multi.then(|| rs(g2_strong_bath(n, eta))),
            eq17: multi.then(|| rs(g2_weak_bath(n, eta, x))),
            eq18: rs(g1_weak_bath(n, eta, x)),
            eq19_threshold: multi.then(|| rs(eta_threshold(n, x))),
            eq20: rs(intensity_ratio_strong_bath(eta)),
        },
    })
}

pub fn to_json(report: &PointReport) -> String {
    serde_json::to_string_pretty(report).expect("point report serializes") + "\n"
}
