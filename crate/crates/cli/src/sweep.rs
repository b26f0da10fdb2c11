//! Grid sweeps of the correlator engine and their CSV form.

use std::io::{Read, Write};

use dicke_therm::correlators::{evaluate, intensity_ratio};
use dicke_therm::{EnsembleParams, Error, Statistics};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Output, Spacing};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_num, round_sig};

pub const HEADER: [&str; 8] = ["N", "eta", "x", "g1", "g2", "ratio", "classification", "reason"];
const NA: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl XGrid {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.count == 0 {
            return Err(CliError::usage("EmptyGrid", "x grid needs at least one point"));
        }
        if !(self.start > 0.0 && self.stop > 0.0 && self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::usage("InvalidGrid", "x grid bounds must be positive and finite"));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect())
    }
}

/// A validated sweep: sorted, de-duplicated axes, every `(N, η)` admissible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub eta: Vec<f64>,
    pub x: Vec<f64>,
    #[serde(serialize_with = "ser_outputs")]
    pub outputs: Vec<Output>,
    pub precision: usize,
}

fn ser_outputs<S: serde::Serializer>(o: &[Output], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(o.iter().map(|o| output_name(*o)))
}

fn output_name(o: Output) -> &'static str {
    match o {
        Output::G1 => "g1",
        Output::G2 => "g2",
        Output::Ratio => "ratio",
        Output::Classification => "classification",
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl SweepConfig {
    pub fn new(n: Vec<usize>, eta: Vec<f64>, x: Vec<f64>, outputs: Vec<Output>, precision: usize) -> CliResult<Self> {
        let mut n = n;
        n.sort_unstable();
        n.dedup();
        let (eta, x) = (sorted_unique(eta), sorted_unique(x));
        let mut outputs = outputs;
        outputs.sort();
        outputs.dedup();
        if n.is_empty() || eta.is_empty() || x.is_empty() {
            return Err(CliError::usage("EmptyGrid", "N, eta and x lists must be non-empty"));
        }
        for &ni in &n {
            for &e in &eta {
                for &xi in &x {
                    EnsembleParams::new(ni, e, xi)?;
                }
            }
        }
        Ok(Self { n, eta, x, outputs, precision })
    }

    pub fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut pts = Vec::with_capacity(self.n.len() * self.eta.len() * self.x.len());
        for &n in &self.n {
            for &eta in &self.eta {
                for &x in &self.x {
                    pts.push((n, eta, x));
                }
            }
        }
        pts
    }

    fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

/// One CSV cell: not requested, not computable, or a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field<T> {
    Empty,
    Na,
    Value(T),
}

impl<T> Field<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub eta: f64,
    pub x: f64,
    pub g1: Field<f64>,
    pub g2: Field<f64>,
    pub ratio: Field<f64>,
    pub classification: Field<Statistics>,
    pub reason: Option<String>,
}

impl SweepRow {
    /// The row as it reads back after being written with `digits` digits.
    pub fn rounded(&self, digits: usize) -> Self {
        let r = |f: Field<f64>| match f {
            Field::Value(v) => Field::Value(round_sig(v, digits)),
            other => other,
        };
        Self {
            eta: round_sig(self.eta, digits),
            x: round_sig(self.x, digits),
            g1: r(self.g1),
            g2: r(self.g2),
            ratio: r(self.ratio),
            classification: self.classification,
            reason: self.reason.clone(),
            n: self.n,
        }
    }
}

fn evaluate_point(cfg: &SweepConfig, (n, eta, x): (usize, f64, f64)) -> CliResult<SweepRow> {
    let p = EnsembleParams::new(n, eta, x)?;
    let mut row = SweepRow {
        n,
        eta,
        x,
        g1: Field::Empty,
        g2: Field::Empty,
        ratio: Field::Empty,
        classification: Field::Empty,
        reason: None,
    };
    let mut reasons: Vec<&'static str> = Vec::new();
    let needs_correlators = cfg.wants(Output::G1) || cfg.wants(Output::G2) || cfg.wants(Output::Classification);
    if needs_correlators {
        match evaluate(&p) {
            Ok(r) => {
                if cfg.wants(Output::G1) {
                    row.g1 = Field::Value(r.g1);
                }
                if cfg.wants(Output::G2) {
                    row.g2 = Field::Value(r.g2norm);
                }
                if cfg.wants(Output::Classification) {
                    row.classification = Field::Value(r.classification);
                }
            }
            Err(e @ Error::ZeroIntensity) => {
                reasons.push(e.name());
                for (o, f) in [(Output::G1, &mut row.g1), (Output::G2, &mut row.g2)] {
                    if cfg.wants(o) {
                        *f = Field::Na;
                    }
                }
                if cfg.wants(Output::Classification) {
                    row.classification = Field::Na;
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    if cfg.wants(Output::Ratio) {
        match intensity_ratio(&p) {
            Ok(v) => row.ratio = Field::Value(v),
            Err(e @ Error::ZeroIntensity) => {
                row.ratio = Field::Na;
                if !reasons.contains(&e.name()) {
                    reasons.push(e.name());
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    if !reasons.is_empty() {
        row.reason = Some(reasons.join(";"));
    }
    Ok(row)
}

/// Evaluates every grid point on `jobs` threads (0: one per CPU). Rows
/// come back in grid order whatever the thread count.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> CliResult<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage("InvalidJobs", e.to_string()))?;
    let points = cfg.points();
    log::debug!("sweep: {} points on {} threads", points.len(), pool.current_num_threads());
    pool.install(|| points.par_iter().map(|&pt| evaluate_point(cfg, pt)).collect())
}

fn cell(f: Field<f64>, digits: usize) -> String {
    match f {
        Field::Empty => String::new(),
        Field::Na => NA.to_string(),
        Field::Value(v) => fmt_num(v, digits),
    }
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow], digits: usize) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let class = match r.classification {
            Field::Empty => String::new(),
            Field::Na => NA.to_string(),
            Field::Value(s) => s.to_string(),
        };
        w.write_record([
            r.n.to_string(),
            fmt_num(r.eta, digits),
            fmt_num(r.x, digits),
            cell(r.g1, digits),
            cell(r.g2, digits),
            cell(r.ratio, digits),
            class,
            r.reason.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn bad_csv(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::usage("MalformedCsv", format!("record {line}: {msg}"))
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> CliResult<Field<T>>
where
    T::Err: std::fmt::Display,
{
    match s {
        "" => Ok(Field::Empty),
        NA => Ok(Field::Na),
        v => v.parse().map(Field::Value).map_err(|e| bad_csv(line, e)),
    }
}

/// Reads back a CSV produced by [`write_sweep_csv`].
pub fn read_sweep_csv<R: Read>(input: R) -> CliResult<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(bad_csv(0, format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let num = |j: usize| rec[j].parse::<f64>().map_err(|e| bad_csv(line, e));
        rows.push(SweepRow {
            n: rec[0].parse().map_err(|e| bad_csv(line, e))?,
            eta: num(1)?,
            x: num(2)?,
            g1: parse_field(&rec[3], line)?,
            g2: parse_field(&rec[4], line)?,
            ratio: parse_field(&rec[5], line)?,
            classification: parse_field(&rec[6], line)?,
            reason: (!rec[7].is_empty()).then(|| rec[7].to_string()),
        });
    }
    Ok(rows)
}
