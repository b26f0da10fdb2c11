//! Asymptotic-formula validation report: CSV rows plus a text summary.

use std::io::Write;

use dicke_therm::asymptotics::{default_grid, validate_asymptotics, AsymptoticReport, RowStatus};
use dicke_therm::EnsembleParams;

use crate::args::ValidateArgs;
use crate::error::{CliError, CliResult};
use crate::format::fmt_num;

pub const HEADER: [&str; 10] = ["N", "eta", "x", "formula", "exact", "approx", "deviation", "tolerance", "status", "note"];

/// Parses `N:eta:x` triples separated by commas or whitespace.
pub fn parse_points(spec: &str) -> CliResult<Vec<EnsembleParams>> {
    let mut grid = Vec::new();
    for item in spec.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let bad = || CliError::usage("InvalidGrid", format!("expected N:eta:x, got '{item}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let n = parts[0].parse().map_err(|_| bad())?;
        let eta = parts[1].parse().map_err(|_| bad())?;
        let x = parts[2].parse().map_err(|_| bad())?;
        grid.push(EnsembleParams::new(n, eta, x)?);
    }
    Ok(grid)
}

pub fn grid_from_args(args: &ValidateArgs) -> CliResult<Vec<EnsembleParams>> {
    let grid = if let Some(spec) = &args.points {
        parse_points(spec)?
    } else if !args.n.is_empty() {
        let mut g = Vec::new();
        for &n in &args.n {
            for &eta in &args.eta {
                for &x in &args.x {
                    g.push(EnsembleParams::new(n, eta, x)?);
                }
            }
        }
        g
    } else {
        default_grid()
    };
    if grid.is_empty() {
        return Err(CliError::usage("EmptyGrid", "validation grid is empty"));
    }
    Ok(grid)
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map(|v| fmt_num(v, digits)).unwrap_or_default()
}

pub fn write_report_csv<W: Write>(out: W, report: &AsymptoticReport, digits: usize) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in &report.rows {
        let note = match &r.status {
            RowStatus::Skipped(why) => why.clone(),
            _ => String::new(),
        };
        w.write_record([
            r.n.to_string(),
            fmt_num(r.eta, digits),
            fmt_num(r.x, digits),
            r.formula.label().to_string(),
            opt(r.exact, digits),
            fmt_num(r.approx, digits),
            opt(r.deviation, digits),
            opt(r.tolerance, digits),
            r.status.label().to_string(),
            note,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(mut out: W, report: &AsymptoticReport) -> std::io::Result<()> {
    writeln!(out, "{:<30} {:>5} {:>5} {:>12}  {:<22} status", "formula", "rows", "fail", "worst dev", "at (N, eta, x)")?;
    for s in &report.summaries {
        let (dev, at) = match s.worst {
            Some((d, (n, eta, x))) => (format!("{d:.3e}"), format!("({n}, {eta}, {x})")),
            None => ("-".to_string(), "-".to_string()),
        };
        let status = if s.informational {
            "INFO"
        } else if s.failures > 0 {
            "FAIL"
        } else {
            "PASS"
        };
        writeln!(out, "{:<30} {:>5} {:>5} {:>12}  {:<22} {}", s.formula.label(), s.rows, s.failures, dev, at, status)?;
    }
    writeln!(out, "overall: {}", if report.passed() { "PASS" } else { "FAIL" })
}

pub fn run_validate(args: &ValidateArgs) -> CliResult<AsymptoticReport> {
    let grid = grid_from_args(args)?;
    Ok(validate_asymptotics(&grid))
}
