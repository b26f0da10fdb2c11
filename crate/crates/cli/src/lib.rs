//! Command-line front end for `dicke_therm`: single points, sweeps,
//! closed-form validation, master-equation runs and figure presets.
//!
//! Every data file is deterministic; run metadata (version, thread count,
//! wall-clock time) goes to a `<file>.meta.json` sidecar.

pub mod args;
pub mod error;
pub mod evolve;
pub mod format;
pub mod point;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Output, Spacing};
use error::{exit, CliError, CliResult};
use sweep::{SweepConfig, SweepRow, XGrid};

/// One preset sweep behind `figures`.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub file: &'static str,
    pub n: Vec<usize>,
    pub eta: Vec<f64>,
    pub x: XGrid,
    pub outputs: Vec<Output>,
}

pub fn figure_presets() -> Vec<FigurePreset> {
    let g2 = vec![Output::G1, Output::G2, Output::Classification];
    let lin = XGrid { start: 0.01, stop: 30.0, count: 300, spacing: Spacing::Linear };
    vec![
        FigurePreset { file: "fig1.csv", n: vec![2], eta: vec![0.0, 0.1], x: lin, outputs: g2.clone() },
        FigurePreset { file: "fig2.csv", n: vec![3], eta: vec![0.0, 0.1], x: lin, outputs: g2.clone() },
        FigurePreset {
            file: "fig3.csv",
            n: vec![7],
            eta: vec![0.0, 0.1],
            x: XGrid { start: 0.01, stop: 60.0, count: 300, spacing: Spacing::Log },
            outputs: g2,
        },
        FigurePreset {
            file: "fig4.csv",
            n: vec![2, 3, 7],
            eta: vec![0.1],
            x: XGrid { start: 0.001, stop: 20.0, count: 300, spacing: Spacing::Log },
            outputs: vec![Output::G1, Output::Ratio],
        },
    ]
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

fn write_sidecar(out: &Path, command: &str, config: serde_json::Value, jobs: usize, rows: usize) -> CliResult<()> {
    let generated = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = serde_json::json!({
        "tool": "dicke-therm",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "jobs": jobs,
        "rows": rows,
        "generated_unix": generated,
    });
    fs::write(sidecar_path(out), serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n")?;
    Ok(())
}

/// Runs `write` against `path`, or stdout when absent.
fn with_output<F>(path: Option<&Path>, write: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn effective_jobs(jobs: usize) -> usize {
    if jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        jobs
    }
}

fn sweep_to_file(cfg: &SweepConfig, jobs: usize, out: Option<&Path>, command: &str) -> CliResult<Vec<SweepRow>> {
    let rows = sweep::run_sweep(cfg, jobs)?;
    with_output(out, |w| sweep::write_sweep_csv(w, &rows, cfg.precision))?;
    if let Some(p) = out {
        let config = serde_json::to_value(cfg).expect("sweep config serializes");
        write_sidecar(p, command, config, effective_jobs(jobs), rows.len())?;
    }
    let na = rows.iter().filter(|r| r.reason.is_some()).count();
    if na > 0 {
        log::warn!("{na} of {} points could not be evaluated (see the reason column)", rows.len());
    }
    Ok(rows)
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Point(a) => {
            let report = point::run_point(a.n, a.eta, a.x, a.precision.precision as usize)?;
            let json = point::to_json(&report);
            with_output(a.out.as_deref(), |w| Ok(w.write_all(json.as_bytes())?))?;
            Ok(exit::OK)
        }
        Command::Sweep(a) => {
            let x = if !a.x.is_empty() {
                a.x.clone()
            } else {
                match (a.x_start, a.x_stop, a.x_count) {
                    (Some(start), Some(stop), Some(count)) => {
                        XGrid { start, stop, count, spacing: a.x_scale }.values()?
                    }
                    _ => return Err(CliError::usage("EmptyGrid", "give --x or --x-start/--x-stop/--x-count")),
                }
            };
            let cfg = SweepConfig::new(a.n.clone(), a.eta.clone(), x, a.outputs.clone(), a.precision.precision as usize)?;
            sweep_to_file(&cfg, a.jobs.jobs, a.out.as_deref(), "sweep")?;
            Ok(exit::OK)
        }
        Command::Validate(a) => {
            let report = validate::run_validate(&a)?;
            let digits = a.precision.precision as usize;
            with_output(a.out.as_deref(), |w| validate::write_report_csv(w, &report, digits))?;
            validate::write_summary(io::stderr().lock(), &report)?;
            if report.passed() {
                Ok(exit::OK)
            } else {
                Err(CliError::Tolerance("at least one closed form exceeded its tolerance".into()))
            }
        }
        Command::Evolve(a) => {
            let traj = evolve::run_evolve(&a)?;
            let digits = a.precision.precision as usize;
            with_output(a.out.as_deref(), |w| evolve::write_trajectory_csv(w, &traj, digits))?;
            let d = traj.final_diagnostics();
            eprintln!(
                "final trace_dist_to_gibbs = {:.6e} at t = {} ({} steps)",
                d.trace_dist_to_gibbs,
                traj.times.last().copied().unwrap_or(0.0),
                traj.steps
            );
            Ok(exit::OK)
        }
        Command::Figures(a) => {
            fs::create_dir_all(&a.out_dir)?;
            for preset in figure_presets() {
                let cfg = SweepConfig::new(
                    preset.n,
                    preset.eta,
                    preset.x.values()?,
                    preset.outputs,
                    a.precision.precision as usize,
                )?;
                let path = a.out_dir.join(preset.file);
                sweep_to_file(&cfg, a.jobs.jobs, Some(&path), "figures")?;
                eprintln!("wrote {}", path.display());
            }
            Ok(exit::OK)
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status. Errors go to stderr as `error[<Name>]: <message>`.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let outcome = args::merge_config(argv).and_then(|argv| match Cli::try_parse_from(argv) {
        Ok(cli) => dispatch(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            Ok(exit::OK)
        }
        Err(e) => Err(CliError::usage("InvalidArguments", e.to_string().trim_end().to_string())),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            e.exit_code()
        }
    }
}
