use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dicke-therm", version, about = "Thermal photon statistics of dipole-coupled emitters")]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlators and closed-form predictions at one parameter point, as JSON.
    Point(PointArgs),
    /// Correlators over an (N, eta, x) grid, as CSV.
    Sweep(SweepArgs),
    /// Compare the closed forms with the exact engine over a grid.
    Validate(ValidateArgs),
    /// Integrate the master equation and trace relaxation to equilibrium.
    Evolve(EvolveArgs),
    /// Write the preset figure sweeps fig1.csv … fig4.csv.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Precision {
    /// Significant digits of every printed number.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Clone, Args)]
pub struct Jobs {
    /// Worker threads; 0 picks the number of CPUs.
    #[arg(long, env = "DICKE_THERM_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Output {
    G1,
    G2,
    Ratio,
    Classification,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Atom counts, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Couplings, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub eta: Vec<f64>,
    /// Explicit x values; alternative to the generated grid.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["x_start", "x_stop", "x_count"])]
    pub x: Vec<f64>,
    #[arg(long, requires_all = ["x_stop", "x_count"])]
    pub x_start: Option<f64>,
    #[arg(long)]
    pub x_stop: Option<f64>,
    #[arg(long)]
    pub x_count: Option<usize>,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub x_scale: Spacing,
    /// Columns to fill; the others are left empty.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "g1,g2,ratio,classification")]
    pub outputs: Vec<Output>,
    /// CSV destination (stdout if absent); metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: Precision,
    #[command(flatten)]
    pub jobs: Jobs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Explicit grid `N:eta:x,N:eta:x,...`.
    #[arg(long, conflicts_with_all = ["n", "eta", "x"])]
    pub points: Option<String>,
    /// Product grid; requires `--eta` and `--x` as well.
    #[arg(long, value_delimiter = ',', requires_all = ["eta", "x"])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "n")]
    pub eta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "n")]
    pub x: Vec<f64>,
    /// Report destination (stdout if absent). The summary goes to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialState {
    Ground,
    Inverted,
    #[value(alias = "equal-superposition-diagonal")]
    Uniform,
    Gibbs,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value_t = InitialState::Inverted)]
    pub init: InitialState,
    /// Final time in units of 1/Γ₀.
    #[arg(long, default_value_t = 200.0)]
    pub t_end: f64,
    /// Snapshots after t = 0.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Fixed RK4 step; the default is a rate-based heuristic.
    #[arg(long, conflicts_with = "adaptive")]
    pub step: Option<f64>,
    /// Use the embedded Dormand–Prince 5(4) pair instead of RK4.
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-13)]
    pub atol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub precision: Precision,
    #[command(flatten)]
    pub jobs: Jobs,
}

/// Parses a flat config file: one `key = value` (or `key value`) per line,
/// `#` comments, keys spelled like long flags with or without `--`.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => line.split_once(char::is_whitespace).map(|(k, v)| (k.trim(), v.trim())).unwrap_or((line, "")),
        };
        let key = key.trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::usage("InvalidConfig", format!("config line {}: bad key in '{raw}'", lineno + 1)));
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

/// Splices config-file entries into `argv` after the subcommand, skipping
/// keys already given as flags so that the command line wins.
pub fn merge_config(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let as_str: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let Some(pos) = as_str.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match as_str[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => as_str
            .get(pos + 1)
            .cloned()
            .ok_or_else(|| CliError::usage("InvalidConfig", "--config needs a file"))?,
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::usage("InvalidConfig", format!("cannot read config {path}: {e}")))?;
    let entries = parse_config(&text)?;

    let subcommands = ["point", "sweep", "validate", "evolve", "figures"];
    let Some(sub) = as_str.iter().skip(1).position(|a| subcommands.contains(&a.as_str())) else {
        return Ok(argv);
    };
    let insert_at = sub + 2;
    let mut extra = Vec::new();
    for (key, value) in entries {
        let flag = format!("--{key}");
        let given = as_str.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        if value.is_empty() || value == "true" {
            extra.push(OsString::from(flag));
        } else if value != "false" {
            extra.push(OsString::from(format!("{flag}={value}")));
        }
    }
    let mut merged = argv;
    merged.splice(insert_at..insert_at, extra);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let parsed = parse_config("# grid\nn = 2,3\n--eta 0.1\nx_scale=log  # spacing\nadaptive\n").unwrap();
        let want = [("n", "2,3"), ("eta", "0.1"), ("x-scale", "log"), ("adaptive", "")];
        assert_eq!(parsed.len(), want.len());
        for ((k, v), (wk, wv)) in parsed.iter().zip(want) {
            assert_eq!((k.as_str(), v.as_str()), (wk, wv));
        }
        assert!(parse_config("= 3").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("dicke-therm-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(&path, "n = 7\neta = 0.1\nx = 10\n").unwrap();
        let argv: Vec<OsString> =
            ["dicke-therm", "point", "--n", "2", "--config", path.to_str().unwrap()].iter().map(OsString::from).collect();
        let cli = Cli::try_parse_from(merge_config(argv).unwrap()).unwrap();
        match cli.command {
            Command::Point(p) => assert_eq!((p.n, p.eta, p.x), (2, 0.1, 10.0)),
            other => panic!("unexpected {other:?}"),
        }
        fs::remove_dir_all(dir).ok();
    }
}
