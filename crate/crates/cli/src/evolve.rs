//! Master-equation relaxation runs written as trajectory CSV.

use std::io::Write;

use dicke_therm::dynamics::{
    integrate, DensityMatrix, IntegrateOptions, RateModel, StepControl, Trajectory, MAX_DYNAMICS_ATOMS,
};
use dicke_therm::{DickeSpectrum, EnsembleParams, ThermalState};

use crate::args::{EvolveArgs, InitialState};
use crate::error::{CliError, CliResult};
use crate::format::fmt_num;

pub fn initial_state(init: InitialState, params: &EnsembleParams) -> DensityMatrix {
    let n = params.n();
    match init {
        InitialState::Ground => DensityMatrix::ground(n),
        InitialState::Inverted => DensityMatrix::inverted(n),
        InitialState::Uniform => DensityMatrix::uniform(n),
        InitialState::Gibbs => DensityMatrix::gibbs(&ThermalState::new(params, &DickeSpectrum::new(params))),
    }
}

pub fn run_evolve(args: &EvolveArgs) -> CliResult<Trajectory> {
    let params = EnsembleParams::new(args.n, args.eta, args.x)?;
    if args.n > MAX_DYNAMICS_ATOMS {
        return Err(CliError::usage(
            "AtomCapExceeded",
            format!("N = {} exceeds the dynamics cap of {MAX_DYNAMICS_ATOMS}", args.n),
        ));
    }
    if args.samples == 0 {
        return Err(CliError::usage("InvalidIntegration", "--samples must be at least 1"));
    }
    let control = match (args.step, args.adaptive) {
        (_, true) => StepControl::Adaptive { rtol: args.rtol, atol: args.atol },
        (Some(h), false) => StepControl::Fixed(h),
        (None, false) => StepControl::Auto,
    };
    let opts = IntegrateOptions { control, samples: args.samples, ..IntegrateOptions::default() };
    let rho0 = initial_state(args.init, &params);
    Ok(integrate(&rho0, args.t_end, &params, &RateModel::thermal(&params), &opts)?)
}

pub fn write_trajectory_csv<W: Write>(out: W, traj: &Trajectory, digits: usize) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let levels = traj.populations.first().map_or(0, Vec::len);
    let mut header: Vec<String> =
        ["t", "trace", "herm_defect", "min_eig", "trace_dist_to_gibbs"].iter().map(|s| s.to_string()).collect();
    header.extend((0..levels).map(|k| format!("p_{k}")));
    w.write_record(&header)?;
    for ((t, d), pops) in traj.times.iter().zip(&traj.diagnostics).zip(&traj.populations) {
        let mut rec = vec![
            fmt_num(*t, digits),
            fmt_num(d.trace, digits),
            fmt_num(d.herm_defect, digits),
            fmt_num(d.min_eig, digits),
            fmt_num(d.trace_dist_to_gibbs, digits),
        ];
        rec.extend(pops.iter().map(|p| fmt_num(*p, digits)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
