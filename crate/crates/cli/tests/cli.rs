use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dicke_therm_cli::sweep::{read_sweep_csv, Field};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke-therm"))
        .args(args)
        .env_remove("DICKE_THERM_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn point_coupled_pair_is_antibunched() {
    let o = bin(&["point", "--n", "2", "--eta", "0.1", "--x", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(rel(v["g2"].as_f64().unwrap(), 0.302018092984664) < 1e-11);
    // the commonly quoted 0.302032 agrees to the closed-form tolerance only
    assert!(rel(v["g2"].as_f64().unwrap(), 0.302032) < 1e-3);
    assert_eq!(v["classification"], "SubPoissonian");
    let pred = &v["asymptotic_predictions"];
    assert!(rel(pred["eq17"].as_f64().unwrap(), 0.302003335142089) < 1e-11);
    assert!(rel(pred["eq19_threshold"].as_f64().unwrap(), 0.0693147180560) < 1e-11);
    assert!(pred["eq15"]["strong_bath"].is_null());
}

#[test]
fn point_uncoupled_pair() {
    let o = bin(&["point", "--n", "2", "--eta", "0", "--x", "1"]);
    let v = json(&o);
    assert!(rel(v["g2"].as_f64().unwrap(), 0.803388066758518) < 1e-11);
    assert_eq!(v["asymptotic_predictions"]["eq15"]["weak_bath"].as_f64(), Some(1.0));
}

#[test]
fn point_precision_and_determinism() {
    let a = bin(&["point", "--n", "7", "--eta", "-0.05", "--x", "3", "--precision", "6"]);
    let b = bin(&["point", "--n", "7", "--eta", "-0.05", "--x", "3", "--precision", "6"]);
    assert_eq!(a.stdout, b.stdout);
    let g2 = json(&a)["g2"].to_string();
    assert!(g2.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() <= 6, "{g2}");
}

#[test]
fn point_rejects_single_atom_coupling() {
    let o = bin(&["point", "--n", "1", "--eta", "0.1", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SingleAtomWithCoupling"));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_arguments_exit_2() {
    for args in [&["point", "--n", "2"][..], &["point", "--n", "two", "--eta", "0", "--x", "1"], &["frobnicate"]] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error[InvalidArguments]"));
    }
    let o = bin(&["point", "--n", "3", "--eta", "0.9", "--x", "-1"]);
    assert!(stderr(&o).contains("NonPositiveX"));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# pair at moderate temperature\nn = 2\neta = 0.1\nx = 1\nprecision = 8\n").unwrap();
    let o = bin(&["point", "--config", cfg.to_str().unwrap(), "--x", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["x"].as_f64(), Some(10.0));
    assert_eq!(v["g2"].as_f64(), Some(0.30201809));
}

fn sweep_args<'a>(out: &'a str, jobs: &'a str) -> Vec<&'a str> {
    vec![
        "sweep", "--n", "3,2", "--eta", "0.1,0,-0.1", "--x-start", "0.01", "--x-stop", "40", "--x-count", "37",
        "--x-scale", "log", "--out", out, "--jobs", jobs,
    ]
}

#[test]
fn sweep_is_deterministic_and_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..3).map(|i| dir.path().join(format!("s{i}.csv")).display().to_string()).collect();
    for (p, jobs) in paths.iter().zip(["1", "4", "1"]) {
        let o = bin(&sweep_args(p, jobs));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0], bytes[2]);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(format!("{}.meta.json", paths[1])).unwrap()).unwrap();
    assert_eq!(meta["jobs"], 4);
    assert_eq!(meta["rows"], 2 * 3 * 37);

    let rows = read_sweep_csv(bytes[0].as_slice()).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 37);
    let keys: Vec<(usize, f64, f64)> = rows.iter().map(|r| (r.n, r.eta, r.x)).collect();
    assert!(keys.windows(2).all(|w| (w[0].0, w[0].1, w[0].2) < (w[1].0, w[1].1, w[1].2)));
}

#[test]
fn sweep_env_jobs_and_stdout() {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_dicke-therm"))
            .args(["sweep", "--n", "2,7", "--eta", "0,0.1", "--x", "0.5,5,50", "--outputs", "g2,ratio"])
            .env("DICKE_THERM_JOBS", jobs)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("N,eta,x,g1,g2,ratio,classification,reason"));
    // g1 and classification not requested
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(3) == Some("") && l.split(',').nth(6) == Some("")));
}

#[test]
fn sweep_round_trips_through_reader() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rt.csv");
    let o = bin(&["sweep", "--n", "2", "--eta", "0,0.1", "--x", "1,10,900", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let first = fs::read(&out).unwrap();
    let rows = read_sweep_csv(first.as_slice()).unwrap();
    let mut again = Vec::new();
    dicke_therm_cli::sweep::write_sweep_csv(&mut again, &rows, 12).unwrap();
    assert_eq!(first, again);
    let under = rows.iter().find(|r| r.eta == 0.0 && r.x == 900.0).unwrap();
    assert_eq!(under.g1, Field::Na);
    assert_eq!(under.reason.as_deref(), Some("ZeroIntensity"));
}

#[test]
fn sweep_rejects_invalid_grids() {
    let o = bin(&["sweep", "--n", "1", "--eta", "0.1", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SingleAtomWithCoupling"));
    let o = bin(&["sweep", "--n", "2", "--eta", "0"]);
    assert!(stderr(&o).contains("EmptyGrid"));
    let o = bin(&["sweep", "--n", "2", "--x-start", "0", "--x-stop", "1", "--x-count", "4", "--x-scale", "log"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_default_grid_passes() {
    let o = bin(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stderr(&o);
    assert!(summary.contains("overall: PASS"));
    let weak = summary.lines().find(|l| l.starts_with("weak_bath_g2 ")).unwrap();
    assert!(weak.contains("4.886e-5") && weak.contains("(2, 0.1, 10)"), "{weak}");
}

#[test]
fn validate_reports_hot_bath_ratio_as_info() {
    let o = bin(&["validate", "--points", "2:0.1:1e-6", "--precision", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.contains("strong_bath_intensity_ratio")).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[4], "1.0601");
    assert_eq!(cells[5], "1.74949");
    assert_eq!(cells[8], "INFO");
}

#[test]
fn validate_product_grid_and_tolerance_failure() {
    let o = bin(&["validate", "--n", "2,3", "--eta", "0", "--x", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 3);
    // strong coupling shrinks the lowest gap to 0.1, so x = 10 is not yet cold
    let o = bin(&["validate", "--points", "2:0.9:10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("overall: FAIL"));
}

#[test]
fn validate_rejects_empty_or_bad_grids() {
    assert_eq!(bin(&["validate", "--points", ""]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "--points", "2:0.1"]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "--n", "2"]).status.code(), Some(2));
}

fn last_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().parse().unwrap()).collect()
}

#[test]
fn evolve_relaxes_to_gibbs() {
    let o = bin(&["evolve", "--n", "2", "--eta", "0.1", "--x", "10", "--init", "inverted", "--t-end", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t,trace,herm_defect,min_eig,trace_dist_to_gibbs,p_0,p_1,p_2"));
    let dist = last_column(&text, "trace_dist_to_gibbs");
    assert_eq!(dist.len(), 101);
    assert!(*dist.last().unwrap() <= 1e-8);
    assert!(stderr(&o).contains("final trace_dist_to_gibbs"));
}

#[test]
fn evolve_gibbs_is_stationary() {
    let o = bin(&["evolve", "--n", "4", "--eta", "-0.1", "--x", "1", "--init", "gibbs", "--t-end", "100", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(last_column(&stdout(&o), "trace_dist_to_gibbs").iter().all(|d| *d <= 1e-10));
}

#[test]
fn evolve_writes_file_and_accepts_aliases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = bin(&[
        "evolve", "--n", "3", "--eta", "0", "--x", "2", "--init", "equal-superposition-diagonal", "--adaptive",
        "--t-end", "50", "--samples", "5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let p0: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(p0[0], 0.25);
    assert!(p0.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn evolve_failures_map_to_exit_codes() {
    let o = bin(&["evolve", "--n", "300", "--eta", "0", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("AtomCapExceeded"));
    let o = bin(&["evolve", "--n", "2", "--eta", "0", "--x", "1", "--step", "5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("StepTooLarge"));
}

fn figure(dir: &Path, name: &str) -> Vec<dicke_therm_cli::sweep::SweepRow> {
    read_sweep_csv(fs::File::open(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn figure_presets_show_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["figures", "--out-dir", dir.path().to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"] {
        assert!(dir.path().join(format!("{f}.meta.json")).exists());
    }

    let g2 = |rows: &[dicke_therm_cli::sweep::SweepRow], eta: f64| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| r.eta == eta).map(|r| (r.x, r.g2.value().unwrap())).collect()
    };

    let fig1 = figure(dir.path(), "fig1.csv");
    assert_eq!(fig1.len(), 600);
    let bare = g2(&fig1, 0.0);
    assert!((bare[0].1 - 0.75).abs() < 1e-3);
    assert!((bare.last().unwrap().1 - 1.0).abs() < 1e-3);
    let coupled = g2(&fig1, 0.1);
    assert!(coupled.iter().filter(|(x, _)| *x > 4.0).all(|(_, g)| *g < 1.0));
    let (x, g) = *coupled.last().unwrap();
    assert!(rel(g, 2.2315 * (-0.2 * x).exp()) < 1e-3);

    let fig2 = figure(dir.path(), "fig2.csv");
    assert!((g2(&fig2, 0.0)[0].1 - 0.96).abs() < 2e-3);
    assert!((g2(&fig2, 0.0).last().unwrap().1 - 4.0 / 3.0).abs() < 1e-3);

    let fig3 = figure(dir.path(), "fig3.csv");
    let bare = g2(&fig3, 0.0);
    assert!((bare[0].1 - 8.0 / 7.0).abs() < 2e-3);
    assert!((bare.last().unwrap().1 - 12.0 / 7.0).abs() < 1e-3);
    let coupled = g2(&fig3, 0.1);
    assert!(coupled[0].1 > 1.0 && coupled.last().unwrap().1 < 1.0);

    let fig4 = figure(dir.path(), "fig4.csv");
    assert_eq!(fig4.len(), 900);
    for n in [2, 3, 7] {
        let ratio: Vec<(f64, f64)> = fig4.iter().filter(|r| r.n == n).map(|r| (r.x, r.ratio.value().unwrap())).collect();
        assert!(ratio[0].1 > 1.0, "N = {n} hot-bath ratio");
        assert!(ratio.last().unwrap().1 > 1.0, "N = {n} cold-bath ratio");
        let at = |x0: f64| ratio.iter().min_by(|a, b| (a.0 - x0).abs().total_cmp(&(b.0 - x0).abs())).unwrap().1;
        assert!(at(1.0) < 1.0, "N = {n} suppression near x = 1");
    }
    let pair: Vec<_> = fig4.iter().filter(|r| r.n == 2).collect();
    assert!(rel(pair[0].ratio.value().unwrap(), 1.0601) < 1e-3);
    assert!(fig4.iter().all(|r| r.g2 == Field::Empty));
}
