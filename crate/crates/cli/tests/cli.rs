use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use weilfit_cli::commands::fit::read_coefficients;
use weilfit_core::diagnostics::l2_error;
use weilfit_core::study::{conv_cell, CellSpec, GridKind, ScalingRule};
use weilfit_core::targets::{Target, TargetKind};
use weilfit_core::{BasisSpec, IndexKind, IndexSet, MultiIndex, WeightScheme, WeilGrid};

fn weilfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilfit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = weilfit(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Non-comment lines of a CSV file, header included.
fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn write_values(path: &Path, values: &[f64]) {
    let body: String = values.iter().map(|v| format!("{v:?}\n")).collect();
    fs::write(path, format!("value\n{body}")).unwrap();
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

#[test]
fn points_for_997() {
    let fx = Fixture::new();
    let out_path = fx.path("p.csv");
    let out = ok(&[
        "points",
        "-M",
        "997",
        "-d",
        "2",
        "--out",
        path_str(&out_path),
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "997");
    let lines = data_lines(&out_path);
    assert_eq!(lines[0], "j,y1,y2");
    assert_eq!(lines[1], "0,1.0,1.0");
    assert_eq!(lines.len() - 1, 499);
}

#[test]
fn points_for_seven_in_three_dimensions() {
    let fx = Fixture::new();
    let out_path = fx.path("p.csv");
    ok(&["points", "-M", "7", "-d", "3", "--out", path_str(&out_path)]);
    let lines = data_lines(&out_path);
    assert_eq!(lines.len() - 1, 4);
    let row: Vec<f64> = lines[4].split(',').map(|v| v.parse().unwrap()).collect();
    let c = |r: f64| (2.0 * std::f64::consts::PI * r / 7.0).cos();
    assert_eq!(row[0], 3.0);
    for (got, r) in row[1..].iter().zip([3.0, 2.0, 6.0]) {
        assert!((got - c(r)).abs() < 1e-15);
    }
}

#[test]
fn points_for_two() {
    let out = ok(&["points", "-M", "2", "-d", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows, ["0,1.0", "1,-1.0"]);
}

#[test]
fn fit_recovers_a_basis_element() {
    let fx = Fixture::new();
    let pts = fx.path("p.csv");
    ok(&["points", "-M", "101", "-d", "2", "--out", path_str(&pts)]);
    let grid = WeilGrid::new(101, 2).unwrap();
    let values: Vec<f64> = (0..grid.len()).map(|j| grid.point(j)[0]).collect();
    let vals = fx.path("v.csv");
    write_values(&vals, &values);
    let coef = fx.path("c.csv");
    ok(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "2",
        "--basis",
        "chebyshev/paper",
        "--out",
        path_str(&coef),
    ]);
    for (index, c) in read_coefficients(&coef).unwrap() {
        let want = if index == [1, 0] { 1.0 } else { 0.0 };
        assert!((c - want).abs() < 1e-10, "{index:?}: {c}");
    }
    assert!(data_lines(&coef)
        .iter()
        .any(|l| l.starts_with("\"(1,0)\",")));
    let cond = data_lines(&fx.path("c.csv.cond.csv"));
    assert_eq!(cond[0], "cond_D,cond_A");
    let vals: Vec<f64> = cond[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((vals[1] - vals[0] * vals[0]).abs() <= 1e-12 * vals[1]);
}

#[test]
fn fit_rejects_mismatched_counts() {
    let fx = Fixture::new();
    let pts = fx.path("p.csv");
    ok(&["points", "-M", "101", "-d", "2", "--out", path_str(&pts)]);
    let vals = fx.path("v.csv");
    write_values(&vals, &[1.0; 50]);
    let out = weilfit(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("51") && err.contains("50"), "{err}");
}

#[test]
fn fit_reports_underdetermined_systems() {
    let fx = Fixture::new();
    let pts = fx.path("p.csv");
    ok(&["points", "-M", "7", "-d", "2", "--out", path_str(&pts)]);
    let vals = fx.path("v.csv");
    write_values(&vals, &[1.0; 4]);
    let out = weilfit(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("under-determined"));
}

#[test]
fn fit_reports_malformed_rows_with_line_numbers() {
    let fx = Fixture::new();
    let pts = fx.path("p.csv");
    fs::write(&pts, "# comment\nx,y\n0.1,0.2\n0.3,zz\n").unwrap();
    let vals = fx.path("v.csv");
    write_values(&vals, &[1.0, 2.0]);
    let out = weilfit(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains("zz"), "{err}");

    fs::write(&pts, "0.1,0.2\n0.3\n").unwrap();
    let out = weilfit(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn fit_exits_3_on_singular_systems() {
    let fx = Fixture::new();
    let pts = fx.path("p.csv");
    fs::write(&pts, "0.5,0.5\n".repeat(10)).unwrap();
    let vals = fx.path("v.csv");
    write_values(&vals, &[1.0; 10]);
    let coef = fx.path("c.csv");
    let out = weilfit(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "1",
        "--out",
        path_str(&coef),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
    assert!(fx.path("c.csv.cond.csv").exists());
}

#[test]
fn unwritable_output_exits_4() {
    let out = weilfit(&[
        "points",
        "-M",
        "11",
        "-d",
        "1",
        "--out",
        "/nonexistent-dir/p.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/p.csv"));
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(
        weilfit(&["points", "-M", "1", "-d", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        weilfit(&["cond-study", "--grid", "sobol"]).status.code(),
        Some(2)
    );
    assert_eq!(weilfit(&["fit", "--q", "1"]).status.code(), Some(2));
    assert_eq!(
        weilfit(&["points", "-M", "11", "-d", "1", "--seed", "3"])
            .status
            .code(),
        Some(2)
    );
}

/// The `fit` command on a conv-study grid reproduces the study's fit and its
/// reported error.
#[test]
fn fit_matches_conv_study_cell() {
    let fx = Fixture::new();
    let study = fx.path("conv.csv");
    ok(&["conv-study", "--q-range", "6", "--out", path_str(&study)]);
    let lines = data_lines(&study);
    let row: Vec<&str> = lines[1].split(',').collect();
    let (m, modulus, reported): (usize, u64, f64) = (
        row[2].parse().unwrap(),
        row[3].parse().unwrap(),
        row[4].parse().unwrap(),
    );

    let pts = fx.path("p.csv");
    ok(&[
        "points",
        "-M",
        &modulus.to_string(),
        "-d",
        "2",
        "--out",
        path_str(&pts),
    ]);
    let grid = WeilGrid::new(modulus, 2).unwrap();
    assert_eq!(grid.len(), m);
    let target = Target::standard(TargetKind::ExpSum, 2).unwrap();
    let values: Vec<f64> = (0..m).map(|j| target.eval(grid.point(j))).collect();
    let vals = fx.path("v.csv");
    write_values(&vals, &values);
    let coef = fx.path("c.csv");
    ok(&[
        "fit",
        "--points",
        path_str(&pts),
        "--values",
        path_str(&vals),
        "--q",
        "6",
        "--out",
        path_str(&coef),
    ]);

    let spec = CellSpec {
        space: IndexKind::TotalDegree,
        d: 2,
        basis: BasisSpec::CHEBYSHEV_ORTHONORMAL,
        weights: WeightScheme::Unit,
        grid: GridKind::Weil,
        rule: ScalingRule::Quadratic(0.5),
    };
    let f = |y: &[f64]| target.eval(y);
    let cell = conv_cell(&spec, 6, &f, 0, 2000, 0).unwrap();
    let mut fit = cell.fit.unwrap();
    let from_cli = read_coefficients(&coef).unwrap();
    let set = IndexSet::build(IndexKind::TotalDegree, 6, 2).unwrap();
    assert_eq!(from_cli.len(), set.len());
    for ((index, c), (n, want)) in from_cli.iter().zip(set.iter().zip(&fit.coefficients)) {
        assert_eq!(&MultiIndex::new(index.clone()), n);
        assert_eq!(c, want);
    }
    assert_eq!(cell.l2_error, reported);
    fit.coefficients = from_cli.into_iter().map(|(_, c)| c).collect();
    assert_eq!(l2_error(&fit, &f, 2000, 0).unwrap(), reported);
}

#[test]
fn studies_are_deterministic_across_runs_and_threads() {
    let fx = Fixture::new();
    for cmd in ["cond-study", "conv-study"] {
        for grid in ["weil", "mc_chebyshev"] {
            let mut outputs = Vec::new();
            for (k, threads) in ["1", "4", "4"].iter().enumerate() {
                let p = fx.path(&format!("{cmd}-{grid}-{k}.csv"));
                ok(&[
                    cmd,
                    "--q-range",
                    "1..5",
                    "--grid",
                    grid,
                    "--repetitions",
                    "3",
                    "--threads",
                    threads,
                    "--seed",
                    "17",
                    "--out",
                    path_str(&p),
                ]);
                outputs.push((
                    fs::read(&p).unwrap(),
                    fs::read(fx.path(&format!("{cmd}-{grid}-{k}.csv.reps.csv"))).unwrap(),
                ));
            }
            assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{cmd} {grid}");
        }
    }
}

#[test]
fn study_rows_keep_scaling_bookkeeping() {
    let fx = Fixture::new();
    let p = fx.path("cond.csv");
    ok(&[
        "cond-study",
        "--scaling",
        "linear",
        "--c",
        "2",
        "--q-range",
        "1..8",
        "--out",
        path_str(&p),
    ]);
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.contains("# scaling=linear"));
    assert!(text.contains("# cell q=8 N=45 m_target=90"));
    for line in data_lines(&p).iter().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (m, modulus): (u64, u64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert_eq!(m, modulus / 2 + 1);
        assert!(weilfit_core::primes::is_prime(modulus));
    }
}

#[test]
fn underdetermined_cells_use_the_inf_sentinel() {
    let out = ok(&[
        "cond-study",
        "--grid",
        "mc_uniform",
        "--scaling",
        "linear",
        "--c",
        "0.5",
        "--q-range",
        "2..3",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(",,inf")), "{rows:?}");
}

#[test]
fn config_file_with_flag_overrides() {
    let fx = Fixture::new();
    let cfg = fx.path("study.cfg");
    fs::write(
        &cfg,
        "# conditioning\nspace = tp\nd = 1\nq_range = 1..3\nscaling = linear\nc = 3\n",
    )
    .unwrap();
    let out = ok(&["cond-study", "--config", path_str(&cfg), "--dim", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# space=tp\n# d=2\n# q_range=1..3\n# scaling=linear\n# c=3.0\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);

    fs::write(&cfg, "d = 2\ncolour = red\n").unwrap();
    let out = weilfit(&["cond-study", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn equidist_reports() {
    let out = ok(&[
        "equidist",
        "-M",
        "10007",
        "-d",
        "2",
        "--boxes",
        "-1:1,-1:1;0:0.5,0:0.5;-1:0,-1:1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.rsplitn(4, ',').map(str::to_string).collect())
        .collect();
    let dev = |r: &Vec<String>| r[0].parse::<f64>().unwrap();
    assert_eq!(dev(&rows[0]), 0.0);
    assert!(dev(&rows[1]) <= 0.01);
    assert!(dev(&rows[2]) <= 0.01);

    let bad = weilfit(&["equidist", "-M", "101", "-d", "2", "--boxes", "0.5:0,0:1"]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = weilfit(&["equidist", "-M", "101", "-d", "2", "--boxes", "0:1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn check_bounds_suites() {
    let out = ok(&["check-bounds", "--dims", "2,3", "--orders", "1,2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "M,d,q,max_offdiag,offdiag_bound,diag_min,diag_max,pass"
    );
    assert_eq!(rows.len(), 1 + 2 * 2 * 3);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));

    let out = ok(&["check-bounds", "--suite", "spectral"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .all(|r| r.ends_with("true,true")));

    let out = ok(&[
        "check-bounds",
        "--suite",
        "weil",
        "--samples",
        "20",
        "--seed",
        "4",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 20);

    let out = ok(&["check-bounds", "--suite", "error", "--q-range", "2..4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "d,q,rule,c,m,M,l2_error");
    assert_eq!(rows.len(), 4);
}

#[test]
fn one_dimensional_diagonal_rows_fail_the_nominal_bound() {
    let out = ok(&[
        "check-bounds",
        "--dims",
        "1",
        "--orders",
        "2",
        "--moduli",
        "97",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().last().unwrap();
    assert_eq!(row, "97,1,2,0.49999999999999867,0.5,24.75,24.75,false");
}
