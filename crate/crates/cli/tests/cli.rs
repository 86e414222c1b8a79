use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lincool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincool")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn steady_prints_every_solver() {
    let out = lincool(&["steady"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["analytic", "analytic-rwa", "gaussian", "semiclassical"] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains("3.99"), "{text}");
}

#[test]
fn sweep_with_grid_and_solver_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "g.conf", "[system]\npreset = benchmark\n[sweep]\nparameter = g\n");
    let csv = dir.path().join("g.csv");
    let out = lincool(&[
        "sweep",
        "--config",
        &config,
        "--grid",
        "0.5 MHz:2 MHz:4",
        "--solvers",
        "analytic,gaussian",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("swept_value,gamma_c_analytic,n_f_analytic,gamma_c_gaussian,n_f_gaussian"));
    assert!(text.lines().nth(1).unwrap().starts_with("5e5,"));
}

#[test]
fn scaled_sweep_to_stdout() {
    let out = lincool(&["sweep", "--scaled", "--grid", "0.9:1.1:3", "--solvers", "analytic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    // Rates are now in units of omega_a.
    let rate: f64 = text.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((rate - 0.1995).abs() < 1e-3, "{rate}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.conf", "[system]\npreset = benchmark\nwobble = 3\n");
    let out = lincool(&["steady", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(lincool(&["steady", "--solvers", "quantum"]).status.code(), Some(1));

    let missing = dir.path().join("absent.conf");
    assert_eq!(lincool(&["steady", "--config", missing.to_str().unwrap()]).status.code(), Some(3));

    // Blue side with strong coupling: no steady state anywhere.
    let blue =
        write(dir.path(), "blue.conf", "[system]\npreset = benchmark\ndelta = 20 MHz\n[sweep]\nsolvers = gaussian\n");
    let out = lincool(&["steady", "--config", &blue]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let unwritable = dir.path().join("no/such/dir/out.csv");
    let out = lincool(&["sweep", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn figures_write_two_files_each() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("f2");
    let out = lincool(&["fig2", "--out", stem.to_str().unwrap(), "--grid", "0.5:1.5:11"]);
    assert!(out.status.success());
    for tag in ["g2MHz", "g1MHz"] {
        let text = fs::read_to_string(dir.path().join(format!("f2_{tag}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 12);
        assert!(text.contains("n_f_analytic_rwa"));
    }
    assert_eq!(lincool(&["fig3", "--scaled"]).status.code(), Some(1));
}

#[test]
fn compare_reports_backaction_gap() {
    let out = lincool(&["compare"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("oracle-rwa") && text.contains("backaction gap"), "{text}");
}

#[test]
fn design_of_the_benchmark_circuit() {
    let out = lincool(&["design"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("g_l/g_r") && text.contains("lc_frequency"), "{text}");
}

#[test]
fn evolve_writes_time_series() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "s.conf",
        "[system]\npreset = scaled-benchmark\n[sweep]\nsolvers = gaussian, oracle\n[oracle]\ndims = 21, 5\n",
    );
    let csv = dir.path().join("t.csv");
    let out = lincool(&[
        "evolve",
        "--config",
        &config,
        "--duration",
        "20",
        "--samples",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("time,n_a_gaussian,n_b_gaussian,n_a_oracle,n_b_oracle\n"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[3] / last[1] - 1.0).abs() < 0.01, "{last:?}");
}
