use super::*;
use crate::semiclassical::semiclassical_rate;
use approx::assert_relative_eq;

const BENCHMARK: &str = "[system]\npreset = benchmark\n";

fn csv_text(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

fn local_extrema(values: &[f64], maximum: bool) -> Vec<usize> {
    (1..values.len() - 1)
        .filter(|&i| {
            let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
            if maximum {
                b > a && b > c
            } else {
                b < a && b < c
            }
        })
        .collect()
}

#[test]
fn benchmark_preset_config() {
    let spec = parse_config(BENCHMARK).unwrap();
    assert_eq!(spec.base, SystemSpec::benchmark());
    assert_eq!(spec.grid, vec![-20e6]);
    assert_eq!(spec.parameter, SweptParameter::Delta);
}

#[test]
fn explicit_system_with_units() {
    let text = "# thick solid curve\n[system]\nomega_a = 20 MHz\ndelta = -20 MHz\ng_l = 2 MHz\n\
                gamma0 = 2 kHz\nkappa0 = 4 MHz\nn_a0 = 20\n";
    let with_units = parse_config(text).unwrap();
    let bare = parse_config(&text.replace("g_l = 2 MHz", "g_l = 2e6")).unwrap();
    assert_eq!(with_units, bare);
    assert_eq!(with_units.base, SystemSpec::benchmark());
}

#[test]
fn config_errors_carry_location() {
    let err = parse_config("[system]\npreset = benchmark\ncolour = blue\n").unwrap_err();
    assert!(matches!(&err, Error::Config { line: Some(3), key: Some(k), .. } if k == "colour"), "{err}");

    let err = parse_config("[system]\npreset = benchmark\ng = 2 mK\n").unwrap_err();
    assert!(matches!(&err, Error::Config { line: Some(3), .. }), "{err}");

    let err = parse_config("[system]\nomega_a = 1\n").unwrap_err();
    assert!(err.to_string().contains("delta"), "{err}");

    let err = parse_config(&format!("{BENCHMARK}[sweep]\nparameter = g\ngrid = 1:2:0\n")).unwrap_err();
    assert!(matches!(&err, Error::Config { line: Some(5), .. }), "{err}");

    let err = parse_config(&format!("{BENCHMARK}[sweep]\nsolvers = analytic, oracle\n")).unwrap_err();
    assert!(err.to_string().contains("oracle"), "{err}");

    assert!(parse_config("[nonsense]\n").is_err());
    assert!(parse_config("g = 1\n").is_err());
    assert!(parse_config("").is_err());
}

#[test]
fn circuit_config_derives_the_system() {
    let text = "[circuit]\npreset = benchmark\n[mechanics]\nfrequency = 20 MHz\ndamping = 2 kHz\n";
    let spec = parse_config(text).unwrap();
    let setup = spec.setup.unwrap();
    let direct =
        crate::model::build_system(&CircuitParams::benchmark(), &setup.mechanics, setup.drive_frequency).unwrap();
    assert_eq!(spec.base, direct);
    assert_relative_eq!(spec.base.delta, -20e6, max_relative = 1e-9);
    assert_relative_eq!(spec.lc_frequency.unwrap(), 7.5e9, max_relative = 1e-9);
    assert!(parse_config(&format!("{text}[system]\npreset = benchmark\n")).is_err());
}

#[test]
fn sweep_section_and_scaling() {
    let text = format!(
        "{BENCHMARK}[sweep]\nparameter = g\ngrid = 1 MHz:3 MHz:3\nsolvers = analytic, gaussian\nscaled = true\n"
    );
    let spec = parse_config(&text).unwrap();
    assert_eq!(spec.solvers, vec![Solver::Analytic, Solver::Gaussian]);
    assert_eq!(spec.base.omega_a, 1.0);
    assert_relative_eq!(spec.grid[2], 0.15, max_relative = 1e-12);
    let values = parse_config(&format!("{BENCHMARK}[sweep]\nparameter = n_a0\nvalues = 1, 2, 5\n")).unwrap();
    assert_eq!(values.grid, vec![1.0, 2.0, 5.0]);
    let unsorted = parse_config(&format!("{BENCHMARK}[sweep]\nparameter = n_a0\nvalues = 1, 5, 2\n"));
    assert!(unsorted.is_err());
}

#[test]
fn oracle_section() {
    let text = "[system]\npreset = scaled-benchmark\n[sweep]\nsolvers = oracle\n\
                [oracle]\ndims = 12, 4\ncounter_rotating = false\nconcurrency = 1\n";
    let spec = parse_config(text).unwrap();
    let oracle = spec.oracle.unwrap();
    assert_eq!(oracle.dims, (12, 4));
    assert!(!oracle.include_counter_rotating);
    assert_eq!(spec.oracle_concurrency, 1);
}

#[test]
fn single_point_matches_direct_calls() {
    let spec = SweepSpec {
        lc_frequency: Some(7.5e9),
        ..SweepSpec::at(SystemSpec::benchmark(), Solver::ALL.iter().copied().filter(|&s| s != Solver::Oracle).collect())
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 1);
    let b = SystemSpec::benchmark();
    let row = &rows[0];
    let get = |s| row.result(s).unwrap();
    assert_eq!(get(Solver::Analytic).gamma_c, Some(analytic::cooling_rate(&b)));
    assert_eq!(get(Solver::Analytic).n_f, Some(analytic::final_occupation(&b).unwrap()));
    assert_eq!(get(Solver::AnalyticRwa).n_f, Some(analytic::rwa_final_occupation(&b).unwrap()));
    assert_eq!(get(Solver::Gaussian).gamma_c, Some(gaussian::spectral_cooling_rate(&b).unwrap()));
    assert_eq!(get(Solver::Semiclassical).gamma_c, Some(semiclassical_rate(2e6, 7.5e9, 4e6, 7.48e9, 20e6)));
    assert!(row.results.iter().all(|r| r.diagnostic.is_empty()), "{row:?}");
}

#[test]
fn fig2_curves() {
    let curves = fig2_specs(figure_grid());
    assert_eq!(curves.len(), 2);
    for (g, spec) in &curves {
        let rows = run_sweep(spec).unwrap();
        assert_eq!(rows.len(), 201);
        let n: Vec<f64> = rows.iter().map(|r| r.result(Solver::Analytic).unwrap().n_f.unwrap()).collect();
        let minima = local_extrema(&n, false);
        assert_eq!(minima.len(), 1, "g = {g}");
        assert!((rows[minima[0]].value - 1.0).abs() <= 0.05);
        if *g == 2e6 {
            let min = n.iter().copied().fold(f64::INFINITY, f64::min);
            assert!((min - 0.0125).abs() < 2e-4, "{min}");
        }
    }
}

#[test]
fn fig3_curves() {
    for (g, spec) in fig3_specs(figure_grid()) {
        let rows = run_sweep(&spec).unwrap();
        let rate = |s| rows.iter().map(|r| r.result(s).unwrap().gamma_c.unwrap()).collect::<Vec<_>>();
        let quantum = rate(Solver::Analytic);
        let maxima = local_extrema(&quantum, true);
        assert_eq!(maxima.len(), 1);
        assert!((rows[maxima[0]].value - 1.0).abs() <= 0.05);
        let at_sideband = SystemSpec { g, ..SystemSpec::benchmark() };
        let resonant = analytic::resonant_cooling_rate(&at_sideband).unwrap();
        assert!((quantum[maxima[0]] / resonant - 1.0).abs() < 5e-3);
        let centre = rows.iter().position(|r| r.value == 1.0).unwrap();
        assert_relative_eq!(rate(Solver::Semiclassical)[centre], 4.0 * g * g / 4e6, max_relative = 1e-9);
        if g == 2e6 {
            assert_relative_eq!(quantum[centre], 3.99e6, max_relative = 1e-4);
        }
    }
}

#[test]
fn csv_layout() {
    let spec = SweepSpec {
        parameter: SweptParameter::G,
        grid: vec![1e6, 2e6, 3e6],
        ..SweepSpec::at(SystemSpec::benchmark(), vec![Solver::Analytic, Solver::Gaussian])
    };
    let text = csv_text(&run_sweep(&spec).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        "swept_value,gamma_c_analytic,n_f_analytic,gamma_c_gaussian,n_f_gaussian,diag_analytic,diag_gaussian"
    );
    assert!(lines[1].starts_with("1e6,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 7));
    let again = csv_text(&run_sweep(&spec).unwrap());
    assert_eq!(text, again);
    assert!(emit_csv(&[], Vec::new()).is_err());
}

#[test]
fn csv_round_trips_values() {
    let spec = SweepSpec::at(SystemSpec::benchmark(), vec![Solver::Analytic]);
    let rows = run_sweep(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.csv");
    write_csv(&rows, &path).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let parsed: f64 = fields[1].parse().unwrap();
    assert_eq!(parsed, rows[0].results[0].gamma_c.unwrap());
}

#[test]
fn failures_carry_diagnostics() {
    // Blue side with strong coupling: the Gaussian model has no steady state.
    let spec = SweepSpec {
        parameter: SweptParameter::Delta,
        grid: vec![-20e6, 20e6],
        ..SweepSpec::at(SystemSpec::benchmark(), vec![Solver::Analytic, Solver::Gaussian])
    };
    let rows = run_sweep(&spec).unwrap();
    let blue = rows[1].result(Solver::Gaussian).unwrap();
    assert!(blue.is_failure());
    assert!(blue.diagnostic.contains("Hurwitz"), "{}", blue.diagnostic);
    assert!(!rows[1].all_failed());
    for row in &rows {
        for r in &row.results {
            assert!(r.gamma_c.is_some() && r.n_f.is_some() || !r.diagnostic.is_empty(), "{r:?}");
        }
    }
    let text = csv_text(&rows);
    assert!(!text.contains("NaN") && !text.contains("inf"));
}

#[test]
fn oracle_rows_respect_truncation() {
    let spec = SweepSpec {
        parameter: SweptParameter::NA0,
        grid: vec![0.5, 4.0],
        oracle: Some(OracleConfig::new((20, 6))),
        oracle_concurrency: 1,
        ..SweepSpec::at(SystemSpec::scaled_benchmark(), vec![Solver::Gaussian, Solver::Oracle])
    };
    let rows = run_sweep(&spec).unwrap();
    let ok = rows[0].result(Solver::Oracle).unwrap();
    let gaussian = rows[0].result(Solver::Gaussian).unwrap().n_f.unwrap();
    assert!((ok.n_f.unwrap() / gaussian - 1.0).abs() < 0.01);
    assert!(ok.gamma_c.is_none() && ok.diagnostic.contains("tails"));
    let hot = rows[1].result(Solver::Oracle).unwrap();
    assert!(hot.is_failure() && hot.diagnostic.contains("truncation"), "{}", hot.diagnostic);
}

#[test]
fn compare_scaled_benchmark() {
    let report = compare(&SystemSpec::scaled_benchmark(), &OracleConfig::default(), None).unwrap();
    assert_eq!(report.occupations.len(), 6);
    let oracle = report.occupation("oracle").unwrap();
    let gaussian = report.occupation("gaussian").unwrap();
    assert!((oracle / gaussian - 1.0).abs() < 0.01);
    assert!(report.gap_deviation() < 0.25, "{report}");
    assert!(report.tails_full.accepted && report.tails_rwa.accepted);
    let text = report.to_string();
    assert!(text.contains("backaction gap"));
}

#[test]
fn compare_uncoupled_reports_bath_occupation() {
    let spec = SystemSpec { g: 0.0, ..SystemSpec::scaled_benchmark() };
    let report = compare(&spec, &OracleConfig::default(), None).unwrap();
    for (label, value, diag) in &report.occupations {
        // The first-order rotating-wave formula carries 1/g² and has no
        // uncoupled limit; it must say so rather than return a number.
        if *label == "analytic-rwa" {
            assert!(value.is_none() && diag.contains("g = 0"), "{diag}");
            continue;
        }
        let v = value.unwrap_or_else(|| panic!("{label}: {diag}"));
        assert!((v - 1.0).abs() < 1e-5, "{label}: {v}");
    }
}

#[test]
fn compare_rejects_infeasible_truncation() {
    let spec = SystemSpec { n_a0: 20.0, ..SystemSpec::scaled_benchmark() };
    assert!(matches!(compare(&spec, &OracleConfig::default(), None), Err(Error::Truncation(_))));
}

#[test]
fn design_report_for_benchmark_circuit() {
    let text = "[circuit]\npreset = benchmark\n[mechanics]\nfrequency = 20 MHz\ndamping = 2 kHz\n";
    let setup = parse_config(text).unwrap().setup.unwrap();
    let report = design(&setup).unwrap();
    assert_relative_eq!(report.g_l, 2e6, max_relative = 1e-9);
    assert_relative_eq!(report.kappa0, 4e6, max_relative = 1e-9);
    assert!((report.coupling_ratio - 793.0).abs() < 1.0);
    assert!(report.to_string().contains("g_l/g_r"));
}
