use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lincool::fock::{self, DensityState, OracleConfig};
use lincool::gaussian::{self, CovarianceState};
use lincool::ode::StepControl;
use lincool::sweep::{
    self, compare, design, emit_csv, fig2_specs, fig3_specs, figure_grid, parse_config, parse_grid, parse_solvers,
    run_sweep, Solver, SweepRow, SweepSpec,
};
use lincool::{analytic, Mode};

#[derive(Parser)]
#[command(
    name = "lincool",
    version,
    about = "Cooling a mechanical mode through a modulated coupling to an LC oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state rate and occupation from every selected solver
    Steady(Common),
    /// Time evolution from the thermal initial state
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Seconds; defaults to four cooling times
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Sweep one parameter and write CSV
    Sweep(Common),
    /// Occupation versus detuning, with and without the counter-rotating term
    Fig2(Common),
    /// Cooling rate versus detuning, quantum and semiclassical
    Fig3(Common),
    /// All solvers at one point, including the Fock-space oracle
    Compare(Common),
    /// Derive the model parameters of a circuit
    Design(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (for fig2/fig3: file stem)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated solvers: analytic, analytic-rwa, gaussian, oracle, semiclassical
    #[arg(long)]
    solvers: Option<String>,
    /// start:stop:n
    #[arg(long)]
    grid: Option<String>,
    /// Rescale all frequencies so that omega_a = 1
    #[arg(long)]
    scaled: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(lincool::Error),
    #[error("{0}")]
    Solver(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<lincool::Error> for CliError {
    fn from(e: lincool::Error) -> Self {
        match e {
            lincool::Error::Config { .. } | lincool::Error::InvalidParameter { .. } => CliError::Config(e),
            other => CliError::Solver(other.to_string()),
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn load(common: &Common, fallback: &str) -> Result<SweepSpec, CliError> {
    let text = match &common.config {
        Some(path) => fs::read_to_string(path).map_err(io_error(path))?,
        None => fallback.to_owned(),
    };
    let mut spec = parse_config(&text)?;
    if let Some(s) = &common.solvers {
        spec.solvers = parse_solvers(s)?;
    }
    if let Some(g) = &common.grid {
        spec.grid = parse_grid(g, spec.parameter)?;
        if common.scaled && spec.parameter.is_frequency() {
            // The override is given in the original units.
            spec.grid.iter_mut().for_each(|v| *v /= spec.base.omega_a);
        }
    }
    if common.scaled && spec.base.omega_a != 1.0 {
        let grid = spec.grid.clone();
        spec = spec.scaled();
        if common.grid.is_some() {
            spec.grid = grid;
        }
    }
    if spec.solvers.contains(&Solver::Oracle) && spec.oracle.is_none() {
        spec.oracle = Some(OracleConfig::default());
    }
    spec.validate()?;
    Ok(spec)
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(io_error(path)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io_error(Path::new("<stdout>")))
        }
    }
}

fn write_rows(out: Option<&Path>, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf).map_err(io_error(Path::new("<csv>")))?;
    match out {
        Some(path) => fs::write(path, buf).map_err(io_error(path)),
        None => io::stdout().lock().write_all(&buf).map_err(io_error(Path::new("<stdout>"))),
    }
}

fn check_rows(rows: &[SweepRow]) -> Result<(), CliError> {
    if !rows.is_empty() && rows.iter().all(SweepRow::all_failed) {
        let first = rows[0].results.iter().map(|r| format!("{}: {}", r.solver, r.diagnostic)).collect::<Vec<_>>();
        return Err(CliError::Solver(format!("every row failed ({})", first.join("; "))));
    }
    Ok(())
}

fn format_value(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_else(|| "-".into())
}

fn steady(common: &Common) -> Result<(), CliError> {
    let spec = load(common, "[system]\npreset = benchmark\n")?;
    let rows = run_sweep(&SweepSpec { grid: vec![spec.grid[0]], ..spec.clone() })?;
    check_rows(&rows)?;
    if let Some(path) = &common.out {
        return write_rows(Some(path), &rows);
    }
    let point = spec.point(rows[0].value);
    let mut text = format!(
        "omega_a={:e} delta={:e} g={:e} gamma0={:e} kappa0={:e} n_a0={:e} n_b0={:e}\n\n",
        point.omega_a, point.delta, point.g, point.gamma0, point.kappa0, point.n_a0, point.n_b0
    );
    text.push_str(&format!("{:<14} {:>24} {:>24}  diagnostic\n", "solver", "gamma_c [Hz]", "n_a^f"));
    for r in &rows[0].results {
        text.push_str(&format!(
            "{:<14} {:>24} {:>24}  {}\n",
            r.solver.name(),
            format_value(r.gamma_c),
            format_value(r.n_f),
            r.diagnostic
        ));
    }
    write_text(None, &text)
}

fn evolve(common: &Common, duration: Option<f64>, samples: usize) -> Result<(), CliError> {
    let mut spec = load(common, "[system]\npreset = benchmark\n")?;
    if common.solvers.is_none() {
        // Without an explicit choice keep whichever configured solvers evolve in time.
        spec.solvers.retain(|s| matches!(s, Solver::Gaussian | Solver::Oracle));
        if spec.solvers.is_empty() {
            spec.solvers.push(Solver::Gaussian);
        }
    }
    let point = spec.point(spec.grid[0]);
    let rate = analytic::cooling_rate(&point).max(0.0) + point.gamma0;
    let duration = duration.unwrap_or(4.0 / (2.0 * std::f64::consts::PI * rate));
    let control = StepControl::default();

    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut times = Vec::new();
    for solver in &spec.solvers {
        match solver {
            Solver::Gaussian => {
                let model = gaussian::build_drift(&point);
                let initial = CovarianceState::thermal(point.n_a0, point.n_b0);
                let traj = gaussian::evolve(&model, &initial, duration, samples, &control)?;
                times = traj.times();
                columns.push(("n_a_gaussian".into(), traj.occupations(Mode::A)?));
                columns.push(("n_b_gaussian".into(), traj.occupations(Mode::B)?));
                match gaussian::fit_cooling_rate(&traj, Mode::A) {
                    Ok(fit) => log::info!("gaussian: fitted decay rate {:e} Hz", fit.rate),
                    Err(e) => log::warn!("gaussian: {e}"),
                }
            }
            Solver::Oracle => {
                let config = spec.oracle.unwrap_or_default();
                let generator = fock::build_generator(&point, &config)?;
                let initial = DensityState::thermal(config.dims, point.n_a0, point.n_b0)?;
                let traj = fock::evolve(&generator, &initial, duration, samples, &StepControl::with_tolerance(1e-8))?;
                times = traj.times.clone();
                columns.push(("n_a_oracle".into(), traj.occupations(Mode::A)));
                columns.push(("n_b_oracle".into(), traj.occupations(Mode::B)));
            }
            other => {
                return Err(CliError::Config(lincool::Error::Config {
                    line: None,
                    key: Some("solvers".into()),
                    message: format!("`{other}` has no time evolution; use gaussian or oracle"),
                }))
            }
        }
    }
    let mut text = String::from("time");
    for (name, _) in &columns {
        text.push(',');
        text.push_str(name);
    }
    text.push('\n');
    for (i, t) in times.iter().enumerate() {
        text.push_str(&format!("{t:e}"));
        for (_, values) in &columns {
            text.push_str(&format!(",{:e}", values[i]));
        }
        text.push('\n');
    }
    write_text(common.out.as_deref(), &text)
}

fn sweep_command(common: &Common) -> Result<(), CliError> {
    let spec = load(common, "[system]\npreset = benchmark\n[sweep]\nparameter = detuning_ratio\ngrid = 0.5:1.5:201\n")?;
    let rows = run_sweep(&spec)?;
    check_rows(&rows)?;
    write_rows(common.out.as_deref(), &rows)
}

fn figure(common: &Common, name: &str) -> Result<(), CliError> {
    if common.config.is_some() || common.solvers.is_some() || common.scaled {
        return Err(CliError::Config(lincool::Error::Config {
            line: None,
            key: None,
            message: format!("{name} takes only --out and --grid"),
        }));
    }
    let grid = match &common.grid {
        Some(g) => parse_grid(g, sweep::SweptParameter::DetuningRatio)?,
        None => figure_grid(),
    };
    let curves = if name == "fig2" { fig2_specs(grid) } else { fig3_specs(grid) };
    let stem = common.out.clone().unwrap_or_else(|| PathBuf::from(name));
    let stem = stem.with_extension("");
    for (g, spec) in curves {
        let rows = run_sweep(&spec)?;
        check_rows(&rows)?;
        let file = format!("{}_{}.csv", stem.display(), sweep::coupling_tag(g));
        write_rows(Some(Path::new(&file)), &rows)?;
        eprintln!("wrote {file}");
    }
    Ok(())
}

fn compare_command(common: &Common) -> Result<(), CliError> {
    let spec = load(common, "[system]\npreset = scaled-benchmark\n")?;
    let point = spec.point(spec.grid[0]);
    let report = compare(&point, &spec.oracle.unwrap_or_default(), spec.lc_frequency)?;
    write_text(common.out.as_deref(), &format!("{report}\n"))
}

fn design_command(common: &Common) -> Result<(), CliError> {
    let spec = load(common, "[circuit]\npreset = benchmark\n[mechanics]\nfrequency = 20 MHz\ndamping = 2 kHz\n")?;
    let setup = spec.setup.ok_or_else(|| {
        CliError::Config(lincool::Error::Config {
            line: None,
            key: None,
            message: "design needs a [circuit] section".into(),
        })
    })?;
    let report = design(&setup)?;
    write_text(common.out.as_deref(), &format!("{report}\n"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Steady(c) => steady(&c),
        Command::Evolve { common, duration, samples } => evolve(&common, duration, samples),
        Command::Sweep(c) => sweep_command(&c),
        Command::Fig2(c) => figure(&c, "fig2"),
        Command::Fig3(c) => figure(&c, "fig3"),
        Command::Compare(c) => compare_command(&c),
        Command::Design(c) => design_command(&c),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
