use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use icmn_core::analytic::{sweep, write_sweep_csv, SweepGrid};
use icmn_core::simulate::{generate_graph, mc_delivery_ratio};
use icmn_core::trace::{
    discretize_with, estimate_model, link_stats, max_alpha_for_target, parse_contacts,
    replay_experiment, write_replay_csv, ContactTrace, ReplaySchedule, ScheduleConfig, TraceFormat,
};
use icmn_core::{Error, LinkModel};

use crate::config::parse_config;
use crate::grid::{parse_grid, GridValue};
use crate::{
    AnalyticArgs, Command, GenerateArgs, OutputArgs, ReplayArgs, ScenarioArgs, SimulateArgs,
    StatsArgs,
};

pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flag, config file or input data.
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn flag_error(flag: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("--{flag}: {msg}"))
}

fn core_error(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

pub fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Analytic(args) => analytic(args),
        Command::Simulate(args) => simulate(args),
        Command::Stats(args) => stats(args),
        Command::Replay(args) => replay(args),
        Command::Generate(args) => generate(args),
    }
}

/// Scenario grid after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
struct Scenario {
    grid: SweepGrid,
    tau: f64,
}

fn grid_value<T: GridValue>(
    flag: &'static str,
    cli: &Option<String>,
    file: &std::collections::BTreeMap<String, String>,
    default: &str,
) -> Result<Vec<T>, CliError> {
    let text = cli
        .as_deref()
        .or(file.get(flag).map(String::as_str))
        .unwrap_or(default);
    let values = parse_grid::<T>(text).map_err(|e| flag_error(flag, e))?;
    if values.is_empty() {
        return Err(flag_error(flag, "no values"));
    }
    Ok(values)
}

fn resolve(args: &ScenarioArgs) -> Result<Scenario, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| flag_error("config", e))?
        }
        None => Default::default(),
    };
    let grid = SweepGrid {
        n: grid_value("n", &args.n, &file, "20")?,
        r: grid_value("r", &args.r, &file, "2")?,
        lambda: grid_value("lambda", &args.lambda, &file, "10")?,
        alpha: grid_value("alpha", &args.alpha, &file, "1")?,
        d: grid_value("d", &args.d, &file, "5")?,
    };
    let tau = grid_value::<f64>("tau", &args.tau, &file, "15")?;
    let [tau] = tau[..] else {
        return Err(flag_error("tau", "expects a single value"));
    };

    if let Some(n) = grid.n.iter().find(|&&n| n < 2) {
        return Err(flag_error("n", format!("n must be >= 2, got {n}")));
    }
    if let Some(r) = grid.r.iter().find(|&&r| r < 1.0) {
        return Err(flag_error("r", format!("r must satisfy r >= 1, got {r}")));
    }
    if let Some(l) = grid.lambda.iter().find(|&&l| l <= 0.0) {
        return Err(flag_error(
            "lambda",
            format!("lambda must be > 0 (and >= 1/r), got {l}"),
        ));
    }
    if let Some(a) = grid.alpha.iter().find(|&&a| a <= 0.0) {
        return Err(flag_error("alpha", format!("alpha must be > 0, got {a}")));
    }
    if grid.d.contains(&0) {
        return Err(flag_error("d", "d must be >= 1"));
    }
    if tau <= 0.0 {
        return Err(flag_error("tau", format!("tau must be > 0, got {tau}")));
    }
    Ok(Scenario { grid, tau })
}

fn emit(output: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    let result = match &output.out {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    };
    result.map_err(CliError::Io)
}

fn analytic(args: AnalyticArgs) -> Result<u8, CliError> {
    let scenario = resolve(&args.scenario)?;
    let rows = sweep(&scenario.grid).map_err(core_error)?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
    emit(&args.output, &buf)?;
    let mut code = 0;
    for row in &rows {
        if let Err(e) = &row.outcome {
            eprintln!(
                "error at n={} r={} lambda={} alpha={} d={}: {e}",
                row.n, row.r, row.lambda, row.alpha, row.d
            );
            code = EXIT_PARTIAL;
        }
    }
    Ok(code)
}

fn simulate(args: SimulateArgs) -> Result<u8, CliError> {
    if args.trials == 0 {
        return Err(flag_error("trials", "at least one trial is required"));
    }
    let g = resolve(&args.scenario)?.grid;
    let mut buf = Vec::new();
    writeln!(
        buf,
        "n,r,lambda,alpha,d,trials,successes,ratio,half_width_95,seed"
    )
    .unwrap();
    let mut code = 0;
    for &n in &g.n {
        for &r in &g.r {
            for &lambda in &g.lambda {
                for &alpha in &g.alpha {
                    for &d in &g.d {
                        let est = LinkModel::new(r, lambda).and_then(|m| {
                            mc_delivery_ratio(n, &m, alpha, d, args.trials, args.seed)
                        });
                        match est {
                            Ok(e) => writeln!(
                                buf,
                                "{n},{r},{lambda},{alpha},{d},{},{},{},{},{}",
                                e.trials, e.successes, e.ratio, e.half_width_95, args.seed
                            ),
                            Err(e) => {
                                eprintln!(
                                    "error at n={n} r={r} lambda={lambda} alpha={alpha} d={d}: {e}"
                                );
                                code = EXIT_PARTIAL;
                                writeln!(
                                    buf,
                                    "{n},{r},{lambda},{alpha},{d},{},,,,{}",
                                    args.trials, args.seed
                                )
                            }
                        }
                        .unwrap();
                    }
                }
            }
        }
    }
    emit(&args.output, &buf)?;
    Ok(code)
}

fn load_trace(path: &Path, format: &str) -> Result<ContactTrace, CliError> {
    let format: TraceFormat = format.parse().map_err(|e| flag_error("format", e))?;
    let file =
        fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let parsed = parse_contacts(io::BufReader::new(file), format)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!(
            "warning: {}: line {}: {}",
            path.display(),
            w.line,
            w.message
        );
    }
    Ok(parsed.trace)
}

fn stats(args: StatsArgs) -> Result<u8, CliError> {
    let tau = args.trace.tau;
    if !tau.is_finite() || tau <= 0.0 {
        return Err(flag_error("tau", format!("tau must be > 0, got {tau}")));
    }
    let trace = load_trace(&args.trace.trace, &args.trace.format)?;
    let stats = link_stats(&trace).map_err(core_error)?;
    let mut buf = Vec::new();
    let mut row = |metric: &str, value: String| writeln!(buf, "{metric},{value}").unwrap();
    row("metric", "value".into());
    row("nodes", trace.node_count().to_string());
    row("contacts", stats.contact_count().to_string());
    row("duration_s", trace.duration().to_string());
    row("mean_contact_s", stats.mean_contact.to_string());
    row(
        "mean_intercontact_s",
        stats
            .mean_intercontact
            .map(|v| v.to_string())
            .unwrap_or_default(),
    );
    row(
        "fraction_shorter_than_tau",
        stats.fraction_shorter_than(tau).to_string(),
    );
    match estimate_model(&stats, tau) {
        Ok(est) => {
            if est.r_clamped || est.lambda_clamped {
                eprintln!("warning: fitted link model was clamped to r >= 1, lambda >= 1/r");
            }
            row("estimated_r", est.r.to_string());
            row("estimated_lambda", est.lambda.to_string());
            row("r_clamped", est.r_clamped.to_string());
            row("lambda_clamped", est.lambda_clamped.to_string());
        }
        Err(e) => eprintln!("warning: no link model fitted: {e}"),
    }
    for (secs, count) in &stats.lifetime_histogram {
        row(&format!("lifetime_{secs}s"), count.to_string());
    }
    emit(&args.output, &buf)?;
    Ok(0)
}

fn replay(args: ReplayArgs) -> Result<u8, CliError> {
    let tau = args.trace.tau;
    if !tau.is_finite() || tau <= 0.0 {
        return Err(flag_error("tau", format!("tau must be > 0, got {tau}")));
    }
    let alphas = parse_grid::<f64>(&args.alpha).map_err(|e| flag_error("alpha", e))?;
    if alphas.iter().any(|&a| a <= 0.0) {
        return Err(flag_error("alpha", "alpha must be > 0"));
    }
    let delays = parse_grid::<usize>(&args.d).map_err(|e| flag_error("d", e))?;
    if delays.contains(&0) {
        return Err(flag_error("d", "d must be >= 1"));
    }
    if args.pairs == 0 {
        return Err(flag_error(
            "pairs",
            "at least one pair per start is required",
        ));
    }
    let spacing = args.spacing.unwrap_or(tau);
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(flag_error("spacing", "must be > 0"));
    }

    let trace = load_trace(&args.trace.trace, &args.trace.format)?;
    if trace.is_empty() {
        return Err(CliError::Config(format!(
            "{}: trace contains no contacts",
            args.trace.trace.display()
        )));
    }
    let graph =
        discretize_with(&trace, tau, args.coverage).map_err(|e| flag_error("coverage", e))?;
    let d_max = delays.iter().copied().max().unwrap_or(1);
    let config = ScheduleConfig {
        start_window: args.start_window,
        spacing,
        pairs_per_start: args.pairs,
        seed: args.seed,
    };
    // one schedule for every delay so that points are comparable
    let schedule = ReplaySchedule::sample(&graph, d_max, &config).map_err(core_error)?;
    if schedule.starts().is_empty() {
        return Err(flag_error(
            "start-window",
            "no start time leaves room for the largest delay",
        ));
    }

    let mut reports = Vec::new();
    for &alpha in &alphas {
        for &d in &delays {
            reports.push(replay_experiment(&graph, &schedule, alpha, d).map_err(core_error)?);
        }
    }
    let mut buf = Vec::new();
    write_replay_csv(&reports, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;

    if let Some(target) = args.target_ratio {
        let mut sorted = alphas.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        writeln!(buf).unwrap();
        writeln!(buf, "d,target_ratio,max_alpha").unwrap();
        for &d in &delays {
            let best =
                max_alpha_for_target(&graph, &schedule, target, d, &sorted).map_err(core_error)?;
            writeln!(
                buf,
                "{d},{target},{}",
                best.map(|a| a.to_string()).unwrap_or_default()
            )
            .unwrap();
        }
    }
    emit(&args.output, &buf)?;
    Ok(0)
}

fn generate(args: GenerateArgs) -> Result<u8, CliError> {
    if args.n < 2 {
        return Err(flag_error("n", format!("n must be >= 2, got {}", args.n)));
    }
    if args.steps == 0 {
        return Err(flag_error("steps", "at least one step is required"));
    }
    if !args.tau.is_finite() || args.tau <= 0.0 {
        return Err(flag_error(
            "tau",
            format!("tau must be > 0, got {}", args.tau),
        ));
    }
    let model = LinkModel::new(args.r, args.lambda).map_err(core_error)?;
    if model.is_degenerate() {
        eprintln!("warning: q_c or q_i is 0; links change state at every step");
    }
    let graph =
        generate_graph(args.n, &model, args.steps, args.tau, args.seed).map_err(core_error)?;
    let mut buf = Vec::new();
    writeln!(
        buf,
        "# n={} r={} lambda={} tau={} steps={} seed={}",
        args.n, args.r, args.lambda, args.tau, args.steps, args.seed
    )
    .unwrap();
    graph
        .write_event_csv(&mut buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    emit(&args.output, &buf)?;
    Ok(0)
}
