use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nvce_transfer::scenario::{
    builtin, load_config, run_each, run_scenario_outcome, run_sweep, ScenarioConfig,
    ScenarioOutcome, BUILTIN_IDS,
};
use nvce_transfer::Error;

fn golden_dir() -> PathBuf {
    let cli = Path::new(env!("CARGO_MANIFEST_DIR"));
    cli.parent()
        .unwrap_or(cli)
        .join("core")
        .join("tests")
        .join("golden")
}

const EXIT_OTHER: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTEGRATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nvce-transfer",
    version,
    about = "Simulate state transfer between NV-centre ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario, every built-in (`all`), or a scenario file.
    Run(RunArgs),
    /// Print the built-in scenario ids.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario id, or `all`.
    #[arg(required_unless_present = "config", conflicts_with = "config")]
    scenario: Option<String>,
    /// Scenario file to run instead of a built-in.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV file; a directory for `all` and for sweeps.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Number of output samples, including both ends.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// End of the run in units of 1/J1.
    #[arg(long = "t-end", value_name = "X")]
    t_end: Option<f64>,
    /// Upper bound on concurrently running scenarios or sweep points.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Rewrite the committed golden CSVs for built-in scenarios.
    #[arg(long)]
    regen_golden: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn from_error(context: &str, cfg: Option<&ScenarioConfig>, e: Error) -> Self {
        let code = match &e {
            Error::IntegrationFailure { .. } => EXIT_INTEGRATION,
            e if e.is_config_error() => EXIT_CONFIG,
            _ => EXIT_OTHER,
        };
        let message = match (&e, cfg) {
            (Error::IntegrationFailure { t_reached, .. }, Some(cfg)) => format!(
                "{context}: {e} (Jt = {:.6}); no output written for this run",
                t_reached * cfg.j[0]
            ),
            _ => format!("{context}: {e}"),
        };
        Failure { code, message }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for id in BUILTIN_IDS {
                report(id);
            }
            Ok(())
        }
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failures) => {
            for f in &failures {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(failures.iter().map(|f| f.code).max().unwrap_or(EXIT_OTHER))
        }
    }
}

fn run(args: RunArgs) -> Result<(), Vec<Failure>> {
    let one = |f: Failure| vec![f];
    let jobs = args.jobs.map(|k| k as usize);
    let mut configs = match (&args.scenario, &args.config) {
        (_, Some(path)) => vec![load_config(path)
            .map_err(|e| one(Failure::from_error(&path.display().to_string(), None, e)))?],
        (Some(id), None) if id == "all" => BUILTIN_IDS
            .iter()
            .map(|id| builtin(id).expect("registered"))
            .collect(),
        (Some(id), None) => vec![builtin(id).map_err(|e| one(Failure::from_error(id, None, e)))?],
        (None, None) => unreachable!("clap requires one of them"),
    };
    let all = configs.len() > 1;

    if args.regen_golden {
        if args.config.is_some() {
            return Err(one(Failure::usage(
                "--regen-golden only applies to built-in scenarios",
            )));
        }
        if args.out.is_some() || args.samples.is_some() || args.t_end.is_some() {
            return Err(one(Failure::usage(
                "--regen-golden cannot be combined with --out, --samples or --t-end",
            )));
        }
    }

    for cfg in &mut configs {
        if let Some(t) = args.t_end {
            cfg.t_end = t;
        }
        if let Some(n) = args.samples {
            cfg.samples = Some(n);
        }
        if args.t_end.is_some() || args.samples.is_some() {
            let id = cfg.id.clone();
            cfg.validate()
                .map_err(|e| one(Failure::from_error(&id, None, e)))?;
        }
    }

    if let [cfg] = configs.as_slice() {
        if let Some(sweep) = &cfg.sweep {
            let dir = args
                .out
                .clone()
                .or_else(|| cfg.output.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            return sweep_to_dir(cfg, sweep.axis, &sweep.values, &dir, jobs);
        }
    }

    if all || args.regen_golden {
        let dir = if args.regen_golden {
            golden_dir()
        } else {
            args.out.clone().unwrap_or_else(|| PathBuf::from("."))
        };
        let results =
            run_each(&configs, jobs).map_err(|e| one(Failure::from_error("run", None, e)))?;
        let mut failures = Vec::new();
        for (cfg, result) in configs.iter().zip(results) {
            let written =
                result.and_then(|o| write_table(&o, &dir.join(format!("{}.csv", cfg.id))));
            if let Err(e) = written {
                failures.push(Failure::from_error(&cfg.id, Some(cfg), e));
            }
        }
        return if failures.is_empty() {
            Ok(())
        } else {
            Err(failures)
        };
    }

    let cfg = &configs[0];
    let path = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.id)));
    run_scenario_outcome(cfg)
        .and_then(|o| write_table(&o, &path))
        .map_err(|e| one(Failure::from_error(&cfg.id, Some(cfg), e)))
}

fn write_table(outcome: &ScenarioOutcome, path: &Path) -> nvce_transfer::Result<()> {
    outcome.table.write_csv(path)?;
    report(&path.display().to_string());
    Ok(())
}

fn sweep_to_dir(
    base: &ScenarioConfig,
    axis: nvce_transfer::scenario::SweepAxis,
    values: &[f64],
    dir: &Path,
    jobs: Option<usize>,
) -> Result<(), Vec<Failure>> {
    let fail = |e| vec![Failure::from_error(&base.id, Some(base), e)];
    let result = run_sweep(base, axis, values, jobs).map_err(fail)?;
    for (cfg, outcome) in result.configs.iter().zip(&result.outcomes) {
        write_table(outcome, &dir.join(format!("{}.csv", cfg.id))).map_err(fail)?;
    }
    if !values.is_empty() {
        let summary = dir.join(format!("{}_sweep.csv", base.id));
        nvce_transfer::scenario::write_atomic(&summary, &result.summary_csv(base.target))
            .map_err(fail)?;
        report(&summary.display().to_string());
    }
    Ok(())
}

/// Prints one line to stdout; a closed pipe is not an error.
fn report(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}
