use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semiframe::pipeline::report_status;
use semiframe::report::Timing;
use semiframe::{emit_report, load_scenario, run, Command, ExitStatus, Format, RunError, RunResult};

#[derive(Parser)]
#[command(
    name = "semiframe",
    version,
    about = "Frame analysis of continuous-time dynamical sampling scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frame bounds, Cayley residual, structural conditions and (with a grid) discretization.
    Analyze(Common),
    /// Cayley equivalence with quadrature and power-sum oracles.
    Equivalence(Common),
    /// Discretization certificate, finite horizon, grid check and stability dichotomy.
    Discretize(Common),
    /// Structural frame conditions per truncation.
    Conditions(Common),
    /// Least-squares recovery from noisy samples on the scenario grid.
    Reconstruct(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Scenario TOML file.
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the sweep, e.g. `4,8,12`.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    /// Add wall-clock timing to the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn execute(command: Command, args: Common) -> RunResult<ExitStatus> {
    let start = Instant::now();
    let mut scenario = load_scenario(&args.scenario)?;
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(sweep) = args.sweep {
        scenario.set_sweep(sweep)?;
    }
    let mut report = run(command, &scenario);
    if args.timing {
        report.timing = Some(Timing {
            total_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let bytes = emit_report(&report, format)?;
    match &args.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| RunError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|source| RunError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    for e in &report.stage_errors {
        match e.n {
            Some(n) => eprintln!("semiframe: {} (N = {n}): {}", e.stage, e.message),
            None => eprintln!("semiframe: {}: {}", e.stage, e.message),
        }
    }
    Ok(report_status(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Analyze(a) => (Command::Analyze, a),
        Cmd::Equivalence(a) => (Command::Equivalence, a),
        Cmd::Discretize(a) => (Command::Discretize, a),
        Cmd::Conditions(a) => (Command::Conditions, a),
        Cmd::Reconstruct(a) => (Command::Reconstruct, a),
    };
    let status = execute(command, args).unwrap_or_else(|e| {
        eprintln!("semiframe: {e}");
        e.exit_status()
    });
    ExitCode::from(status.code() as u8)
}
