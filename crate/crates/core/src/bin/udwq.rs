use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use udw_qfim::report::{fixtures_report, load_config, qfim_report, state_report};
use udw_qfim::sweep::{emit, run_sweep};
use udw_qfim::verify::{verify, Level};
use udw_qfim::Error;

/// Quantum Fisher information for two Unruh-DeWitt detectors.
///
/// Every subcommand except `verify` reads dotted `key = value` settings from
/// an optional config file, then applies `--key value` overrides, e.g.
/// `udwq qfim --fixed.T 0.5 --fixed.omega 1 --fixed.delta0 -2`.
#[derive(Parser)]
#[command(name = "udwq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the channel-evolved stationary state and validity checks.
    State(Settings),
    /// QFIM, SLDs, compatibility and Cramér-Rao bounds at one point.
    Qfim(Settings),
    /// Evaluate a one- or two-axis grid and write CSV or JSON.
    Sweep(Settings),
    /// Run the self-check suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
    },
    /// Closed-form reference values beside the pipeline at one point.
    Fixtures(Settings),
}

#[derive(Args)]
struct Settings {
    /// Config file of dotted `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides such as `--channel.tau 5` or `--grid.x.count=50`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

fn run(command: Command) -> Result<bool, Error> {
    let text = match command {
        Command::Verify { level } => {
            let report = verify(match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            });
            println!("{report}");
            return Ok(report.passed());
        }
        Command::Sweep(s) => {
            let cfg = load_config(s.config.as_deref(), &s.overrides)?;
            let table = run_sweep(&cfg)?;
            emit(&table, cfg.format, cfg.output.as_deref())?;
            return Ok(true);
        }
        Command::State(s) => state_report(&load_config(s.config.as_deref(), &s.overrides)?)?,
        Command::Qfim(s) => qfim_report(&load_config(s.config.as_deref(), &s.overrides)?)?,
        Command::Fixtures(s) => fixtures_report(&load_config(s.config.as_deref(), &s.overrides)?)?,
    };
    print!("{text}");
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("udwq: {e}");
            ExitCode::from(2)
        }
    }
}
