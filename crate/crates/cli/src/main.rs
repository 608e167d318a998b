use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavcool_cli::tools::{error_budget, map_config, to_json, Geometry};
use cavcool_cli::{builtin, run_scenario, run_sweep, sweep_csv, write_bundle, write_output, CliError, ModeSelection, ScenarioConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cavcool", version, about = "Cavity-assisted cooling of trapped atomic qubits")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the dynamics of the scenario
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeSelection>,

    /// Accepted for compatibility; every computation is deterministic
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config
    Run { config: PathBuf },
    /// Evaluate the steady state and cooling time over the config's grid
    Sweep { config: PathBuf },
    /// Run a builtin scenario (fig3, fig4a, fig4b, fig5)
    Scenario { name: String },
    /// Map an experimental configuration onto model parameters
    Map {
        #[arg(value_enum)]
        geometry: Geometry,
        config: PathBuf,
    },
    /// Spin-flip probability and relative phase; reference inputs if no config
    Errors { config: Option<PathBuf> },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, mode: Option<ModeSelection>) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::from_json(&read(path)?)?;
    if let Some(m) = mode {
        cfg.mode = m;
    }
    Ok(cfg)
}

fn scenario(cfg: &ScenarioConfig, out: &Path) -> Result<(), CliError> {
    let bundle = run_scenario(cfg)?;
    write_bundle(out, &bundle)?;
    print!("{}", bundle.summary_json());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { config } => scenario(&load(config, cli.mode)?, &cli.out),
        Command::Scenario { name } => {
            let mut cfg = builtin(name).ok_or_else(|| CliError::Config(format!("unknown scenario `{name}`")))?;
            if let Some(m) = cli.mode {
                cfg.mode = m;
            }
            scenario(&cfg, &cli.out)
        }
        Command::Sweep { config } => {
            let cfg = load(config, cli.mode)?;
            let rows = run_sweep(&cfg)?;
            let name = format!("{}_sweep.csv", cfg.name);
            write_output(&cli.out, &name, &sweep_csv(&rows))?;
            let unstable = rows.iter().filter(|r| r.regime == "unstable").count();
            eprintln!("{} rows ({unstable} unstable) -> {}", rows.len(), cli.out.join(name).display());
            Ok(())
        }
        Command::Map { geometry, config } => {
            print!("{}", to_json(&map_config(*geometry, &read(config)?)?));
            Ok(())
        }
        Command::Errors { config } => {
            let text = config.as_deref().map(read).transpose()?;
            print!("{}", to_json(&error_budget(text.as_deref())?));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
