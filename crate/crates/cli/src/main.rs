mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, Settings};

/// Force identification in the 1-D wave equation from boundary data.
#[derive(Debug, Parser)]
#[command(name = "wavesource", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the forward problem and write the field and both boundary fluxes
    Direct(CommandArgs),
    /// Recover the force from boundary flux data
    Invert(CommandArgs),
    /// Sweep lambda and locate the L-curve corner
    Lcurve(CommandArgs),
    /// Regenerate the condition-number, flux and accuracy tables
    Tables(CommandArgs),
}

#[derive(Debug, Args)]
struct CommandArgs {
    /// JSON configuration file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (name, args) = match cli.command {
        Command::Direct(a) => ("direct", a),
        Command::Invert(a) => ("invert", a),
        Command::Lcurve(a) => ("lcurve", a),
        Command::Tables(a) => ("tables", a),
    };
    let settings = match &args.config {
        Some(path) => Settings::load(path)?.overlay(&args.settings),
        None => args.settings,
    };
    let cfg = RunConfig::resolve(name, settings)?;
    match name {
        "direct" => commands::direct(&cfg),
        "invert" => commands::invert(&cfg),
        "lcurve" => commands::lcurve(&cfg),
        _ => commands::tables(&cfg),
    }
}

/// Machine-readable code for the first recognised cause in the chain.
fn error_code(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<wavesource::Error>() {
            return e.code();
        }
        if cause.is::<serde_json::Error>() {
            return "INVALID_CONFIG";
        }
        if cause.is::<std::io::Error>() {
            return "IO_ERROR";
        }
    }
    "INVALID_CONFIG"
}

fn report(code: &str, message: &str) -> ExitCode {
    let message = message.replace('\n', " ").replace('"', "'");
    eprintln!("error: code={code} message=\"{message}\"");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return report("INVALID_ARGUMENT", first);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(error_code(&e), &format!("{e:#}")),
    }
}
