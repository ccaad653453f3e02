use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use fibrefilm::output::OutputDir;
use fibrefilm::{config, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Simulate,
    Minimize,
    Period,
    Travelwave,
    Continue,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Minimize => Command::Minimize,
            Cmd::Period => Command::Period,
            Cmd::Travelwave => Command::Travelwave,
            Cmd::Continue => Command::Continue,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Thin-film flow on a vertical fibre: simulations, minimizers and travelling waves.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    command: Cmd,
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Extra `key=value` settings applied after the file.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<()> {
    let args = Args::parse();
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
    let cfg = config::parse_config_with(&text, &args.overrides, &base)?;
    let dir = OutputDir::claim(&args.out)?;
    let start = std::time::Instant::now();
    let summary = fibrefilm::run(args.command.into(), &cfg, &dir)?;
    print!("{}", summary.render());
    eprintln!("done in {:.2?}; outputs in {}", start.elapsed(), dir.root().display());
    Ok(())
}
