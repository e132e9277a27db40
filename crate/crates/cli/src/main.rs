use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leastinterp::frontend::run::exit_code;
use leastinterp::frontend::{run_report, Command, RunConfig};

/// Exact least interpolation on embedded manifold germs.
#[derive(Parser, Debug)]
#[command(name = "leastinterp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Sub>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the report here instead of the configured output or stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Series truncation order K.
    #[arg(long, global = true, value_name = "K")]
    truncation: Option<usize>,
    /// Sampling seed.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Polynomial degree d.
    #[arg(long, global = true, value_name = "D")]
    degree: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Least space of C[Φ]^d (or of explicit generators) with its annihilator.
    Least,
    /// Bundle, D-invariance and Taylorian flags at the base point.
    Classify,
    /// Jet rank profile and Wronskian witness.
    Bundle,
    /// Taylor projection of a target polynomial onto C[Φ]^d.
    Project,
    /// Push-forwards of the least space (higher-order tangents).
    Tangents,
    /// Multiplication table of the local Artinian algebra.
    Artin,
    /// Zero-estimate table θ(e), λ(e) and dimension bounds.
    Theta,
    /// Every section above in one report.
    ReportAll,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::Least => Command::Least,
            Sub::Classify => Command::Classify,
            Sub::Bundle => Command::Bundle,
            Sub::Project => Command::Project,
            Sub::Tangents => Command::Tangents,
            Sub::Artin => Command::Artin,
            Sub::Theta => Command::Theta,
            Sub::ReportAll => Command::ReportAll,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Some(path) = cli.common.config.clone() else {
        eprintln!("error: --config PATH is required");
        return ExitCode::from(1);
    };
    let mut cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    if let Some(k) = cli.common.truncation {
        if k == 0 {
            eprintln!("error: --truncation must be at least 1");
            return ExitCode::from(1);
        }
        cfg.truncation = Some(k);
        cfg.truncation_cap = cfg.truncation_cap.max(k);
    }
    if let Some(s) = cli.common.seed {
        cfg.sampling.seed = s;
    }
    if let Some(d) = cli.common.degree {
        cfg.degree = d;
    }
    let outcome = run_report(&cfg, cli.command.map(Command::from));
    let text = outcome.render();
    match cli.common.out.or(cfg.output.clone()) {
        Some(out) => {
            if let Err(e) = std::fs::write(&out, &text) {
                eprintln!("error[frontend.IoError]: {}: {e}", out.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = outcome.report.get("error") {
        eprintln!("error[{}]: {}", err["code"].as_str().unwrap_or(""), err["message"].as_str().unwrap_or(""));
    }
    ExitCode::from(outcome.exit_code as u8)
}
