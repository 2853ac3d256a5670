use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fstirap::config::{Format, Mode, Overrides, ProtocolChoice};

#[derive(Parser)]
#[command(name = "fstirap", version, about = "Fractional STIRAP simulations: passages, protocols and scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file (a previous run_manifest.json also works).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output samples per trajectory.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Artifact formats to write (repeatable).
    #[arg(long = "format", value_enum, global = true)]
    formats: Vec<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one passage and write its trajectory.
    Simulate,
    /// Run an entanglement protocol.
    Protocol {
        #[arg(value_enum)]
        kind: ProtocolChoice,
    },
    /// Scan final populations over (z0, d).
    Scan,
    /// Classify the pulse sequence (ordering, ending ratio, mixing angle).
    Classify,
    /// Pulse-area adiabaticity products.
    Adiabaticity,
    /// Run whatever mode the configuration names.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, protocol) = match cli.command {
        Command::Simulate => (Some(Mode::Simulate), None),
        Command::Protocol { kind } => (Some(Mode::Protocol), Some(kind)),
        Command::Scan => (Some(Mode::Scan), None),
        Command::Classify => (Some(Mode::Classify), None),
        Command::Adiabaticity => (Some(Mode::Adiabaticity), None),
        Command::Run => (None, None),
    };
    let Some(config) = cli.common.config else {
        eprintln!("error: --config PATH is required");
        return ExitCode::from(2);
    };
    let overrides = Overrides {
        mode,
        protocol,
        out: cli.common.out,
        workers: cli.common.workers,
        samples: cli.common.samples,
        formats: cli.common.formats,
    };
    match fstirap::run(&config, &overrides) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
