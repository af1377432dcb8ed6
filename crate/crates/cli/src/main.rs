use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracmap_cli::{cmd_decay, cmd_probe, cmd_selftest, cmd_solve, cmd_verify, CommonOpts, Outcome};

#[derive(Parser)]
#[command(name = "fracmap", version, about = "Critical points of fractional sphere-valued energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; defaults to the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set energy.s=0.4`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed overriding the configured one.
    #[arg(long)]
    seed: Option<u64>,
}

impl From<Common> for CommonOpts {
    fn from(c: Common) -> Self {
        CommonOpts {
            config: c.config,
            out: c.out,
            overrides: c.overrides,
            workers: c.workers,
            seed: c.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minimise the energy and certify the critical point.
    Solve(Common),
    /// Check a stored field against the Euler-Lagrange system.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Field file written by `solve`.
        #[arg(long)]
        field: PathBuf,
    },
    /// Run inequality probes against frozen constants.
    Probe {
        #[command(flatten)]
        common: Common,
        /// Frozen-constants file; defaults to the built-in one.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Energy decay profile and Hoelder fit.
    Decay {
        #[command(flatten)]
        common: Common,
        /// Field file; defaults to the configured initial map.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Built-in consistency checks; needs no configuration.
    Selftest {
        /// Also validate this frozen-constants file.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Outcome = match cli.command {
        Command::Solve(c) => cmd_solve(&c.into()),
        Command::Verify { common, field } => cmd_verify(&common.into(), &field),
        Command::Probe { common, constants } => cmd_probe(&common.into(), constants.as_deref()),
        Command::Decay { common, field } => cmd_decay(&common.into(), field.as_deref()),
        Command::Selftest { constants } => cmd_selftest(constants.as_deref()),
    };
    if outcome.code.code() == 0 {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(outcome.code.code() as u8)
}
