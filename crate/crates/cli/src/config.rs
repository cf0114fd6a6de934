use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::{CliError, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "anyonvm", version, about = "SU(2)_4 anyon protocol simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Script file, or the name of a catalog script.
    #[arg(long, global = true)]
    pub script: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Seed for sample mode.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the script's retry budget.
    #[arg(long = "loop-bound", global = true)]
    pub loop_bound: Option<u32>,
    /// Write the JSON here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comparison tolerance, in (0, 1e-3].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Dump quantum dimensions, 6j symbols and R symbols.
    Tables,
    /// Check the pentagon and hexagon identities.
    Verify,
    /// Execute a script once.
    Run {
        /// Logical basis input (ignored by preparations).
        #[arg(long, default_value_t = 0)]
        input: usize,
        /// Outcomes to force at successive measurements, comma separated.
        #[arg(long, value_delimiter = ',')]
        path: Vec<u8>,
    },
    /// Print the full branch tree of a script.
    Enumerate {
        #[arg(long, default_value_t = 0)]
        input: usize,
    },
    /// Extract a gate by name: a catalog gate script, or eg1, eg2, cnot_swap, cnot.
    Gates {
        name: Option<String>,
        #[arg(long, value_delimiter = ',')]
        path: Vec<u8>,
    },
    /// Run the fixture corpus of printed values.
    Fixtures,
    /// Irrationality and density report for the phase ancillas.
    Density {
        /// Point counts for the gap sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [100, 1000, 10000])]
        n: Vec<usize>,
        #[arg(long = "q-max", default_value_t = phase_number_theory::DEFAULT_Q_MAX)]
        q_max: u32,
    },
    /// List the catalog scripts.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sample,
    Force,
    Enumerate,
}

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub script: Option<String>,
    pub mode: ModeArg,
    pub seed: Option<u64>,
    pub loop_bound: Option<u32>,
    pub out: Option<PathBuf>,
    pub tol: f64,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let tol = cli.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(CliError::Usage(format!("--tol must lie in (0, 1e-3], got {tol}")));
        }
        let mode = cli.mode.unwrap_or(ModeArg::Force);
        if mode == ModeArg::Sample && cli.seed.is_none() {
            return Err(CliError::Usage("--mode sample needs --seed".into()));
        }
        Ok(RunConfig {
            command: cli.command.clone(),
            script: cli.script.clone(),
            mode,
            seed: cli.seed,
            loop_bound: cli.loop_bound,
            out: cli.out.clone(),
            tol,
        })
    }
}
