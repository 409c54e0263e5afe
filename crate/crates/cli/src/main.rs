mod output;
mod scenarios;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cavmem_core::Error;
use clap::{Args, Parser, Subcommand};

use crate::output::{write_artifacts, write_manifest, Artifact, RunManifest};
use crate::settings::Settings;

/// Cavity quantum memory simulations.
#[derive(Parser)]
#[command(name = "cavmem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Coarser grids for a quick look.
    #[arg(long)]
    fast: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Derived couplings and rates against participation.
    Rates(Common),
    /// Transfer error for every architecture.
    SwapSweep(Common),
    /// Storage idle error.
    Idle(Common),
    /// Write, idle and read error.
    Memory(Common),
    /// Optimized storage error against storage time.
    Storage(Common),
    /// Bell-state fidelity after storage.
    Bell(Common),
    /// QFT idling budget.
    Qft {
        #[command(flatten)]
        common: Common,
        /// Largest register size.
        #[arg(long, default_value_t = 30)]
        k_max: usize,
    },
    /// Longest storage time for each error target.
    Limits(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rates(_) => "rates",
            Command::SwapSweep(_) => "swap_sweep",
            Command::Idle(_) => "idle",
            Command::Memory(_) => "memory",
            Command::Storage(_) => "storage",
            Command::Bell(_) => "bell",
            Command::Qft { .. } => "qft",
            Command::Limits(_) => "limits",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Rates(c)
            | Command::SwapSweep(c)
            | Command::Idle(c)
            | Command::Memory(c)
            | Command::Storage(c)
            | Command::Bell(c)
            | Command::Limits(c) => c,
            Command::Qft { common, .. } => common,
        }
    }

    fn execute(&self, s: &Settings) -> cavmem_core::Result<Vec<Artifact>> {
        match self {
            Command::Rates(_) => scenarios::rates(s),
            Command::SwapSweep(_) => scenarios::swap_sweep(s),
            Command::Idle(_) => scenarios::idle(s),
            Command::Memory(_) => scenarios::memory(s),
            Command::Storage(_) => scenarios::storage(s),
            Command::Bell(_) => scenarios::bell(s),
            Command::Qft { k_max, .. } => scenarios::qft(s, *k_max),
            Command::Limits(_) => scenarios::limits(s),
        }
    }
}

enum Failure {
    Input(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter(_) | Error::Truncation { .. } => Failure::Input(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(format!("io: {e}"))
    }
}

fn run(cmd: &Command) -> Result<(), Failure> {
    let common = cmd.common();
    let jobs = match common.jobs {
        Some(0) => return Err(Failure::Input("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let settings = Settings::load(common.config.as_deref(), common.fast, jobs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Run(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let artifacts = pool.install(|| cmd.execute(&settings))?;
    let written = write_artifacts(&common.out, &artifacts)?;
    let manifest = RunManifest {
        scenario: cmd.name(),
        version: env!("CARGO_PKG_VERSION"),
        parameters: &settings,
        outputs: written.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let path = write_manifest(&common.out, &manifest)?;
    for p in written.iter().chain(std::iter::once(&path)) {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("cavmem: invalid input: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("cavmem: {msg}");
            ExitCode::from(3)
        }
    }
}
