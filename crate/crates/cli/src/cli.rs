//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};
use crate::input::InputSelector;
use crate::report::{self, InputPair};
use crate::svg;
use crate::sweep::{run_sweep, to_csv, Mode, SweepConfig};

#[derive(Debug, Parser)]
#[command(
    name = "teleflow",
    version,
    about = "Stage-resolved teleportation and non-Markovianity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Qudit sweep over the Werner weight p in [0, 1].
    DvSweep {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// ket0, maximally_mixed, random, or a path to a matrix file.
        #[arg(long, default_value = "ket0")]
        input: InputSelector,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian sweep over the resource squeezing r.
    CvSweep {
        #[arg(long, default_value_t = 3.0)]
        g2: f64,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Principal state after each stage.
    Stages {
        #[arg(long, value_enum, default_value = "dv")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Werner weight of the resource (dv).
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Resource squeezing (cv).
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 3.0)]
        g2: f64,
        #[arg(long, default_value = "ket0")]
        input: InputSelector,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Divisibility of the prefix channels.
    Divisibility {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace distance between two evolving inputs.
    Blp {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, value_enum, default_value = "conjugate")]
        pair: InputPair,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG chart next to the CSV.
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dv,
    Cv,
}

impl Command {
    pub fn sweep_config(&self) -> Option<SweepConfig> {
        match self {
            Command::DvSweep {
                d,
                steps,
                input,
                output,
            } => Some(SweepConfig {
                input: input.clone(),
                out: output.out.clone(),
                emit_svg: output.svg,
                seed: output.seed,
                ..SweepConfig::dv(*d, *steps)
            }),
            Command::CvSweep {
                g2,
                r_max,
                steps,
                output,
            } => Some(SweepConfig {
                out: output.out.clone(),
                emit_svg: output.svg,
                seed: output.seed,
                ..SweepConfig::cv(*g2, *r_max, *steps)
            }),
            _ => None,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("stdout", e)),
    }
}

fn sweep(cfg: &SweepConfig) -> CliResult<()> {
    let rows = run_sweep(cfg)?;
    emit(&to_csv(&rows), cfg.out.as_deref())?;
    if cfg.emit_svg {
        // validate() guarantees an output path here.
        let path = cfg.out.as_ref().unwrap().with_extension("svg");
        let label = if cfg.mode == Mode::Dv { "p" } else { "r" };
        emit(&svg::render(&rows, label), Some(&path))?;
    }
    Ok(())
}

pub fn execute(command: &Command) -> CliResult<()> {
    if let Some(cfg) = command.sweep_config() {
        return sweep(&cfg);
    }
    match command {
        Command::Stages {
            mode,
            d,
            p,
            r,
            g2,
            input,
            out,
            seed,
        } => {
            let text = match mode {
                ModeArg::Dv => report::dv_stages(*d, *p, input, *seed)?,
                ModeArg::Cv => report::cv_stages(*r, *g2)?,
            };
            emit(&text, out.as_deref())
        }
        Command::Divisibility { d, p, out } => emit(&report::divisibility(*d, *p)?, out.as_deref()),
        Command::Blp { d, p, pair, out } => emit(&report::blp(*d, *p, *pair)?, out.as_deref()),
        Command::DvSweep { .. } | Command::CvSweep { .. } => unreachable!(),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
