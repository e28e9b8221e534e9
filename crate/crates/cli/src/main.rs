mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chainsemi::{Error, Limits};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "chainsemi",
    version,
    about = "Oriented order-decreasing partial transformations of a finite chain"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Largest chain size for brute-force enumeration (overrides CHAINSEMI_CAP).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..=15))]
    cap: Option<u16>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one map.
    Classify {
        #[arg(long)]
        map: String,
    },
    /// Enumerate a generator family.
    Family {
        #[arg(long)]
        n: usize,
        /// Image bound; defaults to n.
        #[arg(long)]
        r: Option<usize>,
        /// E_r, F_r, G_n, H_n^r, EI_r, FI_r, GI_r, GIc_k, CLAIMED_PORD or CLAIMED_IORD.
        #[arg(long)]
        label: String,
        /// Image size for GIc_k.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Count by enumeration and compare with the closed form.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long)]
        r: Option<usize>,
        /// Class for `--quantity class-size`, e.g. PORD or IORD*.
        #[arg(long, default_value = "PORD")]
        class: String,
    },
    /// Table of |H_n^r| over the small-r regime (CSV by default).
    HnTable {
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Close a set of generators under composition.
    Closure {
        /// File with one map per line; `-` reads stdin.
        #[arg(long, conflicts_with = "maps")]
        gens: Option<PathBuf>,
        /// Maps given inline, separated by `;`.
        #[arg(long)]
        maps: Option<String>,
        /// Compare the closure with a class, e.g. `PORD(5,4)`.
        #[arg(long)]
        target: Option<String>,
        /// Include the elements in the report.
        #[arg(long)]
        elements: bool,
    },
    /// Elements of a class that are not products of two others in it.
    Undecomposables {
        /// A class spec such as `IORD(5,4)`.
        #[arg(long)]
        class: String,
    },
    /// List or check the maximal subsemigroups.
    Maximal {
        #[arg(long, value_parser = parse_side)]
        side: chainsemi::Side,
        #[arg(long)]
        n: usize,
        /// Image bound; defaults to n (the monoid).
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        mode: MaximalMode,
    },
    /// Decompose a map as beta·gamma·delta.
    Factorize {
        #[arg(long)]
        map: String,
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = parse_side, default_value = "pord")]
        side: chainsemi::Side,
    },
    /// Run the acceptance checks.
    VerifyAll {
        /// Skip instances with a larger chain size.
        #[arg(long)]
        n: Option<usize>,
        /// Run only these criteria (1-12).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        criterion: Vec<u8>,
        #[arg(long, hide = true)]
        inject_failure: Option<usize>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MaximalMode {
    #[arg(long)]
    list: bool,
    #[arg(long)]
    verify_all: bool,
    /// Parameters `p,q` or `p,q,s` of the descriptors to check.
    #[arg(long, value_name = "P,Q[,S]")]
    verify: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Quantity {
    Idempotents,
    MaxReversingImage,
    ClassSize,
}

fn parse_side(s: &str) -> Result<chainsemi::Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Inconsistency(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(w) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w.into())
            .build_global()?;
    }
    let mut limits = Limits::from_env()?;
    if let Some(cap) = cli.global.cap {
        limits = limits.with_cap(cap.into());
    }
    let report = commands::dispatch(cli.command, &limits)?;
    let format = cli.global.format.unwrap_or(report.default_format);
    report.emit(format, cli.global.output.as_deref())?;
    Ok(report.ok)
}
