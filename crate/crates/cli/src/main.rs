//! `sgh`: heights of subgroups, zonoid volumes and the associated
//! certificates from the command line.

mod commands;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use subgroup_height::{Error, PrecisionContext};

use commands::Report;

#[derive(Parser, Debug)]
#[command(name = "sgh", version, about = "Certified heights of finitely generated subgroups")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    prec: u32,
    /// Largest precision reached by escalation.
    #[arg(long = "max-prec", global = true, default_value_t = 4096)]
    max_prec: u32,
    /// Seed for Monte Carlo estimates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long = "mc-samples", global = true, default_value_t = 1_000_000)]
    mc_samples: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Raise rational-exponent generators to the lcm of their denominators.
    #[arg(long = "clear-denominators", global = true)]
    clear_denominators: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weil height of one element.
    Height { input: String },
    /// Height of the subgroup spanned by independent generators.
    GroupHeight { input: String },
    /// Dependency lattice and a small kernel basis.
    Deps { input: String },
    /// LLL reduction of the columns of an integer matrix.
    Reduce { input: String },
    /// Successive minima of a simple system or a group.
    Minima { input: String },
    /// Zonotope volume from segments or from a simple system.
    ZonotopeVolume {
        input: String,
        /// Also report a hit-or-miss estimate.
        #[arg(long = "monte-carlo")]
        monte_carlo: bool,
    },
    /// Check one of the inequalities on an input.
    Certify {
        #[arg(value_enum)]
        target: Target,
        input: Option<String>,
        /// Primes of S for `cor2` over the rationals, e.g. `2,3`.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Run built-in examples with known answers.
    Selftest,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Cor2,
}

/// Inline JSON, `-` for standard input, or a file path.
fn load(input: &str) -> Result<Value, Error> {
    let t = input.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        input.to_string()
    } else if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidInput(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| Error::InvalidInput(format!("reading {input}: {e}")))?
    };
    subgroup_height::json::parse(&text)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        Error::Verification(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<Report, Error> {
    let o = &cli.opts;
    let ctx = PrecisionContext::new(o.prec, o.max_prec)?;
    match cli.command {
        Command::Height { input } => commands::height(&load(&input)?, &ctx),
        Command::GroupHeight { input } => commands::group_height(&load(&input)?, &ctx),
        Command::Deps { input } => commands::deps(&load(&input)?, o.clear_denominators, &ctx),
        Command::Reduce { input } => commands::reduce(&load(&input)?),
        Command::Minima { input } => commands::minima(&load(&input)?, &ctx),
        Command::ZonotopeVolume { input, monte_carlo } => {
            let mc = monte_carlo.then_some((o.mc_samples, o.seed));
            commands::zonotope_volume(&load(&input)?, mc, &ctx)
        }
        Command::Certify { target, input, primes } => {
            let value = match input {
                Some(i) => Some(load(&i)?),
                None => None,
            };
            commands::certify(target, value.as_ref(), &primes, o.clear_denominators, &ctx)
        }
        Command::Selftest => commands::selftest(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.opts.format;
    match run(cli) {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("sgh: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
