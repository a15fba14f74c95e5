use std::path::PathBuf;

use clap::{Args, Subcommand};
use cubelock::bigmath::Natural;
use cubelock::chain::{chain_apply, chain_bench, chain_invert_with, ChainSpec, PermKind};
use cubelock::puzzle::{parse_hex, reference_prime};
use serde_json::json;

use crate::error::CliError;
use crate::keys::{decrypt_options, load_key};
use crate::{read_text, write_bytes, Ctx};

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(subcommand)]
    pub command: ChainCommand,
}

#[derive(Subcommand, Debug)]
pub enum ChainCommand {
    /// Draw fresh keys for a list of stages and write a chain file.
    Build {
        #[arg(long)]
        key: PathBuf,
        /// Comma-separated `kind[:rounds]` list, applied innermost last.
        #[arg(long, value_delimiter = ',', required = true)]
        stages: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the chain on a hex value.
    Apply {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Invert the chain on a hex value by sequential exponentiation.
    Invert {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        window: Option<u32>,
        #[arg(long)]
        reduction: Option<String>,
        #[arg(long, default_value = "combined")]
        evaluation: String,
    },
    /// Median timings of cubing against the permutation families.
    Bench {
        /// Prime from a key file.
        #[arg(long, conflicts_with = "bits")]
        key: Option<PathBuf>,
        /// Bundled reference prime size (2048 or 4096).
        #[arg(long)]
        bits: Option<u64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Shuffle rounds; defaults to the configured value, else one per bit.
        #[arg(long)]
        rounds: Option<u32>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_stage(text: &str, default_rounds: Option<u32>) -> Result<(PermKind, Option<u32>), CliError> {
    let (name, rounds) = match text.split_once(':') {
        Some((name, r)) => {
            let r: u32 = r.parse().map_err(|_| CliError::usage(format!("bad round count in `{text}`")))?;
            (name, Some(r))
        }
        None => (text, None),
    };
    let kind: PermKind = name.trim().parse().map_err(|e: cubelock::Error| CliError::usage(e.to_string()))?;
    if rounds.is_some() && !kind.is_shuffle() {
        return Err(CliError::usage(format!("{kind} takes no round count")));
    }
    Ok((kind, rounds.or(if kind.is_shuffle() { default_rounds } else { None })))
}

fn load_chain(path: &std::path::Path) -> Result<ChainSpec, CliError> {
    Ok(ChainSpec::from_file_string(&read_text(path)?)?)
}

fn parse_input(text: &str) -> Result<Natural, CliError> {
    let digits = text.trim().trim_start_matches("0x");
    parse_hex(digits, 0).map_err(|_| CliError::usage(format!("--input must be hex, found `{text}`")))
}

pub fn run(ctx: &mut Ctx, args: &ChainArgs) -> Result<(), CliError> {
    match &args.command {
        ChainCommand::Build { key, stages, out } => {
            let params = load_key(key)?;
            let kinds =
                stages.iter().map(|s| parse_stage(s, ctx.config.shuffle_rounds)).collect::<Result<Vec<_>, _>>()?;
            let spec = ChainSpec::random(params.p(), &kinds, &mut ctx.rng)?;
            let text = spec.to_file_string();
            match out {
                Some(path) => write_bytes(path, text.as_bytes())?,
                None => print!("{text}"),
            }
            eprintln!("chain_id={} stages={} pair={}", spec.id_hex(), spec.stages().len(), spec.is_pair());
        }
        ChainCommand::Apply { chain, input } => {
            let spec = load_chain(chain)?;
            let y = chain_apply(&spec, &parse_input(input)?)?;
            println!("{y:x}");
        }
        ChainCommand::Invert { chain, input, window, reduction, evaluation } => {
            let spec = load_chain(chain)?;
            let options = decrypt_options(ctx, *window, reduction.as_deref(), evaluation)?;
            let (x, trace) = chain_invert_with(&spec, &parse_input(input)?, &options)?;
            println!("{x:x}");
            eprintln!("sequential_depth={} total_mults={}", trace.sequential_depth, trace.total_mults);
        }
        ChainCommand::Bench { key, bits, trials, rounds, json } => {
            let p = match (key, bits) {
                (Some(path), None) => load_key(path)?.p().clone(),
                (None, Some(b)) => reference_prime(*b)
                    .ok_or_else(|| CliError::usage(format!("no bundled reference prime of {b} bits; use --key")))?,
                _ => return Err(CliError::usage("give exactly one of --key or --bits")),
            };
            let report = chain_bench(&p, *trials, rounds.or(ctx.config.shuffle_rounds), &mut ctx.rng)?;
            if *json {
                let medians: serde_json::Map<String, serde_json::Value> =
                    report.medians.iter().map(|(name, d)| (name.to_string(), json!(d.as_secs_f64() * 1e9))).collect();
                let doc = json!({
                    "bits": report.bits,
                    "rounds": report.rounds,
                    "trials": report.trials,
                    "median_ns": medians,
                });
                println!("{doc}");
            } else {
                println!("{report}");
            }
        }
    }
    Ok(())
}
