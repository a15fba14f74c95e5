use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use cubelock::bigmath::{Evaluation, Reduction};
use cubelock::chain::{decrypt_chained, encrypt_chained, ChainSpec};
use cubelock::puzzle::{decrypt_traced, encrypt_with, setup_with, Ciphertext, DecryptOptions, PuzzleParams};

use crate::error::CliError;
use crate::{read_text, write_bytes, Ctx};

/// Longest message accepted; anything larger must be split by the caller.
pub const MAX_MESSAGE_BYTES: usize = 1 << 20;

#[derive(Args, Debug)]
pub struct SetupArgs {
    /// Target delay in seconds.
    #[arg(long = "T", value_name = "SECONDS")]
    pub t_seconds: f64,
    /// Conjectured adversary speed in modular squarings per second.
    #[arg(long)]
    pub lambda: f64,
    /// Key file to write; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// Message text.
    #[arg(long, conflicts_with = "input")]
    pub message: Option<String>,
    /// File holding the message bytes.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Encrypt through this chain instead of a single cube.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Ciphertext file to write; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// Ciphertext file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Chain the ciphertext was produced with.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Plaintext file to write; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Window width; defaults to the configured value.
    #[arg(long)]
    pub window: Option<u32>,
    /// montgomery or barrett; defaults to the configured value.
    #[arg(long)]
    pub reduction: Option<String>,
    /// combined (shared squaring chain) or sequential (plain window method).
    #[arg(long, default_value = "combined")]
    pub evaluation: String,
}

pub fn load_key(path: &std::path::Path) -> Result<PuzzleParams, CliError> {
    Ok(PuzzleParams::from_key_file(&read_text(path)?)?)
}

fn emit(out: Option<&PathBuf>, data: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => write_bytes(path, data),
        None => std::io::stdout().write_all(data).map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

pub fn setup(ctx: &mut Ctx, args: &SetupArgs) -> Result<(), CliError> {
    let curated = ctx.config.curated_primes()?;
    let s = setup_with(args.t_seconds, args.lambda, &curated, &mut ctx.rng)?;
    emit(args.out.as_ref(), s.params.to_key_file().as_bytes())?;
    let source = match &s.curated {
        Some(c) => format!("curated {c}, deviation {:+} bits", s.deviation()),
        None => "generated".to_string(),
    };
    eprintln!(
        "target_bits={} prime_bits={} source={source} fingerprint={}",
        s.target_bits,
        s.params.p().bits(),
        hex::encode(s.params.fingerprint())
    );
    Ok(())
}

pub fn encrypt(ctx: &mut Ctx, args: &EncryptArgs) -> Result<(), CliError> {
    let params = load_key(&args.key)?;
    let message = match (&args.message, &args.input) {
        (Some(m), None) => m.as_bytes().to_vec(),
        (None, Some(path)) => std::fs::read(path).map_err(|e| CliError::io(path, e))?,
        _ => return Err(CliError::usage("give exactly one of --message or --in")),
    };
    if message.len() > MAX_MESSAGE_BYTES {
        return Err(cubelock::Error::Capacity(format!("messages are capped at {MAX_MESSAGE_BYTES} bytes")).into());
    }
    let seed_bits = ctx.config.seed_len;
    let ct = match &args.chain {
        Some(path) => {
            let spec = ChainSpec::from_file_string(&read_text(path)?)?;
            encrypt_chained(&message, &params, &spec, seed_bits, &mut ctx.rng)?
        }
        None => encrypt_with(&message, &params, seed_bits, &mut ctx.rng)?,
    };
    emit(args.out.as_ref(), ct.to_file_string().as_bytes())
}

pub fn decrypt_options(
    ctx: &Ctx,
    window: Option<u32>,
    reduction: Option<&str>,
    evaluation: &str,
) -> Result<DecryptOptions, CliError> {
    let strategy = match reduction {
        Some(r) => r.parse::<Reduction>().map_err(|e| CliError::usage(e.to_string()))?,
        None => ctx.config.reduction,
    };
    let evaluation = evaluation.parse::<Evaluation>().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(DecryptOptions { window: window.unwrap_or(ctx.config.window_width), strategy, evaluation })
}

pub fn decrypt(ctx: &mut Ctx, args: &DecryptArgs) -> Result<(), CliError> {
    let params = load_key(&args.key)?;
    let ct = Ciphertext::from_file_string(&read_text(&args.input)?)?;
    let options = decrypt_options(ctx, args.window, args.reduction.as_deref(), &args.evaluation)?;
    let start = Instant::now();
    let (message, trace) = match &args.chain {
        Some(path) => {
            let spec = ChainSpec::from_file_string(&read_text(path)?)?;
            decrypt_chained(&ct, &params, &spec, &options)?
        }
        None => decrypt_traced(&ct, &params, &options)?,
    };
    let elapsed = start.elapsed();
    emit(args.out.as_ref(), &message)?;
    eprintln!(
        "wall_time_ms={:.3} sequential_depth={} total_mults={} window={} reduction={} evaluation={}",
        elapsed.as_secs_f64() * 1e3,
        trace.sequential_depth,
        trace.total_mults,
        options.window,
        options.strategy,
        options.evaluation
    );
    Ok(())
}
