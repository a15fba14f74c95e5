mod attack;
mod bench;
mod chain;
mod config;
mod error;
mod keys;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::config::Config;
use crate::error::CliError;

/// Cubing time-lock puzzles: calibrate, set up keys, encrypt, decrypt,
/// chain, benchmark and run the toy-scale attack demos.
#[derive(Parser, Debug)]
#[command(name = "cubelock", version)]
struct Cli {
    /// Hex seed for every random choice; makes output reproducible apart
    /// from wall-time fields.
    #[arg(long, global = true, value_name = "HEX")]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure modular squarings per second and recommend prime sizes.
    Calibrate(bench::CalibrateArgs),
    /// Generate a key file for a delay of T seconds at speed lambda.
    Setup(keys::SetupArgs),
    /// Encrypt a message under a key file.
    Encrypt(keys::EncryptArgs),
    /// Decrypt a ciphertext file by sequential exponentiation.
    Decrypt(keys::DecryptArgs),
    /// Build, apply, invert or benchmark permutation chains.
    Chain(chain::ChainArgs),
    /// Toy-scale attack demonstrations.
    Attack(attack::AttackArgs),
    /// Encryption and decryption timing sweep.
    Bench(bench::BenchArgs),
}

/// Shared state handed to every command.
pub struct Ctx {
    pub config: Config,
    pub rng: ChaCha20Rng,
}

fn seeded_rng(seed: Option<&str>) -> Result<ChaCha20Rng, CliError> {
    let Some(seed) = seed else {
        return Ok(ChaCha20Rng::from_entropy());
    };
    let even = if seed.len() % 2 == 1 { format!("0{seed}") } else { seed.to_string() };
    let bytes = hex::decode(even).map_err(|e| CliError::usage(format!("--seed: {e}")))?;
    if bytes.len() > 32 {
        return Err(CliError::usage("--seed takes at most 32 bytes (64 hex digits)"));
    }
    let mut key = [0u8; 32];
    key[32 - bytes.len()..].copy_from_slice(&bytes);
    Ok(ChaCha20Rng::from_seed(key))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_bytes(path: &Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::io(path, e))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut ctx = Ctx { config: Config::from_env()?, rng: seeded_rng(cli.seed.as_deref())? };
    match cli.command {
        Command::Calibrate(args) => bench::calibrate(&mut ctx, &args),
        Command::Setup(args) => keys::setup(&mut ctx, &args),
        Command::Encrypt(args) => keys::encrypt(&mut ctx, &args),
        Command::Decrypt(args) => keys::decrypt(&mut ctx, &args),
        Command::Chain(args) => chain::run(&mut ctx, &args),
        Command::Attack(args) => attack::run(&mut ctx, &args),
        Command::Bench(args) => bench::bench(&mut ctx, &args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cubelock: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
