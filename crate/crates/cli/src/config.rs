use std::path::{Path, PathBuf};

use cubelock::bigmath::{Reduction, DEFAULT_WINDOW};
use cubelock::puzzle::{CuratedPrime, BUNDLED_PRIMES, DEFAULT_SEED_BITS};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "CUBELOCK_CONFIG";
const MAX_WINDOW: u32 = 16;
const MAX_SEED_BITS: u64 = 1 << 16;

/// Tunables shared by every command, read from the file named by
/// `CUBELOCK_CONFIG` as `key=value` lines. `#` starts a comment.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub seed_len: u64,
    pub window_width: u32,
    pub reduction: Reduction,
    /// `None` means one round per bit of the prime.
    pub shuffle_rounds: Option<u32>,
    pub curated_primes_path: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed_len: DEFAULT_SEED_BITS,
            window_width: DEFAULT_WINDOW,
            reduction: Reduction::Montgomery,
            shuffle_rounds: None,
            curated_primes_path: None,
        }
    }
}

impl Config {
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Config::default()),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| CliError::config(line, format!("expected key=value, found `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| CliError::config(line, format!("invalid {key} `{value}`: {what}"));
            match key {
                "seed_len" => {
                    config.seed_len = value.parse().map_err(|_| bad("not an integer"))?;
                    if config.seed_len > MAX_SEED_BITS {
                        return Err(bad("above 65536"));
                    }
                }
                "window_width" => {
                    config.window_width = value.parse().map_err(|_| bad("not an integer"))?;
                    if !(1..=MAX_WINDOW).contains(&config.window_width) {
                        return Err(bad("must be in 1..=16"));
                    }
                }
                "reduction_strategy" => {
                    config.reduction = value.parse().map_err(|_| bad("expected montgomery or barrett"))?;
                }
                "shuffle_rounds" => {
                    let rounds: u32 = value.parse().map_err(|_| bad("not an integer"))?;
                    if rounds == 0 {
                        return Err(bad("must be positive"));
                    }
                    config.shuffle_rounds = Some(rounds);
                }
                "curated_primes_path" => config.curated_primes_path = Some(PathBuf::from(value)),
                _ => return Err(CliError::config(line, format!("unknown key `{key}`"))),
            }
        }
        Ok(config)
    }

    /// The curated list from `curated_primes_path`, else the bundled one.
    pub fn curated_primes(&self) -> Result<Vec<CuratedPrime>, CliError> {
        let Some(path) = &self.curated_primes_path else {
            return Ok(BUNDLED_PRIMES.to_vec());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut primes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let prime =
                body.parse().map_err(|e: cubelock::Error| CliError::config(i + 1, e.to_string()).in_file(path))?;
            primes.push(prime);
        }
        Ok(primes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
        let c =
            Config::parse("# tuned\nseed_len = 128\nwindow_width=4\nreduction_strategy=barrett\nshuffle_rounds=64\n")
                .unwrap();
        assert_eq!((c.seed_len, c.window_width, c.reduction, c.shuffle_rounds), (128, 4, Reduction::Barrett, Some(64)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Config::parse("seed_len=1\n\nwindow_width=0\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(Config::parse("colour=blue").is_err());
        assert!(Config::parse("seed_len").is_err());
    }
}
