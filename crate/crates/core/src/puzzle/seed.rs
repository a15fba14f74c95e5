use crate::{Error, Result};

/// Seed length used when nothing else is configured.
pub const DEFAULT_SEED_BITS: u64 = 256;

/// Minimum seed length against a guessing adversary, alongside the
/// recommended default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedLengthBound {
    pub minimum: u64,
    pub recommended: u64,
}

/// Smallest `l` with `l > log2 C + log2(n - 1) - log2 epsilon - 1`.
///
/// An adversary with `C` machines tries `C (n - 1) / 2` seeds during the
/// `n - 1` sequential multiplications of a decryption, succeeding with
/// probability `C (n - 1) / 2^(l + 1)`; the bound keeps that below
/// `epsilon`.
pub fn seed_length_bound(c: f64, n: u64, epsilon: f64) -> Result<SeedLengthBound> {
    if !(c >= 1.0 && c.is_finite()) || n < 2 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::parameter("seed bound needs C >= 1, n >= 2 and 0 < epsilon < 1"));
    }
    let bound = c.log2() + ((n - 1) as f64).log2() - epsilon.log2() - 1.0;
    let minimum = (bound.floor() + 1.0).max(0.0) as u64;
    Ok(SeedLengthBound { minimum, recommended: DEFAULT_SEED_BITS })
}
