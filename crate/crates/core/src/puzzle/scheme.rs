use num_traits::Zero;
use rand::Rng;

use super::padding::{pad, unpad_verified, Seed};
use super::params::PuzzleParams;
use super::seed::DEFAULT_SEED_BITS;
use crate::bigmath::{DepthTrace, Evaluation, Natural, Reduction, DEFAULT_WINDOW};
use crate::{Error, Result};

/// An encrypted message bound to the prime it was made for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub c: Natural,
    pub fingerprint: [u8; 16],
    pub seed_bits: u64,
    /// Identifier of the permutation chain applied on top of cubing, if any.
    pub chain: Option<[u8; 16]>,
}

/// How the receiver evaluates `c^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecryptOptions {
    pub window: u32,
    pub strategy: Reduction,
    pub evaluation: Evaluation,
}

impl Default for DecryptOptions {
    fn default() -> Self {
        DecryptOptions { window: DEFAULT_WINDOW, strategy: Reduction::Montgomery, evaluation: Evaluation::Combined }
    }
}

/// `x^3 mod p` as one squaring followed by one multiplication.
pub fn cube(x: &Natural, params: &PuzzleParams) -> (Natural, DepthTrace) {
    let ctx = params.barrett();
    let sq = ctx.mul(x, x);
    (ctx.mul(&sq, x), DepthTrace { sequential_depth: 2, total_mults: 2 })
}

/// Encrypts with a fresh seed of the default length.
pub fn encrypt<R: Rng + ?Sized>(message: &[u8], params: &PuzzleParams, rng: &mut R) -> Result<Ciphertext> {
    encrypt_with(message, params, DEFAULT_SEED_BITS, rng)
}

/// Encrypts with a fresh `seed_bits`-bit seed.
pub fn encrypt_with<R: Rng + ?Sized>(
    message: &[u8],
    params: &PuzzleParams,
    seed_bits: u64,
    rng: &mut R,
) -> Result<Ciphertext> {
    let x = pad(message, &Seed::random(seed_bits, rng), params.n())?;
    let mut ct = encrypt_padded(&x, params)?;
    ct.seed_bits = seed_bits;
    Ok(ct)
}

/// Cubes an already padded value. Skips the padding layer; the result
/// carries `seed_bits = 0`.
pub fn encrypt_padded(x: &Natural, params: &PuzzleParams) -> Result<Ciphertext> {
    if x >= params.p() {
        return Err(Error::capacity("padded value must be below p"));
    }
    Ok(Ciphertext { c: cube(x, params).0, fingerprint: params.fingerprint(), seed_bits: 0, chain: None })
}

/// Decrypts with the default options.
pub fn decrypt(ct: &Ciphertext, params: &PuzzleParams) -> Result<Vec<u8>> {
    Ok(decrypt_traced(ct, params, &DecryptOptions::default())?.0)
}

/// Decrypts and reports the multiplication trace of the exponentiation.
pub fn decrypt_traced(
    ct: &Ciphertext,
    params: &PuzzleParams,
    options: &DecryptOptions,
) -> Result<(Vec<u8>, DepthTrace)> {
    if ct.fingerprint != params.fingerprint() {
        return Err(Error::WrongKey("ciphertext was made for a different prime".into()));
    }
    if ct.chain.is_some() {
        return Err(Error::parameter("chained ciphertexts must be opened through their chain"));
    }
    if ct.c.is_zero() || &ct.c >= params.p() {
        return Err(Error::Integrity("ciphertext value is outside Z_p*".into()));
    }
    let arith = params.arith(options.strategy);
    let (x, trace) = arith.pow(&ct.c, params.b(), options.window, options.evaluation)?;
    Ok((unpad_verified(&x, params.n(), ct.seed_bits)?, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::gen_safe_prime;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn p23() -> PuzzleParams {
        PuzzleParams::from_prime(Natural::from(23u32), 1.0, 1.0).unwrap()
    }

    #[test]
    fn forced_value_at_23() {
        let params = p23();
        let ct = encrypt_padded(&Natural::from(5u32), &params).unwrap();
        assert_eq!(ct.c, Natural::from(10u32));
        let arith = params.arith(Reduction::Montgomery);
        let (x, trace) = arith.pow(&ct.c, params.b(), 2, Evaluation::Sequential).unwrap();
        assert_eq!(x, Natural::from(5u32));
        assert!(trace.sequential_depth >= 3);
    }

    #[test]
    fn round_trip_and_wrong_key() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let params = PuzzleParams::from_prime(gen_safe_prime(256, &mut rng).unwrap(), 1.0, 1.0).unwrap();
        let ct = encrypt_with(b"hello", &params, 64, &mut rng).unwrap();
        assert_eq!(decrypt(&ct, &params).unwrap(), b"hello");
        for evaluation in [Evaluation::Sequential, Evaluation::Combined] {
            let opts = DecryptOptions { window: 4, strategy: Reduction::Barrett, evaluation };
            assert_eq!(decrypt_traced(&ct, &params, &opts).unwrap().0, b"hello");
        }
        let other = PuzzleParams::from_prime(gen_safe_prime(256, &mut rng).unwrap(), 1.0, 1.0).unwrap();
        assert!(matches!(decrypt(&ct, &other), Err(Error::WrongKey(_))));
        let mut garbled = ct.clone();
        garbled.c += 1u32;
        assert!(matches!(decrypt(&garbled, &params), Err(Error::Integrity(_))));
    }
}
