use std::sync::OnceLock;

use num_traits::ToPrimitive;
use rand::Rng;
use sha2::{Digest, Sha256};

use super::curated::{CuratedPrime, BUNDLED_PRIMES, CURATED_THRESHOLD, MIN_SIZE_BITS};
use crate::bigmath::{gen_safe_prime, is_safe_prime, BarrettCtx, ModArith, Natural, Reduction};
use crate::{Error, Result};

/// Public parameters of one delay: the safe prime, the decryption exponent,
/// the target delay and the squaring speed it was sized for.
///
/// `lambda` models the squarings per second a resourceful adversary can
/// reach, so `floor(log2 p) = lambda * t_seconds` sizes the delay against
/// that adversary.
#[derive(Debug, Clone)]
pub struct PuzzleParams {
    p: Natural,
    b: Natural,
    t_seconds: f64,
    lambda: f64,
    barrett: OnceLock<BarrettCtx>,
    arith: [OnceLock<ModArith>; 2],
}

impl PartialEq for PuzzleParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t_seconds == other.t_seconds && self.lambda == other.lambda
    }
}

impl PuzzleParams {
    /// Parameters over a caller-supplied prime.
    ///
    /// Checks the shape that cubing needs (odd, `p = 2 mod 3`, and for a
    /// 64-bit prime the exact safe-prime test). Use [`PuzzleParams::validate`]
    /// for the full probabilistic check on large primes.
    pub fn from_prime(p: Natural, t_seconds: f64, lambda: f64) -> Result<Self> {
        if !(t_seconds.is_finite() && t_seconds >= 0.0 && lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::parameter("T and lambda must be finite and nonnegative"));
        }
        if p < Natural::from(5u32) || !p.bit(0) || &p % 3u32 != Natural::from(2u32) {
            return Err(Error::parameter("p must be an odd prime congruent to 2 mod 3"));
        }
        if let Some(small) = p.to_u64() {
            if !is_safe_prime(&Natural::from(small)) {
                return Err(Error::parameter(format!("{small} is not a safe prime")));
            }
        } else if &p % 12u32 != Natural::from(11u32) {
            return Err(Error::parameter("a large safe prime is congruent to 11 mod 12"));
        }
        let b = (((&p - 1u32) << 1u32) + 1u32) / 3u32;
        Ok(PuzzleParams {
            p,
            b,
            t_seconds,
            lambda,
            barrett: OnceLock::new(),
            arith: [OnceLock::new(), OnceLock::new()],
        })
    }

    /// Runs the probabilistic safe-prime test on `p`.
    pub fn validate(&self) -> Result<()> {
        if is_safe_prime(&self.p) {
            Ok(())
        } else {
            Err(Error::parameter("p is not a safe prime"))
        }
    }

    pub fn p(&self) -> &Natural {
        &self.p
    }

    pub fn b(&self) -> &Natural {
        &self.b
    }

    pub fn t_seconds(&self) -> f64 {
        self.t_seconds
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Bit length of `p`.
    pub fn n(&self) -> u64 {
        self.p.bits()
    }

    pub fn fingerprint(&self) -> [u8; 16] {
        fingerprint(&self.p)
    }

    pub(crate) fn barrett(&self) -> &BarrettCtx {
        self.barrett.get_or_init(|| BarrettCtx::for_products(&self.p).expect("p > 1"))
    }

    /// Cached modular arithmetic for `p` under `strategy`.
    pub fn arith(&self, strategy: Reduction) -> &ModArith {
        let slot = match strategy {
            Reduction::Barrett => 0,
            Reduction::Montgomery => 1,
        };
        self.arith[slot].get_or_init(|| ModArith::new(&self.p, strategy).expect("p is odd and > 1"))
    }
}

/// First 16 bytes of SHA-256 over the big-endian bytes of `p`.
pub fn fingerprint(p: &Natural) -> [u8; 16] {
    let digest = Sha256::digest(p.to_bytes_be());
    digest[..16].try_into().expect("digest is 32 bytes")
}

/// Outcome of [`setup`]: the parameters and how the prime was chosen.
#[derive(Debug, Clone)]
pub struct Setup {
    pub params: PuzzleParams,
    /// Requested `floor(log2 p)`, i.e. `floor(lambda * T)`.
    pub target_bits: u64,
    /// Curated prime used instead of generation, if any.
    pub curated: Option<CuratedPrime>,
}

impl Setup {
    /// `floor(log2 p) - target_bits`; nonzero only on the curated path.
    pub fn deviation(&self) -> i64 {
        (self.params.n() - 1) as i64 - self.target_bits as i64
    }
}

/// Chooses a safe prime with `floor(log2 p) = floor(lambda * T)`, using the
/// bundled curated primes above [`CURATED_THRESHOLD`] bits.
pub fn setup<R: Rng + ?Sized>(t_seconds: f64, lambda: f64, rng: &mut R) -> Result<Setup> {
    setup_with(t_seconds, lambda, &BUNDLED_PRIMES, rng)
}

/// [`setup`] with an explicit curated list.
pub fn setup_with<R: Rng + ?Sized>(
    t_seconds: f64,
    lambda: f64,
    curated: &[CuratedPrime],
    rng: &mut R,
) -> Result<Setup> {
    let product = t_seconds * lambda;
    if !product.is_finite() || product < MIN_SIZE_BITS as f64 {
        return Err(Error::parameter(format!(
            "lambda * T = {product} is below the minimum prime size of {MIN_SIZE_BITS} bits"
        )));
    }
    let target_bits = product.floor() as u64;
    if target_bits > CURATED_THRESHOLD {
        let pick = CuratedPrime::nearest(curated, target_bits)
            .ok_or_else(|| Error::parameter("no curated primes available for this size"))?;
        let params = PuzzleParams::from_prime(pick.value(), t_seconds, lambda)?;
        return Ok(Setup { params, target_bits, curated: Some(pick) });
    }
    let p = gen_safe_prime(target_bits + 1, rng)?;
    let params = PuzzleParams::from_prime(p, t_seconds, lambda)?;
    Ok(Setup { params, target_bits, curated: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn exponent_for_23() {
        let params = PuzzleParams::from_prime(Natural::from(23u32), 1.0, 1.0).unwrap();
        assert_eq!(params.b(), &Natural::from(15u32));
        assert_eq!((params.b() * 3u32) % 22u32, Natural::from(1u32));
        assert_eq!(params.n(), 5);
    }

    #[test]
    fn rejects_unsuitable_primes() {
        for p in [7u32, 13, 17, 21, 24] {
            assert!(PuzzleParams::from_prime(Natural::from(p), 1.0, 1.0).is_err(), "{p}");
        }
        assert!(PuzzleParams::from_prime(Natural::from(23u32), f64::NAN, 1.0).is_err());
    }

    #[test]
    fn setup_sizes() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let s = setup(1.0, 100.0, &mut rng).unwrap();
        assert_eq!(s.params.n(), 101);
        assert_eq!(s.deviation(), 0);
        assert!(s.params.validate().is_ok());
        assert!(matches!(setup(1.0, 63.0, &mut rng), Err(Error::Parameter(_))));
    }

    #[test]
    fn curated_path() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let s = setup(19.0, 3686.0, &mut rng).unwrap();
        assert_eq!(s.curated, Some(BUNDLED_PRIMES[0]));
        assert_eq!(s.params.n(), 70034);
        assert_eq!(s.target_bits, 70034);
        assert_eq!(s.deviation(), -1);
    }
}
