use num_bigint::RandBigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::bigmath::{to_fixed_bytes, Natural};
use crate::{Error, Result};

const LENGTH_BITS: u64 = 32;

/// Random seed of a fixed bit length mixed into every padded value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    value: Natural,
    bits: u64,
}

impl Seed {
    pub fn new(value: Natural, bits: u64) -> Result<Self> {
        if value.bits() > bits {
            return Err(Error::parameter(format!("seed does not fit in {bits} bits")));
        }
        Ok(Seed { value, bits })
    }

    pub fn zero(bits: u64) -> Self {
        Seed { value: Natural::zero(), bits }
    }

    pub fn random<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Self {
        Seed { value: rng.gen_biguint(bits), bits }
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }
}

/// Deterministic filler bits derived from the seed.
fn fill(seed: &Seed, bits: u64) -> Natural {
    let mut hasher = Sha256::new();
    hasher.update(b"cubelock-fill");
    hasher.update(seed.bits.to_be_bytes());
    hasher.update(to_fixed_bytes(&seed.value, seed.bits.div_ceil(8) as usize));
    let mut rng = ChaCha20Rng::from_seed(hasher.finalize().into());
    rng.gen_biguint(bits)
}

fn low_bits(x: &Natural, start: u64, len: u64) -> Natural {
    (x >> start) & ((Natural::one() << len) - 1u32)
}

/// Embeds `message` into an `n`-bit modulus's range `[2^(n-2), 2^(n-1))`.
///
/// From the least significant bit up: the byte length as a 32-bit number,
/// the message as a big-endian integer, the seed, filler derived from the
/// seed, and a marker bit at position `n - 2`.
pub fn pad(message: &[u8], seed: &Seed, n: u64) -> Result<Natural> {
    let msg_bits = 8 * message.len() as u64;
    let used = LENGTH_BITS + msg_bits + seed.bits + 1;
    if message.len() > u32::MAX as usize || n < 2 || used > n - 2 {
        return Err(Error::capacity(format!(
            "{} message bytes with a {}-bit seed need {} bits below the marker, but an {n}-bit prime leaves {}",
            message.len(),
            seed.bits,
            used,
            n.saturating_sub(2)
        )));
    }
    let fill_start = LENGTH_BITS + msg_bits + seed.bits;
    let mut x = Natural::one() << (n - 2);
    x |= fill(seed, n - 2 - fill_start) << fill_start;
    x |= &seed.value << (LENGTH_BITS + msg_bits);
    x |= Natural::from_bytes_be(message) << LENGTH_BITS;
    x |= Natural::from(message.len() as u64);
    Ok(x)
}

/// Extracts the message from a padded value without knowing the seed.
pub fn unpad(x: &Natural, n: u64) -> Result<Vec<u8>> {
    let malformed = |msg: &str| Error::Integrity(format!("malformed padding: {msg}"));
    if n < 3 || x.bits() != n - 1 {
        return Err(malformed("marker bit missing"));
    }
    let len = low_bits(x, 0, LENGTH_BITS).to_u64().expect("32-bit field");
    if LENGTH_BITS + 8 * len + 1 > n - 2 {
        return Err(malformed("declared length exceeds the prime's capacity"));
    }
    let body = low_bits(x, LENGTH_BITS, 8 * len);
    Ok(to_fixed_bytes(&body, len as usize))
}

/// [`unpad`] plus a check that the filler matches the embedded
/// `seed_bits`-bit seed.
pub fn unpad_verified(x: &Natural, n: u64, seed_bits: u64) -> Result<Vec<u8>> {
    let message = unpad(x, n)?;
    let seed_start = LENGTH_BITS + 8 * message.len() as u64;
    let fill_start = seed_start + seed_bits;
    if fill_start + 1 > n - 2 {
        return Err(Error::Integrity("malformed padding: seed overruns the marker".into()));
    }
    let seed = Seed { value: low_bits(x, seed_start, seed_bits), bits: seed_bits };
    if low_bits(x, fill_start, n - 2 - fill_start) != fill(&seed, n - 2 - fill_start) {
        return Err(Error::Integrity("padding filler does not match its seed".into()));
    }
    Ok(message)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn empty_message_zero_seed() {
        let x = pad(&[], &Seed::zero(16), 64).unwrap();
        assert!(x.bit(62));
        assert_eq!(x.bits(), 63);
        assert!(low_bits(&x, 0, 32).is_zero());
        assert_eq!(unpad(&x, 64).unwrap(), Vec::<u8>::new());
        assert_eq!(unpad_verified(&x, 64, 16).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn capacity_boundary() {
        // 32 + 8 * 2 + 12 + 1 = 61 = n - 2 fits; one more seed bit does not.
        assert!(pad(b"hi", &Seed::zero(12), 63).is_ok());
        assert!(matches!(pad(b"hi", &Seed::zero(13), 63), Err(Error::Capacity(_))));
    }

    #[test]
    fn leading_zero_bytes_survive() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let msg = [0u8, 0, 7, 0];
        let x = pad(&msg, &Seed::random(40, &mut rng), 200).unwrap();
        assert_eq!(unpad(&x, 200).unwrap(), msg);
    }

    #[test]
    fn tampering_is_detected() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let x = pad(b"abc", &Seed::random(40, &mut rng), 200).unwrap();
        let mut flipped = x.clone();
        flipped.set_bit(150, !x.bit(150));
        assert!(unpad(&flipped, 200).is_ok());
        assert!(matches!(unpad_verified(&flipped, 200, 40), Err(Error::Integrity(_))));
        assert!(unpad(&(x.clone() << 1u32), 200).is_err());
    }
}
