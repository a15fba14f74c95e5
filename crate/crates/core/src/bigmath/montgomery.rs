use num_traits::{One, Zero};

use super::Natural;
use crate::{Error, Result};

/// Precomputed state for Montgomery reduction with `R = 2^r_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MontCtx {
    modulus: Natural,
    r_bits: u64,
    r: Natural,
    mask: Natural,
    neg_inv: Natural,
    r_squared: Natural,
    r_mod: Natural,
}

impl MontCtx {
    /// Context with `R` rounded up to a whole number of 64-bit limbs.
    pub fn new(modulus: &Natural) -> Result<Self> {
        let r_bits = modulus.bits().div_ceil(64).max(1) * 64;
        Self::with_r_bits(modulus, r_bits)
    }

    /// Context with an explicit `R = 2^r_bits`, which must exceed the modulus.
    pub fn with_r_bits(modulus: &Natural, r_bits: u64) -> Result<Self> {
        if modulus <= &Natural::one() || !modulus.bit(0) {
            return Err(Error::parameter("Montgomery reduction needs an odd modulus above 1"));
        }
        if r_bits < modulus.bits() {
            return Err(Error::parameter("Montgomery radix must exceed the modulus"));
        }
        let r = Natural::one() << r_bits;
        let mask = &r - 1u32;
        // Newton iteration for modulus^-1 mod 2^r_bits; correct to one bit at the start.
        let mut inv = Natural::one();
        let mut precision = 1;
        while precision < r_bits {
            let t = (modulus * &inv) & &mask;
            inv = (&inv * (&r + 2u32 - t)) & &mask;
            precision *= 2;
        }
        let neg_inv = (&r - inv) & &mask;
        let r_mod = &r % modulus;
        let r_squared = (&r_mod * &r_mod) % modulus;
        Ok(MontCtx { modulus: modulus.clone(), r_bits, r, mask, neg_inv, r_squared, r_mod })
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub fn r(&self) -> &Natural {
        &self.r
    }

    pub fn r_bits(&self) -> u64 {
        self.r_bits
    }

    /// `-modulus^-1 mod R`.
    pub fn neg_inv(&self) -> &Natural {
        &self.neg_inv
    }

    /// `a * R^-1 mod modulus` for `a < R * modulus`.
    pub fn redc(&self, a: &Natural) -> Result<Natural> {
        if a >= &(&self.r * &self.modulus) {
            return Err(Error::capacity("REDC input must be below R times the modulus"));
        }
        Ok(self.redc_unchecked(a))
    }

    pub(crate) fn redc_unchecked(&self, a: &Natural) -> Natural {
        let m = ((a & &self.mask) * &self.neg_inv) & &self.mask;
        let mut t = (a + m * &self.modulus) >> self.r_bits;
        if t >= self.modulus {
            t -= &self.modulus;
        }
        t
    }

    /// Montgomery form `x * R mod modulus`.
    pub fn to_mont(&self, x: &Natural) -> Result<Natural> {
        self.check_reduced(x)?;
        Ok(self.redc_unchecked(&(x * &self.r_squared)))
    }

    /// Inverse of [`MontCtx::to_mont`].
    pub fn from_mont(&self, x: &Natural) -> Result<Natural> {
        self.check_reduced(x)?;
        Ok(self.redc_unchecked(x))
    }

    fn check_reduced(&self, x: &Natural) -> Result<()> {
        if x >= &self.modulus {
            return Err(Error::capacity("value must be reduced below the modulus"));
        }
        Ok(())
    }

    pub(crate) fn one(&self) -> Natural {
        self.r_mod.clone()
    }

    pub(crate) fn mul(&self, a: &Natural, b: &Natural) -> Natural {
        if a.is_zero() || b.is_zero() {
            return Natural::zero();
        }
        self.redc_unchecked(&(a * b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seven() -> MontCtx {
        MontCtx::with_r_bits(&Natural::from(7u32), 4).unwrap()
    }

    #[test]
    fn small_modulus_example() {
        let ctx = seven();
        assert_eq!(ctx.neg_inv(), &Natural::from(9u32));
        assert_eq!(ctx.redc(&Natural::from(20u32)).unwrap(), Natural::from(3u32));
        assert_eq!(ctx.redc(&Natural::zero()).unwrap(), Natural::zero());
        assert_eq!(ctx.to_mont(&Natural::from(3u32)).unwrap(), Natural::from(6u32));
        assert_eq!(ctx.from_mont(&Natural::from(6u32)).unwrap(), Natural::from(3u32));
        assert_eq!(ctx.to_mont(&Natural::zero()).unwrap(), Natural::zero());
    }

    #[test]
    fn neg_inv_identity() {
        let m = Natural::parse_bytes(b"f123456789abcdef0123456789abcdef1", 16).unwrap();
        let ctx = MontCtx::new(&m).unwrap();
        assert_eq!((ctx.neg_inv() * &m) % ctx.r(), ctx.r() - 1u32);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MontCtx::new(&Natural::from(8u32)).is_err());
        assert!(MontCtx::with_r_bits(&Natural::from(17u32), 4).is_err());
        assert!(matches!(seven().redc(&Natural::from(112u32)), Err(Error::Capacity(_))));
        assert!(matches!(seven().to_mont(&Natural::from(7u32)), Err(Error::Capacity(_))));
    }
}
