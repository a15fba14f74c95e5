use num_traits::{One, Zero};

use super::Natural;
use crate::{Error, Result};

/// Precomputed state for Barrett reduction modulo a fixed modulus.
///
/// Inputs of up to `shift - 1` bits reduce with two multiplications and at
/// most two subtractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrettCtx {
    modulus: Natural,
    shift: u64,
    q: Natural,
}

impl BarrettCtx {
    /// Context for inputs of at most `input_bits` bits.
    pub fn new(modulus: &Natural, input_bits: u64) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::parameter("Barrett modulus must be nonzero"));
        }
        if input_bits < modulus.bits() {
            return Err(Error::parameter("Barrett capacity is below the modulus size"));
        }
        let shift = input_bits + 1;
        let q = (Natural::one() << shift) / modulus;
        Ok(BarrettCtx { modulus: modulus.clone(), shift, q })
    }

    /// Context sized for products of two reduced residues.
    pub fn for_products(modulus: &Natural) -> Result<Self> {
        Self::new(modulus, 2 * modulus.bits())
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn q(&self) -> &Natural {
        &self.q
    }

    /// `a mod modulus`, rejecting inputs at or above `2^shift`.
    pub fn reduce(&self, a: &Natural) -> Result<Natural> {
        if a.bits() > self.shift {
            return Err(Error::capacity(format!(
                "{}-bit input exceeds the Barrett capacity of {} bits",
                a.bits(),
                self.shift
            )));
        }
        Ok(self.reduce_unchecked(a))
    }

    pub(crate) fn reduce_unchecked(&self, a: &Natural) -> Natural {
        let estimate = (a * &self.q) >> self.shift;
        let mut r = a - estimate * &self.modulus;
        // The estimate undershoots the true quotient by at most one.
        if r >= self.modulus {
            r -= &self.modulus;
        }
        debug_assert!(r < self.modulus);
        r
    }

    pub(crate) fn mul(&self, a: &Natural, b: &Natural) -> Natural {
        self.reduce_unchecked(&(a * b))
    }
}
