use num_traits::One;

use super::depth::Tally;
use super::{to_fixed_bytes, BarrettCtx, DepthTrace, Natural};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"CLFB";
const VERSION: u8 = 1;

/// Precomputed powers `base^(2^i) mod modulus`. Any exponent below
/// `2^len()` then needs only a logarithmic-depth product of table entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBaseTable {
    modulus: Natural,
    powers: Vec<Natural>,
    barrett: BarrettCtx,
}

impl FixedBaseTable {
    /// Table covering every exponent below `2^bits(modulus)`.
    pub fn new(base: &Natural, modulus: &Natural) -> Result<Self> {
        Self::with_len(base, modulus, modulus.bits() as usize)
    }

    /// Table with `len` entries, covering exponents below `2^len`.
    pub fn with_len(base: &Natural, modulus: &Natural, len: usize) -> Result<Self> {
        if modulus <= &Natural::one() {
            return Err(Error::parameter("fixed-base modulus must exceed 1"));
        }
        if base >= modulus {
            return Err(Error::parameter("base must be reduced below the modulus"));
        }
        if len == 0 {
            return Err(Error::parameter("table needs at least one entry"));
        }
        let barrett = BarrettCtx::for_products(modulus)?;
        let mut powers = Vec::with_capacity(len);
        powers.push(base.clone());
        for i in 1..len {
            let next = barrett.mul(&powers[i - 1], &powers[i - 1]);
            powers.push(next);
        }
        Ok(FixedBaseTable { modulus: modulus.clone(), powers, barrett })
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub fn base(&self) -> &Natural {
        &self.powers[0]
    }

    pub fn powers(&self) -> &[Natural] {
        &self.powers
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// Bits needed to store the entries at full modulus width: `n * len`.
    pub fn payload_bits(&self) -> u64 {
        self.modulus.bits() * self.powers.len() as u64
    }

    /// Checks `powers[i + 1] = powers[i]^2` across the whole table.
    pub fn verify(&self) -> bool {
        self.powers.iter().all(|p| p < &self.modulus)
            && self.powers.windows(2).all(|w| self.barrett.mul(&w[0], &w[0]) == w[1])
    }

    fn leaves(&self, exp: &Natural) -> Result<Vec<&Natural>> {
        if exp.bits() > self.powers.len() as u64 {
            return Err(Error::parameter(format!(
                "{}-bit exponent exceeds the table's {} entries",
                exp.bits(),
                self.powers.len()
            )));
        }
        Ok((0..exp.bits()).filter(|&i| exp.bit(i)).map(|i| &self.powers[i as usize]).collect())
    }

    fn tree(&self, leaves: &[&Natural], tally: &mut Tally) -> (Natural, u64) {
        match leaves {
            [] => (Natural::one() % &self.modulus, 0),
            [x] => ((*x).clone(), 0),
            _ => {
                let (l, r) = leaves.split_at(leaves.len() / 2);
                let (a, da) = self.tree(l, tally);
                let (b, db) = self.tree(r, tally);
                (self.barrett.mul(&a, &b), tally.mul(da, db))
            }
        }
    }

    fn tree_par(&self, leaves: &[&Natural]) -> (Natural, DepthTrace) {
        match leaves {
            [] => (Natural::one() % &self.modulus, DepthTrace::ZERO),
            [x] => ((*x).clone(), DepthTrace::ZERO),
            _ => {
                let (l, r) = leaves.split_at(leaves.len() / 2);
                let ((a, ta), (b, tb)) = rayon::join(|| self.tree_par(l), || self.tree_par(r));
                let joined = ta.alongside(tb).then(DepthTrace { sequential_depth: 1, total_mults: 1 });
                (self.barrett.mul(&a, &b), joined)
            }
        }
    }

    /// Serialized form: magic, version, modulus bit length, the
    /// length-prefixed modulus and fixed-width big-endian entries.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.modulus.bits();
        let width = n.div_ceil(8) as usize;
        let modulus = self.modulus.to_bytes_be();
        let mut out = Vec::with_capacity(13 + modulus.len() + width * self.powers.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&(n as u32).to_be_bytes());
        out.extend_from_slice(&(modulus.len() as u32).to_be_bytes());
        out.extend_from_slice(&modulus);
        for p in &self.powers {
            out.extend_from_slice(&to_fixed_bytes(p, width));
        }
        out
    }

    /// Parses [`FixedBaseTable::to_bytes`] output. Structural checks only;
    /// call [`FixedBaseTable::verify`] to check the squaring chain.
    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::format(0, format!("fixed-base table: {msg}"));
        let take = |at: usize, len: usize| data.get(at..at + len).ok_or_else(|| bad("truncated"));
        if take(0, 4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        if take(4, 1)?[0] != VERSION {
            return Err(bad("unsupported version"));
        }
        let n = u32::from_be_bytes(take(5, 4)?.try_into().unwrap()) as u64;
        let mlen = u32::from_be_bytes(take(9, 4)?.try_into().unwrap()) as usize;
        let modulus = Natural::from_bytes_be(take(13, mlen)?);
        if modulus.bits() != n || modulus <= Natural::one() {
            return Err(bad("modulus does not match the declared size"));
        }
        let width = n.div_ceil(8) as usize;
        let body = &data[13 + mlen..];
        if body.is_empty() || !body.len().is_multiple_of(width) {
            return Err(bad("entry block is not a whole number of entries"));
        }
        let powers: Vec<Natural> = body.chunks(width).map(Natural::from_bytes_be).collect();
        if powers.iter().any(|p| p >= &modulus) {
            return Err(bad("entry not reduced"));
        }
        let barrett = BarrettCtx::for_products(&modulus)?;
        Ok(FixedBaseTable { modulus, powers, barrett })
    }
}

/// `base^exp` from the table via a balanced product tree over the set bits
/// of `exp`; depth is at most `ceil(log2 popcount(exp))`.
pub fn powmod_fixed_base(table: &FixedBaseTable, exp: &Natural) -> Result<(Natural, DepthTrace)> {
    let leaves = table.leaves(exp)?;
    let mut tally = Tally::default();
    let (value, depth) = table.tree(&leaves, &mut tally);
    Ok((value, tally.finish(depth)))
}

/// Same tree as [`powmod_fixed_base`], with sibling subtrees on worker threads.
pub fn powmod_fixed_base_par(table: &FixedBaseTable, exp: &Natural) -> Result<(Natural, DepthTrace)> {
    let leaves = table.leaves(exp)?;
    Ok(table.tree_par(&leaves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn n(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn single_and_double_bit_exponents() {
        let t = FixedBaseTable::new(&n(5), &n(23)).unwrap();
        assert_eq!(t.len(), 5);
        let (v, d) = powmod_fixed_base(&t, &n(8)).unwrap();
        assert_eq!(v, n(5u64.pow(8) % 23));
        assert_eq!(d, DepthTrace::ZERO);
        let (v, d) = powmod_fixed_base(&t, &n(0b10010)).unwrap();
        assert_eq!(v, n(5u64.pow(18) % 23));
        assert_eq!(d, DepthTrace { sequential_depth: 1, total_mults: 1 });
        assert_eq!(powmod_fixed_base(&t, &Natural::zero()).unwrap().0, n(1));
    }

    #[test]
    fn coverage_limit() {
        let t = FixedBaseTable::new(&n(5), &n(23)).unwrap();
        assert!(powmod_fixed_base(&t, &n(31)).is_ok());
        assert!(matches!(powmod_fixed_base(&t, &n(32)), Err(Error::Parameter(_))));
    }

    #[test]
    fn parallel_matches_sequential() {
        let t = FixedBaseTable::new(&n(7), &n(1_000_003)).unwrap();
        for e in [1u64, 3, 77, 524_287, 999_999] {
            assert_eq!(powmod_fixed_base(&t, &n(e)).unwrap(), powmod_fixed_base_par(&t, &n(e)).unwrap());
        }
    }

    #[test]
    fn serialization_round_trip() {
        let t = FixedBaseTable::new(&n(3), &n(1_000_003)).unwrap();
        let bytes = t.to_bytes();
        assert_eq!(&bytes[..4], b"CLFB");
        assert_eq!(bytes[4], 1);
        assert_eq!(u32::from_be_bytes(bytes[5..9].try_into().unwrap()), 20);
        assert_eq!(bytes.len(), 13 + 3 + 3 * 20);
        let back = FixedBaseTable::from_bytes(&bytes).unwrap();
        assert_eq!(back, t);
        assert!(back.verify());
        assert!(FixedBaseTable::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut corrupt = bytes.clone();
        corrupt[0] = b'X';
        assert!(FixedBaseTable::from_bytes(&corrupt).is_err());
    }
}
