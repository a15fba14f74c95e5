use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::bigmath::Natural;
use crate::{Error, Result};

/// Target sizes above this many bits are served from the curated list
/// instead of being generated.
pub const CURATED_THRESHOLD: u64 = 16384;

/// Smallest `floor(log2 p)` that setup accepts.
pub const MIN_SIZE_BITS: u64 = 64;

/// A safe prime of the form `k * 2^e + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CuratedPrime {
    pub k: u64,
    pub e: u32,
    pub c: i64,
}

/// Large safe primes bundled with the library: a 70034-bit prime plus three
/// whose sizes sit one bit below a multiple of 128.
pub const BUNDLED_PRIMES: [CuratedPrime; 4] = [
    CuratedPrime { k: 2566851867, e: 70002, c: -1 },
    CuratedPrime { k: 1030710193, e: 44001, c: 3 },
    CuratedPrime { k: 1022253375, e: 43489, c: -1 },
    CuratedPrime { k: 168851511, e: 33251, c: -1 },
];

impl CuratedPrime {
    pub fn value(&self) -> Natural {
        let shifted = Natural::from(self.k) << self.e;
        if self.c >= 0 {
            shifted + self.c as u64
        } else {
            shifted - self.c.unsigned_abs()
        }
    }

    pub fn bits(&self) -> u64 {
        self.value().bits()
    }

    /// Looks up the curated prime whose `floor(log2 p)` is closest to `target`.
    pub fn nearest(list: &[CuratedPrime], target: u64) -> Option<CuratedPrime> {
        list.iter().copied().min_by_key(|c| (c.bits() - 1).abs_diff(target))
    }
}

impl fmt::Display for CuratedPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.c < 0 { '-' } else { '+' };
        write!(f, "{}*2^{}{}{}", self.k, self.e, sign, self.c.unsigned_abs())
    }
}

impl FromStr for CuratedPrime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parameter(format!("curated prime `{s}` is not of the form k*2^e+c"));
        let s = s.trim();
        let (k, rest) = s.split_once("*2^").ok_or_else(bad)?;
        let at = rest.find(['+', '-']).ok_or_else(bad)?;
        let (e, c) = rest.split_at(at);
        let k = k.trim().parse().map_err(|_| bad())?;
        let e = e.trim().parse().map_err(|_| bad())?;
        let c: i64 = c.replace(' ', "").parse().map_err(|_| bad())?;
        let prime = CuratedPrime { k, e, c };
        if prime.value() <= Natural::one() {
            return Err(bad());
        }
        Ok(prime)
    }
}
