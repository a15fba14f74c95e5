//! Oblivious card shuffles: Thorp, swap-or-not and mix-and-cut.

use num_traits::{One, Zero};

use super::prf::Prf;
use crate::bigmath::Natural;

const TAG_THORP: u8 = 0x20;
const TAG_SON_KEY: u8 = 0x30;
const TAG_SON_COIN: u8 = 0x31;

/// Thorp shuffle on a deck of `2^bits` cards.
///
/// Each round cuts the deck in half and interleaves the halves; card `x` and
/// its partner `x + 2^(bits-1)` share one coin, which decides which of them
/// lands in the odd slot.
#[derive(Clone, Debug)]
pub(crate) struct Thorp {
    prf: Prf,
    bits: u64,
    rounds: u32,
}

impl Thorp {
    pub(crate) fn new(prf: Prf, bits: u64, rounds: u32) -> Self {
        assert!(bits >= 1);
        Thorp { prf, bits, rounds }
    }

    fn coin(&self, round: u32, low: &Natural) -> bool {
        self.prf.bit(TAG_THORP, 0, round, low, self.bits.div_ceil(8) as usize)
    }

    pub(crate) fn forward(&self, x: &Natural) -> Natural {
        thorp_forward(self.bits, self.rounds, x, |r, low| self.coin(r, low))
    }

    pub(crate) fn inverse(&self, y: &Natural) -> Natural {
        thorp_inverse(self.bits, self.rounds, y, |r, low| self.coin(r, low))
    }
}

/// Forward Thorp trace with an arbitrary coin source, given the round and
/// the lower card of the pair.
pub(crate) fn thorp_forward(bits: u64, rounds: u32, x: &Natural, coin: impl Fn(u32, &Natural) -> bool) -> Natural {
    let half = Natural::one() << (bits - 1);
    let mut x = x.clone();
    for r in 0..rounds {
        if x < half {
            let b = coin(r, &x);
            x = (x << 1u32) + u32::from(!b);
        } else {
            x -= &half;
            let b = coin(r, &x);
            x = (x << 1u32) + u32::from(b);
        }
    }
    x
}

pub(crate) fn thorp_inverse(bits: u64, rounds: u32, y: &Natural, coin: impl Fn(u32, &Natural) -> bool) -> Natural {
    let half = Natural::one() << (bits - 1);
    let mut y = y.clone();
    for r in (0..rounds).rev() {
        let odd = y.bit(0);
        let low: Natural = &y >> 1u32;
        let b = coin(r, &low);
        // The lower card sits in the odd slot exactly when its coin is 0.
        y = if odd != b { low } else { low + &half };
    }
    y
}

/// Swap-or-not shuffle on `{0, .., n - 1}` for any `n >= 1`.
///
/// Round `i` pairs `x` with `K_i - x mod n` and swaps when the coin for the
/// larger of the two is set, so every round is an involution.
#[derive(Clone, Debug)]
pub(crate) struct SwapOrNot {
    prf: Prf,
    n: Natural,
    rounds: u32,
    level: u32,
    keys: Option<Vec<Natural>>,
}

/// Round keys are cached when they fit in this many bytes.
const ROUND_KEY_CACHE: u64 = 16 << 20;

impl SwapOrNot {
    pub(crate) fn new(prf: Prf, n: Natural, rounds: u32, level: u32) -> Self {
        let mut s = SwapOrNot { prf, n, rounds, level, keys: None };
        if s.n.bits().div_ceil(8) * u64::from(rounds) <= ROUND_KEY_CACHE {
            s.keys = Some((0..rounds).map(|i| s.compute_key(i)).collect());
        }
        s
    }

    fn width(&self) -> usize {
        self.n.bits().div_ceil(8) as usize
    }

    fn compute_key(&self, round: u32) -> Natural {
        let k = self.prf.expand(TAG_SON_KEY, self.level, round, &Natural::zero(), 0, self.n.bits() + 64);
        k % &self.n
    }

    #[cfg(test)]
    fn round_key(&self, round: u32) -> Natural {
        match &self.keys {
            Some(keys) => keys[round as usize].clone(),
            None => self.compute_key(round),
        }
    }

    /// One round: pair `x` with `k - x mod n`, swap on the coin for the larger.
    pub(crate) fn round(&self, round: u32, x: &Natural) -> Natural {
        let k = match &self.keys {
            Some(keys) => std::borrow::Cow::Borrowed(&keys[round as usize]),
            None => std::borrow::Cow::Owned(self.compute_key(round)),
        };
        let y = if *k >= *x { &*k - x } else { &*k + &self.n - x };
        let top = if *x >= y { x } else { &y };
        if self.prf.bit(TAG_SON_COIN, self.level, round, top, self.width()) {
            y
        } else {
            x.clone()
        }
    }

    pub(crate) fn forward(&self, x: &Natural) -> Natural {
        (0..self.rounds).fold(x.clone(), |acc, r| self.round(r, &acc))
    }

    pub(crate) fn inverse(&self, y: &Natural) -> Natural {
        (0..self.rounds).rev().fold(y.clone(), |acc, r| self.round(r, &acc))
    }
}

/// Mix-and-cut over `2^bits` cards: swap-or-not on the whole deck, then on
/// the lower half if the card landed there, and so on down to one card.
#[derive(Clone, Debug)]
pub(crate) struct MixAndCut {
    levels: Vec<SwapOrNot>,
    bits: u64,
}

impl MixAndCut {
    pub(crate) fn new(prf: Prf, bits: u64, rounds: u32) -> Self {
        // Level j shuffles a deck of 2^(bits - j) cards.
        let levels = (0..bits)
            .map(|j| SwapOrNot::new(prf.clone(), Natural::one() << (bits - j), rounds, j as u32 + 1))
            .collect();
        MixAndCut { levels, bits }
    }

    pub(crate) fn forward(&self, x: &Natural) -> Natural {
        let mut x = x.clone();
        for (j, level) in self.levels.iter().enumerate() {
            x = level.forward(&x);
            let half = Natural::one() << (self.bits - j as u64 - 1);
            if x >= half {
                return x;
            }
        }
        Natural::zero()
    }

    pub(crate) fn inverse(&self, y: &Natural) -> Natural {
        // A card stopping at level j lies in [2^(bits-j-1), 2^(bits-j)); zero went through every level.
        let stop = if y.is_zero() { self.levels.len() } else { (self.bits - y.bits()) as usize + 1 };
        self.levels[..stop].iter().rev().fold(y.clone(), |acc, level| level.inverse(&acc))
    }
}
