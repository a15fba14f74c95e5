//! Bijections on `{0,1}^d`: a keyed Feistel network, block-wise AES and
//! the both-ends construction.

use num_traits::{One, Zero};

use super::prf::{derive_key, BlockCipher, Prf};
use crate::bigmath::Natural;

const FEISTEL_ROUNDS: u32 = 10;
const TAG_FEISTEL: u8 = 0x10;

pub(crate) const BLOCK_BITS: u64 = 128;

fn mask(bits: u64) -> Natural {
    (Natural::one() << bits) - 1u32
}

/// Alternating Feistel network on `d`-bit strings with modular addition.
/// The halves are `floor(d/2)` (high) and `ceil(d/2)` (low) bits.
#[derive(Clone, Debug)]
pub(crate) struct Feistel {
    prf: Prf,
    bits: u64,
    high: u64,
    low: u64,
}

impl Feistel {
    pub(crate) fn new(key: &[u8], label: &str, bits: u64) -> Self {
        let high = bits / 2;
        Feistel { prf: Prf::new(&derive_key(key, label)), bits, high, low: bits - high }
    }

    fn round_value(&self, round: u32, input: &Natural, input_bits: u64, out_bits: u64) -> Natural {
        if out_bits == 0 {
            return Natural::zero();
        }
        let width = input_bits.div_ceil(8) as usize;
        self.prf.expand(TAG_FEISTEL, self.bits as u32, round, input, width, out_bits)
    }

    pub(crate) fn encrypt(&self, x: &Natural) -> Natural {
        let mut l = x >> self.low;
        let mut r = x & mask(self.low);
        for round in 0..FEISTEL_ROUNDS {
            if round % 2 == 0 {
                l = (l + self.round_value(round, &r, self.low, self.high)) & mask(self.high);
            } else {
                r = (r + self.round_value(round, &l, self.high, self.low)) & mask(self.low);
            }
        }
        (l << self.low) | r
    }

    pub(crate) fn decrypt(&self, y: &Natural) -> Natural {
        let mut l = y >> self.low;
        let mut r = y & mask(self.low);
        for round in (0..FEISTEL_ROUNDS).rev() {
            if round % 2 == 0 {
                let f = self.round_value(round, &r, self.low, self.high);
                l = (l + (Natural::one() << self.high) - f) & mask(self.high);
            } else {
                let f = self.round_value(round, &l, self.high, self.low);
                r = (r + (Natural::one() << self.low) - f) & mask(self.low);
            }
        }
        (l << self.low) | r
    }
}

/// Block-wise AES-256 over a whole number of 128-bit blocks.
#[derive(Clone, Debug)]
pub(crate) struct BlockFpe {
    cipher: BlockCipher,
    bits: u64,
}

impl BlockFpe {
    pub(crate) fn new(key: &[u8], label: &str, bits: u64) -> Self {
        assert_eq!(bits % BLOCK_BITS, 0);
        BlockFpe { cipher: BlockCipher::new(&derive_key(key, label)), bits }
    }

    pub(crate) fn encrypt(&self, x: &Natural) -> Natural {
        self.cipher.apply(x, self.bits, false)
    }

    pub(crate) fn decrypt(&self, y: &Natural) -> Natural {
        self.cipher.apply(y, self.bits, true)
    }
}

/// Encryption of an `l`-bit string from both ends with two AES-256 keys.
///
/// With `x = l mod 128`, the first pass encrypts the leading `l - x` bits in
/// 128-bit blocks and keeps the trailing `x` bits; the second pass keeps the
/// leading `x` bits and encrypts the trailing `l - x`. Every bit passes
/// through at least one block. Strings shorter than one block use a Feistel
/// network instead.
#[derive(Clone, Debug)]
pub(crate) enum BothEnds {
    Blocks { first: Box<BlockCipher>, second: Box<BlockCipher>, bits: u64, rem: u64 },
    Short(Box<Feistel>),
}

impl BothEnds {
    pub(crate) fn new(key: &[u8], bits: u64) -> Self {
        if bits < BLOCK_BITS {
            return BothEnds::Short(Box::new(Feistel::new(key, "both-ends-short", bits)));
        }
        BothEnds::Blocks {
            first: Box::new(BlockCipher::new(&derive_key(key, "both-ends-k1"))),
            second: Box::new(BlockCipher::new(&derive_key(key, "both-ends-k2"))),
            bits,
            rem: bits % BLOCK_BITS,
        }
    }

    pub(crate) fn encrypt(&self, s: &Natural) -> Natural {
        match self {
            BothEnds::Short(f) => f.encrypt(s),
            BothEnds::Blocks { first, second, bits, rem } => {
                let body = bits - rem;
                let t = (first.apply(&(s >> *rem), body, false) << *rem) | (s & mask(*rem));
                ((&t >> body) << body) | second.apply(&(t & mask(body)), body, false)
            }
        }
    }

    pub(crate) fn decrypt(&self, r: &Natural) -> Natural {
        match self {
            BothEnds::Short(f) => f.decrypt(r),
            BothEnds::Blocks { first, second, bits, rem } => {
                let body = bits - rem;
                let t = ((r >> body) << body) | second.apply(&(r & mask(body)), body, true);
                (first.apply(&(&t >> *rem), body, true) << *rem) | (t & mask(*rem))
            }
        }
    }
}
