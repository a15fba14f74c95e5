use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::fpe::{BlockFpe, BothEnds, Feistel, BLOCK_BITS};
use super::prf::{derive_key, Prf};
use super::shuffle::{MixAndCut, SwapOrNot, Thorp};
use crate::bigmath::Natural;
use crate::{Error, Result};

/// The permutation families available as chain stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermKind {
    SwapNeighbors,
    PairMap,
    CycleWalkFpe,
    BothEnds,
    Thorp,
    SwapOrNot,
    MixAndCut,
}

impl PermKind {
    pub const ALL: [PermKind; 7] = [
        PermKind::SwapNeighbors,
        PermKind::PairMap,
        PermKind::CycleWalkFpe,
        PermKind::BothEnds,
        PermKind::Thorp,
        PermKind::SwapOrNot,
        PermKind::MixAndCut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PermKind::SwapNeighbors => "swap-neighbors",
            PermKind::PairMap => "pair-map",
            PermKind::CycleWalkFpe => "cycle-walk-fpe",
            PermKind::BothEnds => "both-ends",
            PermKind::Thorp => "thorp",
            PermKind::SwapOrNot => "swap-or-not",
            PermKind::MixAndCut => "mix-and-cut",
        }
    }

    /// Whether the kind consumes a round count.
    pub fn is_shuffle(self) -> bool {
        matches!(self, PermKind::Thorp | PermKind::SwapOrNot | PermKind::MixAndCut)
    }
}

impl fmt::Display for PermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PermKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parameter(format!("unknown permutation kind `{s}`")))
    }
}

#[derive(Clone, Debug)]
enum Engine {
    SwapNeighbors,
    PairMap { q: Natural, c1: Natural, c2: Natural },
    Feistel(Feistel),
    Blocks(BlockFpe),
    BothEnds(BothEnds),
    Thorp(Thorp),
    SwapOrNot(SwapOrNot),
    MixAndCut(MixAndCut),
}

/// A keyed bijection on `{0, .., N - 1}` with forward and inverse
/// evaluation. Binary-domain engines are cycle-walked down to `N`.
#[derive(Clone, Debug)]
pub struct Permutation {
    kind: PermKind,
    domain: Natural,
    key: Vec<u8>,
    rounds: u32,
    engine: Engine,
}

impl Permutation {
    /// Builds a permutation of `{0, .., domain - 1}`.
    ///
    /// `pair-map` needs a square domain `q^2` and a key of two big-endian
    /// constants below `q`, each `ceil(bits(q)/8)` bytes wide. `rounds` is
    /// used by the shuffles only.
    pub fn new(kind: PermKind, domain: &Natural, key: &[u8], rounds: u32) -> Result<Self> {
        if domain.is_zero() {
            return Err(Error::parameter("permutation domain must be nonempty"));
        }
        if kind.is_shuffle() && rounds == 0 {
            return Err(Error::parameter(format!("{kind} needs at least one round")));
        }
        // Binary engines work on the smallest 2^d covering the domain.
        let d = (domain - 1u32).bits().max(1);
        let engine = match kind {
            PermKind::SwapNeighbors => Engine::SwapNeighbors,
            PermKind::PairMap => {
                let q = domain.sqrt();
                if &(&q * &q) != domain {
                    return Err(Error::parameter("pair-map needs a square domain"));
                }
                let width = q.bits().div_ceil(8) as usize;
                if key.len() != 2 * width {
                    return Err(Error::parameter(format!("pair-map key must be {} bytes", 2 * width)));
                }
                let c1 = Natural::from_bytes_be(&key[..width]);
                let c2 = Natural::from_bytes_be(&key[width..]);
                if c1 >= q || c2 >= q {
                    return Err(Error::parameter("pair-map constants must be reduced"));
                }
                Engine::PairMap { q, c1, c2 }
            }
            PermKind::CycleWalkFpe => {
                let padded = d.div_ceil(BLOCK_BITS) * BLOCK_BITS;
                if padded - d <= 1 {
                    Engine::Blocks(BlockFpe::new(key, "cycle-walk-aes", padded))
                } else {
                    Engine::Feistel(Feistel::new(key, "cycle-walk-feistel", d))
                }
            }
            PermKind::BothEnds => Engine::BothEnds(BothEnds::new(key, d)),
            PermKind::Thorp => Engine::Thorp(Thorp::new(Prf::new(&derive_key(key, "thorp")), d, rounds)),
            PermKind::SwapOrNot => {
                Engine::SwapOrNot(SwapOrNot::new(Prf::new(&derive_key(key, "swap-or-not")), domain.clone(), rounds, 0))
            }
            PermKind::MixAndCut => {
                Engine::MixAndCut(MixAndCut::new(Prf::new(&derive_key(key, "mix-and-cut")), d, rounds))
            }
        };
        Ok(Permutation { kind, domain: domain.clone(), key: key.to_vec(), rounds, engine })
    }

    pub fn kind(&self) -> PermKind {
        self.kind
    }

    pub fn domain(&self) -> &Natural {
        &self.domain
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    fn check(&self, x: &Natural) -> Result<()> {
        if x >= &self.domain {
            return Err(Error::OutOfDomain(x.to_str_radix(16)));
        }
        Ok(())
    }

    pub fn forward(&self, x: &Natural) -> Result<Natural> {
        Ok(self.forward_counted(x)?.0)
    }

    pub fn inverse(&self, y: &Natural) -> Result<Natural> {
        self.check(y)?;
        Ok(self.walk(y, true).0)
    }

    /// Forward evaluation plus the number of engine calls the cycle walk
    /// took (1 when the first image already lies in the domain).
    pub fn forward_counted(&self, x: &Natural) -> Result<(Natural, u64)> {
        self.check(x)?;
        Ok(self.walk(x, false))
    }

    fn walk(&self, x: &Natural, inverse: bool) -> (Natural, u64) {
        let mut y = self.step(x, inverse);
        let mut steps = 1;
        while y >= self.domain {
            y = self.step(&y, inverse);
            steps += 1;
        }
        (y, steps)
    }

    fn step(&self, x: &Natural, inverse: bool) -> Natural {
        match &self.engine {
            Engine::SwapNeighbors => swap_neighbors(x, &self.domain),
            Engine::PairMap { q, c1, c2 } => pair_map(x, q, c1, c2, inverse),
            Engine::Feistel(f) if inverse => f.decrypt(x),
            Engine::Feistel(f) => f.encrypt(x),
            Engine::Blocks(b) if inverse => b.decrypt(x),
            Engine::Blocks(b) => b.encrypt(x),
            Engine::BothEnds(b) if inverse => b.decrypt(x),
            Engine::BothEnds(b) => b.encrypt(x),
            Engine::Thorp(t) if inverse => t.inverse(x),
            Engine::Thorp(t) => t.forward(x),
            Engine::SwapOrNot(s) if inverse => s.inverse(x),
            Engine::SwapOrNot(s) => s.forward(x),
            Engine::MixAndCut(m) if inverse => m.inverse(x),
            Engine::MixAndCut(m) => m.forward(x),
        }
    }
}

/// Odd `x` moves to `x + 1` and even `x` to `x - 1`, pairing `(2i - 1, 2i)`.
/// Zero, and the top element of an even domain, have no partner and stay.
fn swap_neighbors(x: &Natural, n: &Natural) -> Natural {
    if x.is_zero() {
        return x.clone();
    }
    if x.bit(0) {
        let up = x + 1u32;
        if &up < n {
            up
        } else {
            x.clone()
        }
    } else {
        x - 1u32
    }
}

/// `(x, y) -> (y + c1, x + c2)` on pairs encoded as `x q + y`.
fn pair_map(v: &Natural, q: &Natural, c1: &Natural, c2: &Natural, inverse: bool) -> Natural {
    let (x, y) = (v / q, v % q);
    let (nx, ny) = if inverse {
        // (a, b) = (y + c1, x + c2) gives x = b - c2, y = a - c1.
        ((&y + q - c2) % q, (&x + q - c1) % q)
    } else {
        ((&y + c1) % q, (&x + c2) % q)
    };
    nx * q + ny
}

/// Splits a pair-domain index into its two coordinates.
pub(crate) fn split_pair(v: &Natural, q: &Natural) -> (Natural, Natural) {
    (v / q, v % q)
}

pub(crate) fn join_pair(x: &Natural, y: &Natural, q: &Natural) -> Natural {
    x * q + y
}
