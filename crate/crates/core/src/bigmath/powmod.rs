use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::depth::Tally;
use super::{bit_window, BarrettCtx, DepthTrace, MontCtx, Natural};
use crate::{Error, Result};

/// Window width used when nothing else is configured.
pub const DEFAULT_WINDOW: u32 = 6;

/// Largest precomputed window table, in bytes, that exponentiation will build.
pub const MAX_TABLE_BYTES: u64 = 256 << 20;

/// Modular reduction strategy used inside exponentiation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Reduction {
    Barrett,
    #[default]
    Montgomery,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::Barrett => "barrett",
            Reduction::Montgomery => "montgomery",
        })
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "barrett" => Ok(Reduction::Barrett),
            "montgomery" => Ok(Reduction::Montgomery),
            other => Err(Error::parameter(format!("unknown reduction strategy `{other}`"))),
        }
    }
}

/// Evaluation order for windowed exponentiation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Evaluation {
    /// Fixed k-ary method: one accumulator, `w` squarings then a table
    /// multiplication per window.
    Sequential,
    /// One shared squaring chain `a^(2^k)`. Each window's contribution is
    /// assembled from chain elements off the critical path and folded in as
    /// soon as it is ready.
    #[default]
    Combined,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluation::Sequential => "sequential",
            Evaluation::Combined => "combined",
        })
    }
}

impl FromStr for Evaluation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Evaluation::Sequential),
            "combined" => Ok(Evaluation::Combined),
            other => Err(Error::parameter(format!("unknown evaluation order `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
enum Ctx {
    Barrett(BarrettCtx),
    Montgomery(MontCtx),
}

/// Modular multiplication for one modulus under a chosen reduction strategy.
/// Build once and reuse for every exponentiation modulo the same number.
#[derive(Clone, Debug)]
pub struct ModArith {
    modulus: Natural,
    ctx: Ctx,
}

type Tracked = (Natural, u64);

impl ModArith {
    pub fn new(modulus: &Natural, strategy: Reduction) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::parameter("modulus must be nonzero"));
        }
        let ctx = match strategy {
            Reduction::Barrett => Ctx::Barrett(BarrettCtx::for_products(modulus)?),
            Reduction::Montgomery => Ctx::Montgomery(MontCtx::new(modulus)?),
        };
        Ok(ModArith { modulus: modulus.clone(), ctx })
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub fn strategy(&self) -> Reduction {
        match self.ctx {
            Ctx::Barrett(_) => Reduction::Barrett,
            Ctx::Montgomery(_) => Reduction::Montgomery,
        }
    }

    /// `a * b mod modulus` for reduced operands, in the ordinary domain.
    pub fn mul_mod(&self, a: &Natural, b: &Natural) -> Natural {
        self.leave(&self.mul(&self.enter(a), &self.enter(b)))
    }

    fn enter(&self, x: &Natural) -> Natural {
        match &self.ctx {
            Ctx::Barrett(_) => x.clone(),
            Ctx::Montgomery(m) => m.to_mont(x).expect("operand reduced by caller"),
        }
    }

    fn leave(&self, x: &Natural) -> Natural {
        match &self.ctx {
            Ctx::Barrett(_) => x.clone(),
            Ctx::Montgomery(m) => m.from_mont(x).expect("internal value is reduced"),
        }
    }

    fn one(&self) -> Natural {
        match &self.ctx {
            Ctx::Barrett(_) => Natural::one() % &self.modulus,
            Ctx::Montgomery(m) => m.one(),
        }
    }

    fn mul(&self, a: &Natural, b: &Natural) -> Natural {
        match &self.ctx {
            Ctx::Barrett(c) => c.mul(a, b),
            Ctx::Montgomery(m) => m.mul(a, b),
        }
    }

    fn mul_tracked(&self, a: &Tracked, b: &Tracked, tally: &mut Tally) -> Tracked {
        (self.mul(&a.0, &b.0), tally.mul(a.1, b.1))
    }

    fn check_operands(&self, base: &Natural, w: u32) -> Result<()> {
        if base >= &self.modulus {
            return Err(Error::parameter("base must be reduced below the modulus"));
        }
        if w == 0 {
            return Err(Error::parameter("window width must be at least 1"));
        }
        Ok(())
    }

    /// `base^exp` with the chosen evaluation order.
    pub fn pow(&self, base: &Natural, exp: &Natural, w: u32, evaluation: Evaluation) -> Result<(Natural, DepthTrace)> {
        match evaluation {
            Evaluation::Sequential => self.pow_window(base, exp, w),
            Evaluation::Combined => self.pow_combined(base, exp, w),
        }
    }

    /// Fixed-window exponentiation. A table of `base^0 .. base^(2^w - 1)` is
    /// built first by repeated multiplication, then the exponent is consumed
    /// `w` bits at a time from the top, the highest window zero-padded.
    pub fn pow_window(&self, base: &Natural, exp: &Natural, w: u32) -> Result<(Natural, DepthTrace)> {
        self.check_operands(base, w)?;
        let entry_bytes = self.modulus.bits().div_ceil(8).max(1);
        if w > 32 || (1u64 << w).saturating_mul(entry_bytes) > MAX_TABLE_BYTES {
            return Err(Error::parameter(format!(
                "a window of {w} bits needs a table above the {MAX_TABLE_BYTES}-byte cap"
            )));
        }
        if exp.is_zero() {
            return Ok((self.leave(&self.one()), DepthTrace::ZERO));
        }
        let mut tally = Tally::default();
        let a: Tracked = (self.enter(base), 0);
        let size = 1usize << w;
        let mut table: Vec<Tracked> = Vec::with_capacity(size);
        table.push((self.one(), 0));
        table.push(a.clone());
        for x in 2..size {
            let next = self.mul_tracked(&table[x - 1], &a, &mut tally);
            table.push(next);
        }

        let limbs = exp.to_u64_digits();
        let windows = exp.bits().div_ceil(u64::from(w));
        let digit = |j: u64| bit_window(&limbs, j * u64::from(w), w);
        let mut acc = table[digit(windows - 1)].clone();
        for j in (0..windows - 1).rev() {
            for _ in 0..w {
                acc = self.mul_tracked(&acc, &acc, &mut tally);
            }
            acc = self.mul_tracked(&acc, &table[digit(j)], &mut tally);
        }
        Ok((self.leave(&acc.0), tally.finish(acc.1)))
    }

    /// Exponentiation along a single squaring chain. Window `j` contributes
    /// `base^(d_j 2^(jw))`, the product of the chain elements for its set
    /// bits, and is folded into the accumulator once its last element exists.
    /// Depth stays within a few multiplications of `log2 exp`.
    pub fn pow_combined(&self, base: &Natural, exp: &Natural, w: u32) -> Result<(Natural, DepthTrace)> {
        self.check_operands(base, w)?;
        if exp.is_zero() {
            return Ok((self.leave(&self.one()), DepthTrace::ZERO));
        }
        let mut tally = Tally::default();
        let bits = exp.bits();
        let w = u64::from(w.min(64));
        let mut u: Tracked = (self.enter(base), 0);
        let mut acc: Option<Tracked> = None;
        let mut leaves: Vec<Tracked> = Vec::new();
        for k in 0..bits {
            if k > 0 {
                u = self.mul_tracked(&u, &u, &mut tally);
            }
            if exp.bit(k) {
                leaves.push(u.clone());
            }
            if (k + 1) % w == 0 || k + 1 == bits {
                if let Some(term) = self.product_tree(std::mem::take(&mut leaves), &mut tally) {
                    acc = Some(match acc {
                        None => term,
                        Some(prev) => self.mul_tracked(&prev, &term, &mut tally),
                    });
                }
            }
        }
        let (value, depth) = acc.expect("nonzero exponent has a set bit");
        Ok((self.leave(&value), tally.finish(depth)))
    }

    fn product_tree(&self, mut items: Vec<Tracked>, tally: &mut Tally) -> Option<Tracked> {
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            let mut it = items.chunks(2);
            for pair in &mut it {
                next.push(match pair {
                    [x, y] => self.mul_tracked(x, y, tally),
                    [x] => x.clone(),
                    _ => unreachable!(),
                });
            }
            items = next;
        }
        items.pop()
    }
}

/// `base^exp mod modulus` by fixed-window exponentiation, with its depth trace.
pub fn powmod_window(
    base: &Natural,
    exp: &Natural,
    modulus: &Natural,
    w: u32,
    strategy: Reduction,
) -> Result<(Natural, DepthTrace)> {
    ModArith::new(modulus, strategy)?.pow_window(base, exp, w)
}

/// `base^exp mod modulus` along one squaring chain with window products
/// folded in off the critical path.
pub fn powmod_combined(
    base: &Natural,
    exp: &Natural,
    modulus: &Natural,
    w: u32,
    strategy: Reduction,
) -> Result<(Natural, DepthTrace)> {
    ModArith::new(modulus, strategy)?.pow_combined(base, exp, w)
}
