use num_traits::ToPrimitive;

use super::poly::{pow_u64, PolyModP};
use crate::bigmath::Natural;
use crate::{Error, Result};

/// Largest prime the gcd attack accepts.
pub const MAX_GCD_PRIME: u64 = 1 << 20;

/// Swap-neighbors step on `Z_p`: odd `x` goes to `x + 1`, even `x` to
/// `x − 1`, and the two fixed points are `0` and, when it is odd, `p − 1`.
pub fn swap_neighbors_u64(x: u64, p: u64) -> u64 {
    if x == 0 {
        0
    } else if x & 1 == 1 {
        if x + 1 < p {
            x + 1
        } else {
            x
        }
    } else {
        x - 1
    }
}

/// The two-stage swap-neighbors chain `g(f(g(f(x))))` with `f(x) = x³`,
/// which expands to `(x³ ± 1)³ ± 1`.
pub fn swap_neighbors_chain2(x: u64, p: u64) -> u64 {
    let once = swap_neighbors_u64(pow_u64(x, 3, p), p);
    swap_neighbors_u64(pow_u64(once, 3, p), p)
}

/// Recovers `m` from `c = g(f(g(f(m))))` when the first swap added one and
/// the second subtracted one, which makes `c = m⁹ + 3m⁶ + 3m³ mod p`. Computes `z^(p−1) mod F(z)` for
/// `F(z) = z⁹ + 3z⁶ + 3z³ − c`, then `gcd(F, z^(p−1) − 1)`, and returns the
/// smallest root of that gcd that maps back to `c`. A gcd with several roots
/// occurs when `p ≡ 1 mod 3`; they are separated rather than rejected.
pub fn gcd_attack_swap_neighbors(p: &Natural, c: &Natural) -> Result<Natural> {
    let p = p.to_u64().filter(|&p| p <= MAX_GCD_PRIME).ok_or_else(|| Error::capacity("gcd attack needs p ≤ 2^20"))?;
    if p < 5 || !crate::bigmath::is_prime_u64(p) {
        return Err(Error::parameter(format!("{p} is not a prime of at least 5")));
    }
    let c = c.to_u64().filter(|&c| c < p).ok_or_else(|| Error::parameter("ciphertext must lie in [0, p)"))?;
    if c == 0 {
        return Err(Error::parameter("the gcd attack is undefined for c = 0"));
    }
    let f = PolyModP::new(&[p - c, 0, 0, 3, 0, 0, 3, 0, 0, 1], p)?;
    let shifted = PolyModP::z(p).pow_mod(p - 1, &f)?.sub(&PolyModP::constant(1, p));
    let g = if shifted.is_zero() { f.clone() } else { f.gcd(&shifted)? };
    if g.degree().unwrap_or(0) == 0 {
        return Err(Error::AttackFailed("gcd is constant; the sign pattern does not match".into()));
    }
    g.roots()?
        .into_iter()
        .find(|&m| swap_neighbors_chain2(m, p) == c)
        .map(Natural::from)
        .ok_or_else(|| Error::AttackFailed("no root of the gcd re-encrypts to c".into()))
}

/// Outcome of running the attack on the image of every `m ∈ Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdSweep {
    pub p: u64,
    pub trials: u64,
    pub successes: u64,
    /// Successes whose answer is the original `m`, not just a preimage of `c`.
    pub exact: u64,
    /// Returned values that did not re-encrypt to `c`. Always zero.
    pub unsound: u64,
}

impl GcdSweep {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Runs the attack on `swap_neighbors_chain2(m)` for every `m ∈ Z_p`.
/// `c = 0` counts as a failure.
pub fn gcd_attack_sweep(p: u64) -> Result<GcdSweep> {
    use rayon::prelude::*;
    let pn = Natural::from(p);
    let outcomes: Vec<(bool, bool, bool)> = (0..p)
        .into_par_iter()
        .map(|m| {
            let c = swap_neighbors_chain2(m, p);
            match gcd_attack_swap_neighbors(&pn, &Natural::from(c)) {
                Ok(r) => {
                    let r = r.to_u64().unwrap_or(u64::MAX);
                    let sound = swap_neighbors_chain2(r, p) == c;
                    Ok((sound, sound && r == m, !sound))
                }
                Err(Error::AttackFailed(_)) => Ok((false, false, false)),
                Err(Error::Parameter(_)) if c == 0 => Ok((false, false, false)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let count = |pick: fn(&(bool, bool, bool)) -> bool| outcomes.iter().filter(|o| pick(o)).count() as u64;
    Ok(GcdSweep { p, trials: p, successes: count(|o| o.0), exact: count(|o| o.1), unsound: count(|o| o.2) })
}
