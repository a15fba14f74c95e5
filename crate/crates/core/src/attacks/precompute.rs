use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigmath::{powmod_fixed_base, DepthTrace, FixedBaseTable, Natural};
use crate::puzzle::{unpad, Ciphertext, PuzzleParams};
use crate::{Error, Result};

/// Largest modulus the brute-force discrete-log oracle accepts.
pub const MAX_BRUTE_FORCE_MODULUS: u64 = 1 << 24;

/// Discrete-log oracle by enumeration: the least `x ≥ 1` with
/// `base^x ≡ target mod p`, so `target = 1` yields the order of `base`.
pub fn brute_force_dlog(base: &Natural, target: &Natural, p: &Natural) -> Result<Natural> {
    let p = p
        .to_u64()
        .filter(|&p| p <= MAX_BRUTE_FORCE_MODULUS)
        .ok_or_else(|| Error::capacity("brute-force discrete log needs p ≤ 2^24"))?;
    let (base, target) = match (base.to_u64(), target.to_u64()) {
        (Some(b), Some(t)) if b < p && t < p => (b, t),
        _ => return Err(Error::parameter("oracle inputs must be reduced mod p")),
    };
    let mut acc = 1u64;
    for x in 1..p {
        acc = acc * base % p;
        if acc == target {
            return Ok(Natural::from(x));
        }
        if acc == 1 {
            break;
        }
    }
    Err(Error::AttackFailed(format!("{target} is not a power of {base} mod {p}")))
}

/// What the precomputation attack learned from one ciphertext.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBaseRecovery {
    /// `x = log_h(c)` for `h = g³`.
    pub exponent: Natural,
    /// `g^x mod p`, the padded plaintext.
    pub padded: Natural,
    /// Cost of the online exponentiation through the precomputed table.
    pub depth: DepthTrace,
    pub table_entries: usize,
}

impl FixedBaseRecovery {
    /// Strips the padding from the recovered value.
    pub fn message(&self, params: &PuzzleParams) -> Result<Vec<u8>> {
        unpad(&self.padded, params.n())
    }
}

/// Recovers the padded plaintext of `ct` without the sequential
/// exponentiation: with `h = g³` and `x = log_h(c)`, `g^x ≡ m`, and `g^x` is
/// assembled from the table of `g^(2^i)` in logarithmic depth. `g` must
/// generate `Z_p*`; `oracle(base, target, p)` returns a discrete logarithm.
pub fn fixed_base_attack_demo<F>(
    params: &PuzzleParams,
    ct: &Ciphertext,
    g: &Natural,
    oracle: F,
) -> Result<FixedBaseRecovery>
where
    F: Fn(&Natural, &Natural, &Natural) -> Result<Natural>,
{
    if ct.fingerprint != params.fingerprint() {
        return Err(Error::WrongKey("ciphertext was produced under a different prime".into()));
    }
    let p = params.p();
    if !is_safe_prime_generator(g, p) {
        return Err(Error::parameter("g does not generate Z_p*"));
    }
    let table = FixedBaseTable::new(g, p)?;
    let h = g.modpow(&Natural::from(3u32), p);
    let exponent = oracle(&h, &ct.c, p)?;
    let (padded, depth) = powmod_fixed_base(&table, &exponent)?;
    Ok(FixedBaseRecovery { exponent, padded, depth, table_entries: table.len() })
}

/// Generator test for `Z_p*` with `p = 2q + 1`: `g` generates unless its
/// order divides 2 or `q`.
pub fn is_safe_prime_generator(g: &Natural, p: &Natural) -> bool {
    let one = Natural::one();
    if g.is_zero() || g >= p {
        return false;
    }
    let q: Natural = (p - 1u32) >> 1;
    g.modpow(&Natural::from(2u32), p) != one && g.modpow(&q, p) != one
}

/// Expected bit length of an exponent drawn uniformly from `[1, p − 1]`:
/// `n − 2 + (2(p − 2^(n−1)) + n − 1)/(p − 1)` with `n = bits(p)`.
pub fn expected_exponent_bits(p: &Natural) -> Result<BigRational> {
    if p < &Natural::from(3u32) {
        return Err(Error::parameter("need p ≥ 3"));
    }
    let n = BigInt::from(p.bits());
    let p = BigInt::from(p.clone());
    let half = BigInt::one() << (p.bits() - 1);
    let frac = BigRational::new(BigInt::from(2) * (&p - half) + &n - 1, &p - 1);
    Ok(BigRational::from_integer(n - 2) + frac)
}

/// Exact mean bit length of `x` over `x ∈ [1, p − 1]`, by enumeration.
pub fn mean_exponent_bits(p: u64) -> Result<BigRational> {
    if p < 3 {
        return Err(Error::parameter("need p ≥ 3"));
    }
    let total: u64 = (1..p).map(|x| u64::from(64 - x.leading_zeros())).sum();
    Ok(BigRational::new(BigInt::from(total), BigInt::from(p - 1)))
}

/// Storage for `g^(2^i)`, `i ∈ 1..n`, at `n` bits each: `n(n − 1)` bits.
pub fn fixed_base_table_bits(n: u64) -> u128 {
    u128::from(n) * u128::from(n.saturating_sub(1))
}

/// [`fixed_base_table_bits`] in megabytes of `2^20` bytes.
pub fn fixed_base_table_megabytes(n: u64) -> f64 {
    let bytes = fixed_base_table_bits(n).div_ceil(8);
    bytes as f64 / f64::from(1u32 << 20)
}
