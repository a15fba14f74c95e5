use std::collections::BTreeMap;

use num_integer::Integer;

use crate::{Error, Result};

/// Largest modulus the enumeration oracle accepts.
pub const MAX_UNIT_GROUP_MODULUS: u64 = 10_000;

/// One unit of `Z_m*` with the size of its cube-root exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitEntry {
    pub x: u64,
    pub order: u64,
    /// Bit length of `3^-1 mod ord(x)`, or `None` when 3 divides the order
    /// and no cube-root exponent exists. The exponent 0 (for `x = 1`) has
    /// bit length 0.
    pub exponent_bits: Option<u32>,
}

/// Exhaustive count of how many units of `Z_m*` have a cheap cube root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupReport {
    pub m: u64,
    pub units: Vec<UnitEntry>,
    /// Largest cube-root exponent bit length, `H_m`.
    pub h: u32,
}

impl UnitGroupReport {
    /// Size of `H^eps_m`: units whose exponent is within `eps - 1` bits of `H_m`.
    pub fn hard_count(&self, eps: u32) -> u64 {
        self.units.iter().filter(|u| matches!(u.exponent_bits, Some(b) if self.h - b < eps)).count() as u64
    }

    /// `K^eps_m = |Z_m*| - |H^eps_m|`.
    pub fn k(&self, eps: u32) -> u64 {
        self.units.len() as u64 - self.hard_count(eps)
    }

    /// `K^eps_m` for every `eps` in `1..=H_m`.
    pub fn k_map(&self) -> BTreeMap<u32, u64> {
        (1..=self.h.max(1)).map(|e| (e, self.k(e))).collect()
    }

    /// Units of order 1 or 2.
    pub fn trivial_units(&self) -> Vec<u64> {
        self.units.iter().filter(|u| u.order <= 2).map(|u| u.x).collect()
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn totient(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

/// Multiplicative order of `x`, found by stripping prime factors from `phi`.
fn order(x: u64, m: u64, phi: u64, factors: &[u64]) -> u64 {
    let mut ord = phi;
    for &f in factors {
        while ord.is_multiple_of(f) && pow_mod(x, ord / f, m) == 1 {
            ord /= f;
        }
    }
    ord
}

fn inverse_of_three(order: u64) -> Option<u64> {
    if order == 1 {
        return Some(0);
    }
    let g = 3i64.extended_gcd(&(order as i64));
    (g.gcd == 1).then(|| g.x.rem_euclid(order as i64) as u64)
}

/// Enumerates `Z_m*`, computing every unit's order and cube-root exponent.
pub fn unit_group_oracle(m: u64) -> Result<UnitGroupReport> {
    if m < 2 {
        return Err(Error::parameter("modulus must be at least 2"));
    }
    if m > MAX_UNIT_GROUP_MODULUS {
        return Err(Error::capacity(format!("enumeration is limited to m <= {MAX_UNIT_GROUP_MODULUS}")));
    }
    let phi = totient(m);
    let factors = prime_factors(phi);
    let units: Vec<UnitEntry> = (1..m)
        .filter(|x| x.gcd(&m) == 1)
        .map(|x| {
            let ord = order(x, m, phi, &factors);
            let exponent_bits = inverse_of_three(ord).map(|b| 64 - b.leading_zeros());
            UnitEntry { x, order: ord, exponent_bits }
        })
        .collect();
    let h = units.iter().filter_map(|u| u.exponent_bits).max().unwrap_or(0);
    Ok(UnitGroupReport { m, units, h })
}
