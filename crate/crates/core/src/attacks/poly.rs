use std::fmt;

use crate::{Error, Result};

/// Polynomial over `Z_p` with coefficients stored low degree first. The
/// representation is always trimmed, so the zero polynomial is empty and any
/// other polynomial has a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModP {
    coeffs: Vec<u64>,
    p: u64,
}

/// Largest modulus accepted; keeps every coefficient product inside `u64`.
pub const MAX_POLY_MODULUS: u64 = 1 << 32;

impl PolyModP {
    pub fn new(coeffs: &[u64], p: u64) -> Result<Self> {
        if !(2..=MAX_POLY_MODULUS).contains(&p) {
            return Err(Error::parameter(format!("polynomial modulus {p} outside [2, 2^32]")));
        }
        let mut poly = PolyModP { coeffs: coeffs.iter().map(|c| c % p).collect(), p };
        poly.trim();
        Ok(poly)
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { coeffs: Vec::new(), p }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        let mut poly = PolyModP { coeffs: vec![c % p], p };
        poly.trim();
        poly
    }

    /// The monomial `z`.
    pub fn z(p: u64) -> Self {
        PolyModP { coeffs: vec![0, 1], p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "polynomials over different rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        let mut out = PolyModP { coeffs, p: self.p };
        out.trim();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_ring(other);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        let mut out = PolyModP { coeffs, p: self.p };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b % self.p) % self.p;
            }
        }
        let mut out = PolyModP { coeffs, p: self.p };
        out.trim();
        out
    }

    pub fn scale(&self, k: u64) -> Self {
        let mut out = PolyModP { coeffs: self.coeffs.iter().map(|&c| c * (k % self.p) % self.p).collect(), p: self.p };
        out.trim();
        out
    }

    /// Quotient and remainder. Requires a prime modulus so the divisor's
    /// leading coefficient is invertible.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_ring(divisor);
        let d = divisor.degree().ok_or_else(|| Error::parameter("division by the zero polynomial"))?;
        let inv = inv_mod(divisor.leading(), self.p)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let c = rem[top] * inv % self.p;
            let shift = top - d;
            quot[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + self.p - c * b % self.p) % self.p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        let mut q = PolyModP { coeffs: quot, p: self.p };
        q.trim();
        Ok((q, PolyModP { coeffs: rem, p: self.p }))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// `(self · other) mod h`.
    pub fn mul_mod(&self, other: &Self, h: &Self) -> Result<Self> {
        self.mul(other).rem(h)
    }

    /// `self^e mod h` by square and multiply.
    pub fn pow_mod(&self, mut e: u64, h: &Self) -> Result<Self> {
        let mut base = self.rem(h)?;
        let mut acc = Self::constant(1, self.p).rem(h)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, h)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, h)?;
            }
        }
        Ok(acc)
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.scale(inv_mod(self.leading(), self.p)?))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_ring(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * x % self.p + c) % self.p)
    }

    /// Distinct roots in `Z_p`, ascending. Isolates the split part with
    /// `gcd(f, z^p − z)` and separates it by Cantor–Zassenhaus splitting with
    /// the deterministic shifts `z + δ`, `δ = 0, 1, …`.
    pub fn roots(&self) -> Result<Vec<u64>> {
        if self.is_zero() {
            return Err(Error::parameter("every element is a root of the zero polynomial"));
        }
        let p = self.p;
        if p == 2 {
            return Ok((0..2).filter(|&x| self.eval(x) == 0).collect());
        }
        let z = Self::z(p);
        let frob = z.pow_mod(p, self)?.sub(&z);
        let split = self.gcd(&frob)?;
        let mut roots = Vec::new();
        split_linear(&split, &mut roots)?;
        roots.sort_unstable();
        Ok(roots)
    }
}

fn split_linear(f: &PolyModP, roots: &mut Vec<u64>) -> Result<()> {
    let p = f.p;
    match f.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let f = f.monic()?;
            roots.push((p - f.coeffs[0]) % p);
            return Ok(());
        }
        Some(_) => {}
    }
    let one = PolyModP::constant(1, p);
    for delta in 0..p {
        let shifted = PolyModP::new(&[delta, 1], p)?;
        let half = shifted.pow_mod((p - 1) / 2, f)?.sub(&one);
        let g = f.gcd(&half)?;
        let d = g.degree().unwrap_or(0);
        if d > 0 && Some(d) < f.degree() {
            let (other, _) = f.div_rem(&g)?;
            split_linear(&g, roots)?;
            return split_linear(&other, roots);
        }
    }
    Err(Error::AttackFailed("root splitting found no separating shift".into()))
}

/// Inverse modulo a prime via Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a.is_multiple_of(p) {
        return Err(Error::parameter("zero has no inverse"));
    }
    Ok(pow_u64(a % p, p - 2, p))
}

pub(crate) fn pow_u64(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut b = base as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{i}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u64], p: u64) -> PolyModP {
        PolyModP::new(c, p).unwrap()
    }

    #[test]
    fn trims_and_reduces() {
        let f = poly(&[24, 0, 23, 0], 23);
        assert_eq!(f.coeffs(), &[1]);
        assert_eq!(f.degree(), Some(0));
        assert!(poly(&[0, 23], 23).is_zero());
    }

    #[test]
    fn division_identity() {
        let a = poly(&[3, 1, 4, 1, 5, 9, 2, 6], 101);
        let b = poly(&[5, 3, 5], 101);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn gcd_of_products() {
        let p = 101;
        let common = poly(&[7, 1], p).mul(&poly(&[9, 1], p));
        let a = common.mul(&poly(&[2, 1], p));
        let b = common.mul(&poly(&[3, 0, 1], p));
        assert_eq!(a.gcd(&b).unwrap(), common);
    }

    #[test]
    fn fermat_in_quotient_ring() {
        let p = 23;
        let h = poly(&[1, 2, 0, 1], p);
        let z = PolyModP::z(p);
        let zp = z.pow_mod(p, &h).unwrap();
        assert_eq!(zp, z.pow_mod(1, &h).unwrap().pow_mod(p, &h).unwrap());
        let naive = (0..p).fold(PolyModP::constant(1, p), |acc, _| acc.mul_mod(&z, &h).unwrap());
        assert_eq!(zp, naive);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let p = 1019;
        let f = [5u64, 77, 300, 1018].iter().fold(PolyModP::constant(1, p), |acc, &r| acc.mul(&poly(&[p - r, 1], p)));
        let irreducible = poly(&[1, 0, 1], p);
        assert_eq!(f.mul(&irreducible).roots().unwrap(), vec![5, 77, 300, 1018]);
    }

    #[test]
    fn inverse_and_eval() {
        assert_eq!(inv_mod(3, 7).unwrap() * 3 % 7, 1);
        assert!(inv_mod(0, 7).is_err());
        assert_eq!(poly(&[1, 2, 3], 7).eval(2), (1 + 4 + 12) % 7);
    }
}
