use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::Natural;
use crate::{Error, Result};

/// Operands below this many bits are handed to the backend multiplier.
const THRESHOLD_BITS: u64 = 512;

/// `a * b` by Toom-Cook splitting into `k` parts (`k = 2` is Karatsuba).
///
/// The outermost call always splits, so the scheme is exercised even for
/// small operands; recursive calls fall back to the backend below a
/// threshold.
pub fn mul_toom(a: &Natural, b: &Natural, k: u32) -> Result<Natural> {
    if k != 2 && k != 3 {
        return Err(Error::parameter("Toom-Cook is implemented for k = 2 and k = 3"));
    }
    let a = BigInt::from(a.clone());
    let b = BigInt::from(b.clone());
    let product = toom(&a, &b, k, 0);
    Ok(product.to_biguint().expect("product of naturals is nonnegative"))
}

fn toom(a: &BigInt, b: &BigInt, k: u32, level: u32) -> BigInt {
    let n = a.bits().max(b.bits());
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    if n < u64::from(k) || (level > 0 && n < THRESHOLD_BITS) {
        return a * b;
    }
    // Signed operands only arise from evaluation at -1; the split works on magnitudes.
    if a.is_negative() || b.is_negative() {
        let sign = if a.sign() == b.sign() { Sign::Plus } else { Sign::Minus };
        let m = toom(&BigInt::from(a.magnitude().clone()), &BigInt::from(b.magnitude().clone()), k, level);
        return BigInt::from_biguint(sign, m.magnitude().clone());
    }
    let shift = n / u64::from(k);
    let pa = split(a, shift, k);
    let pb = split(b, shift, k);
    let rec = |x: &BigInt, y: &BigInt| toom(x, y, k, level + 1);
    let coeffs = match k {
        2 => {
            let v0 = rec(&pa[0], &pb[0]);
            let v1 = rec(&(&pa[0] + &pa[1]), &(&pb[0] + &pb[1]));
            let vinf = rec(&pa[1], &pb[1]);
            let c1 = &v1 - &v0 - &vinf;
            vec![v0, c1, vinf]
        }
        _ => {
            let eval = |p: &[BigInt]| {
                let at1 = &p[0] + &p[1] + &p[2];
                let atm1 = &p[0] - &p[1] + &p[2];
                let at2 = &p[0] + (&p[1] << 1) + (&p[2] << 2);
                (at1, atm1, at2)
            };
            let (a1, am1, a2) = eval(&pa);
            let (b1, bm1, b2) = eval(&pb);
            let v0 = rec(&pa[0], &pb[0]);
            let v1 = rec(&a1, &b1);
            let vm1 = rec(&am1, &bm1);
            let v2 = rec(&a2, &b2);
            let vinf = rec(&pa[2], &pb[2]);
            let c2 = ((&v1 + &vm1) >> 1) - &v0 - &vinf;
            let s = (&v1 - &vm1) >> 1;
            let t = &v2 - &v0 - (&c2 << 2) - (&vinf << 4);
            let c3 = ((t >> 1) - &s) / 3;
            let c1 = &s - &c3;
            vec![v0, c1, c2, c3, vinf]
        }
    };
    coeffs.into_iter().enumerate().fold(BigInt::zero(), |acc, (i, c)| acc + (c << (shift * i as u64)))
}

/// Splits a nonnegative `x` into `k` digits base `2^shift`, least significant
/// first; the top digit keeps whatever remains.
fn split(x: &BigInt, shift: u64, k: u32) -> Vec<BigInt> {
    let mask = (BigInt::from(1) << shift) - 1;
    let mut rest = x.clone();
    let mut parts = Vec::with_capacity(k as usize);
    for _ in 0..k - 1 {
        parts.push(&rest & &mask);
        rest >>= shift;
    }
    parts.push(rest);
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn zero_operand() {
        let b = Natural::from(12345u32);
        assert!(mul_toom(&Natural::zero(), &b, 2).unwrap().is_zero());
        assert!(mul_toom(&b, &Natural::zero(), 3).unwrap().is_zero());
    }

    #[test]
    fn all_ones_word() {
        let x = (Natural::one() << 64u32) - 1u32;
        for k in [2, 3] {
            assert_eq!(mul_toom(&x, &x, k).unwrap(), &x * &x);
        }
    }

    #[test]
    fn tiny_operands() {
        for a in 0u32..40 {
            for b in 0u32..40 {
                for k in [2, 3] {
                    let got = mul_toom(&Natural::from(a), &Natural::from(b), k).unwrap();
                    assert_eq!(got, Natural::from(a * b));
                }
            }
        }
    }

    #[test]
    fn rejects_other_k() {
        assert!(mul_toom(&Natural::one(), &Natural::one(), 4).is_err());
    }
}
