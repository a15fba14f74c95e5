use num_bigint::RandBigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::Natural;
use crate::{Error, Result};

/// Miller-Rabin rounds per number; each round errs with probability below 1/4.
const MR_ROUNDS: usize = 64;

/// Candidates are sieved by every odd prime below this bound before any
/// modular exponentiation.
const SIEVE_LIMIT: usize = 1 << 22;

/// Candidate offsets examined per sieve window.
const SIEVE_WINDOW: usize = 1 << 20;

fn small_primes() -> &'static [u32] {
    static PRIMES: std::sync::OnceLock<Vec<u32>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT];
        let mut out = Vec::new();
        for i in (3..SIEVE_LIMIT).step_by(2) {
            if !composite[i] {
                out.push(i as u32);
                for j in (i * i..SIEVE_LIMIT).step_by(2 * i) {
                    composite[j] = true;
                }
            }
        }
        out
    })
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for 64-bit integers (Miller-Rabin with a base
/// set known to be exact below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &Natural, d: &Natural, s: u64, a: &Natural) -> bool {
    let n1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with `rounds` random bases from `rng`; exact below 2^64.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &Natural, rounds: usize, rng: &mut R) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !n.bit(0) {
        return false;
    }
    for &p in small_primes().iter().take(256) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().expect("n > 1");
    let d = &n1 >> s;
    let two = Natural::from(2u32);
    let upper = &n1 - 1u32;
    (0..rounds).all(|_| {
        let a = rng.gen_biguint_range(&two, &upper);
        miller_rabin_round(n, &d, s, &a)
    })
}

/// True iff `p` and `(p - 1) / 2` are both prime. Exact below 2^64; above,
/// 64 Miller-Rabin rounds each with bases drawn deterministically from `p`.
pub fn is_safe_prime(p: &Natural) -> bool {
    if let Some(small) = p.to_u64() {
        return small >= 5 && is_prime_u64(small) && is_prime_u64((small - 1) / 2);
    }
    // Beyond 7 every safe prime is 11 mod 12.
    if (p % 12u32) != Natural::from(11u32) {
        return false;
    }
    let q: Natural = p >> 1u32;
    for &s in small_primes().iter().take(4096) {
        if (&q % s).is_zero() || (p % s).is_zero() {
            return false;
        }
    }
    let mut rng = ChaCha20Rng::from_seed(Sha256::digest(p.to_bytes_be()).into());
    // A base-2 check on p weeds out composites before the full test on q.
    let two = Natural::from(2u32);
    if two.modpow(&(p - 1u32), p) != Natural::one() {
        return false;
    }
    is_probable_prime(&q, MR_ROUNDS, &mut rng) && is_probable_prime(p, MR_ROUNDS, &mut rng)
}

/// Random safe prime of exactly `bits` bits.
///
/// Candidates `q = (p - 1) / 2` run through `q0 + 6i` from a random
/// `q0 = 5 mod 6`. A window of offsets is sieved at once: for each small
/// prime `s` the offsets making `q = 0` or `q = (s - 1)/2 (mod s)`, i.e.
/// `s | q` or `s | 2q + 1`, are struck out. Survivors get a base-2 Fermat
/// check on `q` and `p`, then 64 Miller-Rabin rounds on each.
pub fn gen_safe_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<Natural> {
    if bits < 3 {
        return Err(Error::parameter("safe primes need at least 3 bits"));
    }
    if bits <= 32 {
        return small_safe_prime(bits, rng);
    }
    let qbits = bits - 1;
    let primes = small_primes();
    let two = Natural::from(2u32);
    let mut struck = vec![false; SIEVE_WINDOW];
    loop {
        let mut q0 = rng.gen_biguint(qbits);
        q0.set_bit(qbits - 1, true);
        let r6 = (&q0 % 6u32).to_u64().unwrap();
        q0 += (11 - r6) % 6;
        struck.fill(false);
        for &s in primes.iter().skip(1) {
            let s = u64::from(s);
            let r = (&q0 % s).to_u64().unwrap();
            let inv6 = inverse_mod_u64(6, s);
            for bad in [0, (s - 1) / 2] {
                // q0 + 6i = bad (mod s)  <=>  i = (bad - r) / 6 (mod s)
                let mut i = mul_mod_u64((bad + s - r) % s, inv6, s) as usize;
                while i < SIEVE_WINDOW {
                    struck[i] = true;
                    i += s as usize;
                }
            }
        }
        for i in (0..SIEVE_WINDOW).filter(|&i| !struck[i]) {
            let q = &q0 + 6 * i as u64;
            if q.bits() != qbits {
                break;
            }
            let p: Natural = (&q << 1u32) + 1u32;
            if two.modpow(&(&q - 1u32), &q).is_one()
                && two.modpow(&(&p - 1u32), &p).is_one()
                && is_probable_prime(&q, MR_ROUNDS, rng)
                && is_probable_prime(&p, MR_ROUNDS, rng)
            {
                return Ok(p);
            }
        }
    }
}

fn inverse_mod_u64(a: u64, m: u64) -> u64 {
    pow_mod_u64(a, m - 2, m)
}

fn small_safe_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<Natural> {
    let lo = 1u64 << (bits - 1);
    let span = lo;
    let start = rng.gen_range(0..span);
    (0..span)
        .map(|i| lo + (start + i) % span)
        .find(|&p| p >= 5 && is_prime_u64(p) && is_prime_u64((p - 1) / 2))
        .map(Natural::from)
        .ok_or_else(|| Error::parameter(format!("no {bits}-bit safe prime exists")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u64_primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(!is_prime_u64(18_446_744_073_709_551_615));
    }

    #[test]
    fn small_safe_primes() {
        assert!(is_safe_prime(&Natural::from(23u32)));
        assert!(!is_safe_prime(&Natural::from(17u32)));
        assert!(!is_safe_prime(&Natural::from(2u32)));
        assert!(is_safe_prime(&Natural::from(5u32)));
    }

    #[test]
    fn big_safe_prime_and_near_misses() {
        // 2^127 - 1 is prime but 2^126 - 1 is not.
        let m127 = (Natural::one() << 127u32) - 1u32;
        assert!(!is_safe_prime(&m127));
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        assert!(is_probable_prime(&m127, 32, &mut rng));
        let p = gen_safe_prime(96, &mut rng).unwrap();
        assert_eq!(p.bits(), 96);
        assert!(is_safe_prime(&p));
    }

    #[test]
    fn five_bit_generation() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(gen_safe_prime(5, &mut rng).unwrap(), Natural::from(23u32));
        }
        assert!(gen_safe_prime(2, &mut rng).is_err());
    }
}
