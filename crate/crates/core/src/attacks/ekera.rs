use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::lattice::{babai_cvp, LatticeBasis};
use super::poly::pow_u64;
use crate::bigmath::{is_prime_u64, powmod_fixed_base, FixedBaseTable, Natural};
use crate::{Error, Result};

/// Largest prime accepted by the simulation.
pub const MAX_EKERA_PRIME: u64 = (1 << 12) - 1;
/// Largest `m + 2l`, the base-2 log of the number of `(j, k)` outcomes.
pub const MAX_EKERA_STATE_BITS: u32 = 24;

/// Parameters of one quantum discrete-log experiment: recover `log_g x` in
/// `Z_p*`, with `2^(m−1) ≤ p < 2^m` and a `b` register of `l = ⌈m/s⌉` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkeraInstance {
    pub p: u64,
    pub g: u64,
    pub x: u64,
    pub m: u32,
    pub s: u32,
    pub l: u32,
}

impl EkeraInstance {
    pub fn new(p: u64, g: u64, x: u64, s: u32) -> Result<Self> {
        if p > MAX_EKERA_PRIME {
            return Err(Error::capacity("simulation needs p below 2^12"));
        }
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::parameter(format!("{p} is not an odd prime")));
        }
        if s == 0 {
            return Err(Error::parameter("trade-off factor s must be positive"));
        }
        if x == 0 || x >= p {
            return Err(Error::parameter("target must lie in [1, p)"));
        }
        if multiplicative_order(g, p) != Some(p - 1) {
            return Err(Error::parameter(format!("{g} does not generate Z_{p}*")));
        }
        let m = 64 - p.leading_zeros();
        let l = m.div_ceil(s);
        if m + 2 * l > MAX_EKERA_STATE_BITS {
            return Err(Error::capacity(format!("m + 2l = {} exceeds {MAX_EKERA_STATE_BITS}", m + 2 * l)));
        }
        Ok(EkeraInstance { p, g, x, m, s, l })
    }

    /// `2^(m+l)`, the size of the `a` register and of the transform on it.
    pub fn a_size(&self) -> usize {
        1 << (self.m + self.l)
    }

    /// `2^l`, the size of the `b` register.
    pub fn b_size(&self) -> usize {
        1 << self.l
    }

    /// The discrete logarithm by enumeration, in `[1, p − 1]`.
    pub fn true_log(&self) -> u64 {
        let mut acc = 1;
        for d in 1..self.p {
            acc = acc * self.g % self.p;
            if acc == self.x {
                return d;
            }
        }
        unreachable!("g generates Z_p*")
    }
}

/// Order of `g` in `Z_p*` by enumeration; `None` when `g ≡ 0`.
pub fn multiplicative_order(g: u64, p: u64) -> Option<u64> {
    if g.is_multiple_of(p) {
        return None;
    }
    let mut acc = g % p;
    let mut order = 1;
    while acc != 1 {
        acc = acc * g % p;
        order += 1;
    }
    Some(order)
}

/// Exact distribution of the measured `(j, k)`, indexed `k · 2^(m+l) + j`.
#[derive(Clone, Debug)]
pub struct EkeraDistribution {
    a_size: usize,
    b_size: usize,
    probs: Vec<f64>,
}

impl EkeraDistribution {
    pub fn prob(&self, j: u64, k: u64) -> f64 {
        self.probs[k as usize * self.a_size + j as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn sampler(&self) -> Result<EkeraSampler> {
        let index = WeightedIndex::new(&self.probs).map_err(|e| Error::parameter(e.to_string()))?;
        Ok(EkeraSampler { index, a_size: self.a_size })
    }

    /// Total-variation distance between this distribution and the empirical
    /// distribution of `samples`.
    pub fn total_variation(&self, samples: &[(u64, u64)]) -> f64 {
        let mut counts = vec![0u64; self.probs.len()];
        for &(j, k) in samples {
            counts[k as usize * self.a_size + j as usize] += 1;
        }
        let n = samples.len() as f64;
        0.5 * counts.iter().zip(&self.probs).map(|(&c, &p)| (c as f64 / n - p).abs()).sum::<f64>()
    }

    pub fn outcomes(&self) -> (usize, usize) {
        (self.a_size, self.b_size)
    }
}

/// Draws `(j, k)` pairs from an [`EkeraDistribution`].
#[derive(Clone, Debug)]
pub struct EkeraSampler {
    index: WeightedIndex<f64>,
    a_size: usize,
}

impl EkeraSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        let i = self.index.sample(rng);
        ((i % self.a_size) as u64, (i / self.a_size) as u64)
    }
}

/// Exact post-measurement distribution. The register state is
/// `Σ_{a,b} |a, b, g^a x^(−b)⟩`; after the transforms of sizes `2^(m+l)` and
/// `2^l`, outcome `(j, k, y)` has amplitude
/// `Σ_{g^a x^(−b) = y} e^(2πi(aj/2^(m+l) + bk/2^l)) / (2^(m+l) 2^l)`.
/// Each `y` contributes the squared magnitude of a 2-D inverse FFT of its
/// indicator; the `y` range is split into fixed chunks whose partial sums are
/// added in order, so the result does not depend on scheduling.
pub fn ekera_distribution(inst: &EkeraInstance) -> Result<EkeraDistribution> {
    let (a_size, b_size) = (inst.a_size(), inst.b_size());
    let p = inst.p;
    let table = FixedBaseTable::with_len(&Natural::from(inst.g), &Natural::from(p), (inst.m + inst.l) as usize)?;
    let ga: Vec<u64> = (0..a_size)
        .map(|a| {
            let (v, _) = powmod_fixed_base(&table, &Natural::from(a))?;
            Ok(v.to_u64().expect("reduced below p"))
        })
        .collect::<Result<_>>()?;
    let x_inv = pow_u64(inst.x, p - 2, p);
    let xb: Vec<u64> = (0..b_size as u64).map(|b| pow_u64(x_inv, b, p)).collect();

    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_inverse(a_size);
    let col_fft = planner.plan_fft_inverse(b_size);
    let ys: Vec<u64> = (1..p).collect();
    let chunks: Vec<&[u64]> = ys.chunks(ys.len().div_ceil(8)).collect();
    let partials: Vec<Vec<f64>> = chunks
        .par_iter()
        .map(|chunk| {
            let mut acc = vec![0f64; a_size * b_size];
            let mut grid = vec![Complex64::zero(); a_size * b_size];
            let mut column = vec![Complex64::zero(); b_size];
            for &y in chunk.iter() {
                grid.iter_mut().for_each(|c| *c = Complex64::zero());
                for (b, &xv) in xb.iter().enumerate() {
                    let row = &mut grid[b * a_size..(b + 1) * a_size];
                    for (a, &gv) in ga.iter().enumerate() {
                        if gv * xv % p == y {
                            row[a] = Complex64::new(1.0, 0.0);
                        }
                    }
                }
                for row in grid.chunks_mut(a_size) {
                    row_fft.process(row);
                }
                for j in 0..a_size {
                    for k in 0..b_size {
                        column[k] = grid[k * a_size + j];
                    }
                    col_fft.process(&mut column);
                    for k in 0..b_size {
                        acc[k * a_size + j] += column[k].norm_sqr();
                    }
                }
            }
            acc
        })
        .collect();
    let scale = ((a_size * b_size) as f64).powi(2);
    let mut probs = vec![0f64; a_size * b_size];
    for part in &partials {
        for (p, v) in probs.iter_mut().zip(part) {
            *p += v;
        }
    }
    probs.iter_mut().for_each(|v| *v /= scale);
    Ok(EkeraDistribution { a_size, b_size, probs })
}

/// One run of the experiment: samples a single `(j, k)` from the exact
/// distribution.
pub fn ekera_simulate<R: Rng + ?Sized>(inst: &EkeraInstance, rng: &mut R) -> Result<(u64, u64)> {
    Ok(ekera_distribution(inst)?.sampler()?.sample(rng))
}

/// The centering map `f(x) = (x mod N) − N⌊(x mod N)/(N/2)⌋`, `N = 2^(m+l)`,
/// with range `[−N/2, N/2)`.
pub fn center(x: &BigInt, m: u32, l: u32) -> BigInt {
    let n = BigInt::from(1) << (m + l);
    let r = ((x % &n) + &n) % &n;
    let half = &n >> 1;
    let wrap = &r / &half;
    r - n * wrap
}

/// Raw post-processing output: the last coordinate of the lattice vector
/// closest to `v = (f(−2^m k_1), …, f(−2^m k_n), 0)` in the lattice spanned
/// by `(j_1, …, j_n, 1)` and `2^(m+l) e_i`.
pub fn ekera_postprocess_raw(pairs: &[(u64, u64)], m: u32, s: u32) -> Result<BigInt> {
    if pairs.is_empty() {
        return Err(Error::parameter("post-processing needs at least one pair"));
    }
    if s == 0 {
        return Err(Error::parameter("trade-off factor s must be positive"));
    }
    let l = m.div_ceil(s);
    let n = pairs.len();
    let modulus = BigInt::from(1) << (m + l);
    let mut rows = Vec::with_capacity(n + 1);
    let mut first: Vec<BigInt> = pairs.iter().map(|&(j, _)| BigInt::from(j)).collect();
    first.push(BigInt::from(1));
    rows.push(first);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = modulus.clone();
        rows.push(row);
    }
    let basis = LatticeBasis::new(rows).map_err(|e| Error::AttackFailed(format!("degenerate lattice: {e}")))?;
    let shift = BigInt::from(1) << m;
    let mut v: Vec<BigRational> =
        pairs.iter().map(|&(_, k)| BigRational::from_integer(center(&(-&shift * BigInt::from(k)), m, l))).collect();
    v.push(BigRational::zero());
    let u = babai_cvp(&basis, &v)?;
    Ok(u[n].clone())
}

/// Discrete logarithm from measured pairs: the raw last coordinate reduced
/// into `[0, order)`, where `order` is the order of `g`.
pub fn ekera_postprocess(pairs: &[(u64, u64)], m: u32, s: u32, order: u64) -> Result<Natural> {
    if order == 0 {
        return Err(Error::parameter("group order must be positive"));
    }
    let raw = ekera_postprocess_raw(pairs, m, s)?;
    let order = BigInt::from(order);
    let d = ((raw % &order) + &order) % &order;
    Ok(d.to_biguint().expect("reduced into [0, order)"))
}

/// One end-to-end trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkeraTrial {
    pub pairs: Vec<(u64, u64)>,
    pub recovered: Natural,
    pub ok: bool,
}

/// Samples `n` pairs and post-processes them; `ok` when `g^d ≡ x`.
pub fn ekera_trial<R: Rng + ?Sized>(
    inst: &EkeraInstance,
    sampler: &EkeraSampler,
    n: usize,
    rng: &mut R,
) -> Result<EkeraTrial> {
    let pairs: Vec<(u64, u64)> = (0..n).map(|_| sampler.sample(rng)).collect();
    let recovered = ekera_postprocess(&pairs, inst.m, inst.s, inst.p - 1)?;
    let d = recovered.to_u64().expect("below p");
    let ok = pow_u64(inst.g, d, inst.p) == inst.x;
    Ok(EkeraTrial { pairs, recovered, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn instance_validation() {
        let inst = EkeraInstance::new(23, 5, 5, 1).unwrap();
        assert_eq!((inst.m, inst.l), (5, 5));
        assert!(EkeraInstance::new(23, 2, 5, 1).is_err());
        assert!(matches!(EkeraInstance::new(4093, 2, 5, 1), Err(Error::Capacity(_))));
        assert_eq!(EkeraInstance::new(23, 5, 5u64.pow(7) % 23, 2).unwrap().l, 3);
        let inst = EkeraInstance::new(23, 5, 17, 1).unwrap();
        assert_eq!(pow_u64(5, inst.true_log(), 23), 17);
    }

    #[test]
    fn distribution_normalizes() {
        for (p, g, s) in [(5, 2, 1), (7, 3, 2), (23, 5, 1), (59, 2, 2)] {
            let inst = EkeraInstance::new(p, g, g, s).unwrap();
            let total = ekera_distribution(&inst).unwrap().total();
            assert!((total - 1.0).abs() < 1e-9, "p={p}: {total}");
        }
    }

    #[test]
    fn centering_range() {
        let (m, l) = (3, 2);
        let n = 1i64 << (m + l);
        for x in -200..200 {
            let f = center(&BigInt::from(x), m, l);
            assert!(f >= BigInt::from(-n / 2) && f < BigInt::from(n / 2));
            assert_eq!(((f - x) % n + n) % n, BigInt::zero());
        }
        assert_eq!(center(&BigInt::from(n / 2), m, l), BigInt::from(-n / 2));
    }

    #[test]
    fn pipeline_recovers_log_at_23() {
        let inst = EkeraInstance::new(23, 5, 5u64.pow(7) % 23, 1).unwrap();
        let sampler = ekera_distribution(&inst).unwrap().sampler().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let wins = (0..50).filter(|_| ekera_trial(&inst, &sampler, 2, &mut rng).unwrap().ok).count();
        assert!(wins >= 25, "{wins}/50");
    }
}
