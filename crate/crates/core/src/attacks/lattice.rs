use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Largest lattice dimension handled by the exact-rational routines.
pub const MAX_LATTICE_DIM: usize = 16;

/// A lattice given by integer row vectors that are linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    vectors: Vec<Vec<BigInt>>,
}

/// Gram–Schmidt data: orthogonal vectors `b*_i`, their squared norms and the
/// coefficients `μ_ij = (b_i · b*_j)/‖b*_j‖²`.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub ortho: Vec<Vec<BigRational>>,
    pub norms: Vec<BigRational>,
    pub mu: Vec<Vec<BigRational>>,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        if vectors.is_empty() || dim == 0 {
            return Err(Error::parameter("empty lattice basis"));
        }
        if vectors.len() > MAX_LATTICE_DIM || dim > MAX_LATTICE_DIM {
            return Err(Error::capacity(format!("lattice dimension above {MAX_LATTICE_DIM}")));
        }
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::parameter("basis vectors differ in length"));
        }
        let basis = LatticeBasis { vectors };
        if basis.gram_schmidt().norms.iter().any(Zero::is_zero) {
            return Err(Error::parameter("basis vectors are linearly dependent"));
        }
        Ok(basis)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    /// Number of basis vectors.
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Length of each vector.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn gram_schmidt(&self) -> GramSchmidt {
        gram_schmidt(&self.vectors)
    }

    /// LLL-reduced basis of the same lattice.
    pub fn lll(&self, delta: &BigRational) -> Result<LatticeBasis> {
        Ok(self.lll_with_transform(delta)?.0)
    }

    /// LLL reduction with exact rational Gram–Schmidt data. Also returns the
    /// unimodular `U` with `reduced = U · self`.
    pub fn lll_with_transform(&self, delta: &BigRational) -> Result<(LatticeBasis, Vec<Vec<BigInt>>)> {
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        if delta <= &quarter || delta > &BigRational::one() {
            return Err(Error::parameter("LLL needs 1/4 < δ ≤ 1"));
        }
        let n = self.rank();
        let mut b = self.vectors.clone();
        let mut u: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        let mut gs = gram_schmidt(&b);
        let mut k = 1;
        while k < n {
            for j in (0..k).rev() {
                let q = round_half_up(&gs.mu[k][j]);
                if q.is_zero() {
                    continue;
                }
                let (bj, uj) = (b[j].clone(), u[j].clone());
                axpy(&mut b[k], &q, &bj);
                axpy(&mut u[k], &q, &uj);
                let qr = BigRational::from_integer(q);
                for i in 0..j {
                    let delta_mu = &qr * &gs.mu[j][i];
                    gs.mu[k][i] -= delta_mu;
                }
                gs.mu[k][j] -= &qr;
            }
            let mu = &gs.mu[k][k - 1];
            let bound = (delta - mu * mu) * &gs.norms[k - 1];
            if gs.norms[k] >= bound {
                k += 1;
            } else {
                b.swap(k, k - 1);
                u.swap(k, k - 1);
                gs = gram_schmidt(&b);
                k = (k - 1).max(1);
            }
        }
        Ok((LatticeBasis { vectors: b }, u))
    }

    /// Size reduction `|μ_ij| ≤ 1/2` for all `j < i`.
    pub fn is_size_reduced(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let gs = self.gram_schmidt();
        gs.mu.iter().enumerate().all(|(i, row)| row[..i].iter().all(|m| m.abs() <= half))
    }

    /// Lovász condition `‖b*_k‖² ≥ (δ − μ²_{k,k−1})‖b*_{k−1}‖²` for all `k`.
    pub fn satisfies_lovasz(&self, delta: &BigRational) -> bool {
        let gs = self.gram_schmidt();
        (1..self.rank()).all(|k| {
            let mu = &gs.mu[k][k - 1];
            gs.norms[k] >= (delta - mu * mu) * &gs.norms[k - 1]
        })
    }
}

/// The LLL parameter used throughout, `δ = 3/4`.
pub fn lll_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> GramSchmidt {
    let n = b.len();
    let mut ortho: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let bi: Vec<BigRational> = b[i].iter().cloned().map(BigRational::from_integer).collect();
        let mut v = bi.clone();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            mu[i][j] = dot(&bi, &ortho[j]) / &norms[j];
            for (vc, oc) in v.iter_mut().zip(&ortho[j]) {
                *vc -= &mu[i][j] * oc;
            }
        }
        mu[i][i] = BigRational::one();
        norms.push(dot(&v, &v));
        ortho.push(v);
    }
    GramSchmidt { ortho, norms, mu }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Nearest integer, ties rounded up: `⌊y + 1/2⌋`.
pub fn round_half_up(y: &BigRational) -> BigInt {
    (y + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Babai's nearest-plane algorithm: LLL-reduces the basis with `δ = 3/4`,
/// then for `j` from last to first subtracts `⌈(x·b*_j)/‖b*_j‖²⌋ b_j` from
/// the running `x`, and returns the lattice vector `t − x`.
pub fn babai_cvp(basis: &LatticeBasis, target: &[BigRational]) -> Result<Vec<BigInt>> {
    if target.len() != basis.dim() {
        return Err(Error::parameter("target length differs from the lattice dimension"));
    }
    let reduced = basis.lll(&lll_delta())?;
    let gs = reduced.gram_schmidt();
    let mut x = target.to_vec();
    for j in (0..reduced.rank()).rev() {
        let c = round_half_up(&(dot(&x, &gs.ortho[j]) / &gs.norms[j]));
        if c.is_zero() {
            continue;
        }
        for (xc, bc) in x.iter_mut().zip(&reduced.vectors[j]) {
            *xc -= BigRational::from_integer(&c * bc);
        }
    }
    let out: Vec<BigRational> = target.iter().zip(&x).map(|(t, r)| t - r).collect();
    Ok(out.into_iter().map(|v| v.to_integer()).collect())
}
