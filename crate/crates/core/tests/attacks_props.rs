use cubelock::attacks::{
    babai_cvp, gcd_attack_swap_neighbors, lll_delta, swap_neighbors_chain2, LatticeBasis, PolyModP,
};
use cubelock::bigmath::Natural;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Determinant by Gaussian elimination over the rationals.
fn det(rows: &[Vec<BigInt>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            let f = &row[c] / &pivot[c];
            for (v, pv) in row.iter_mut().zip(&pivot).skip(c) {
                *v -= &f * pv;
            }
        }
    }
    d
}

fn mat_mul(u: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    u.iter().map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect()).collect()
}

fn basis_rows(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-40i64..=40, dim), dim)
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lll_is_unimodular_and_reduced(rows in (2usize..=5).prop_flat_map(basis_rows)) {
        let b = to_big(&rows);
        prop_assume!(!det(&b).is_zero());
        let basis = LatticeBasis::new(b.clone()).unwrap();
        let delta = lll_delta();
        let (reduced, u) = basis.lll_with_transform(&delta).unwrap();
        prop_assert_eq!(mat_mul(&u, &b), reduced.vectors().to_vec());
        prop_assert_eq!(det(&u).abs(), BigRational::one());
        prop_assert!(reduced.is_size_reduced());
        prop_assert!(reduced.satisfies_lovasz(&delta));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let gs = reduced.gram_schmidt();
        for i in 0..gs.mu.len() {
            for j in 0..i {
                prop_assert!(gs.mu[i][j].abs() <= half);
            }
        }
        // ‖b₁‖² ≤ 2^(n−1) λ₁², and λ₁ is at most the shortest input row.
        let norm2 = |v: &[BigInt]| v.iter().map(|x| x * x).sum::<BigInt>();
        let shortest = b.iter().map(|v| norm2(v)).min().unwrap();
        let bound = shortest << (rows.len() - 1);
        prop_assert!(norm2(&reduced.vectors()[0]) <= bound);
    }

    #[test]
    fn babai_within_its_bound_of_the_exhaustive_optimum(
        rows in basis_rows(3).prop_map(|r| r.into_iter().map(|v| v.into_iter().map(|x| x / 4).collect()).collect::<Vec<Vec<i64>>>()),
        target in prop::collection::vec(-600i64..=600, 3),
    ) {
        let b = to_big(&rows);
        prop_assume!(!det(&b).is_zero());
        let basis = LatticeBasis::new(b.clone()).unwrap();
        let t: Vec<BigRational> = target.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(7))).collect();
        let v = babai_cvp(&basis, &t).unwrap();

        // v lies in the lattice: its coordinates in the basis are integers.
        let d = det(&b);
        for row in 0..3 {
            let mut swapped = b.clone();
            swapped[row] = v.clone();
            let coeff = det(&swapped) / &d;
            prop_assert!(coeff.is_integer(), "coefficient {} is not integral", coeff);
        }

        // Exhaustive search in units of 1/7, on machine integers.
        let scaled = |w: [i64; 3]| -> i64 { (0..3).map(|k| (7 * w[k] - target[k]).pow(2)).sum() };
        let mut best = i64::MAX;
        for c0 in -20i64..=20 {
            for c1 in -20i64..=20 {
                for c2 in -20i64..=20 {
                    let w = [0, 1, 2].map(|k| c0 * rows[0][k] + c1 * rows[1][k] + c2 * rows[2][k]);
                    best = best.min(scaled(w));
                }
            }
        }
        let v64 = [0, 1, 2].map(|k| i64::try_from(&v[k]).unwrap());
        // ‖v − t‖ ≤ 2^(d/2) · dist(t, L) with d = 3.
        prop_assert!(scaled(v64) <= 8 * best);
    }

    #[test]
    fn poly_ring_matches_schoolbook(
        f in prop::collection::vec(0u64..1019, 0..12),
        g in prop::collection::vec(0u64..1019, 0..12),
        h in prop::collection::vec(0u64..1019, 1..8),
    ) {
        const P: u64 = 1019;
        let mut h = h;
        *h.last_mut().unwrap() = h.last().unwrap().max(&1).to_owned();
        let (pf, pg, ph) = (PolyModP::new(&f, P).unwrap(), PolyModP::new(&g, P).unwrap(), PolyModP::new(&h, P).unwrap());

        let mut prod = vec![0u64; f.len() + g.len()];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % P;
            }
        }
        let want = PolyModP::new(&prod, P).unwrap();
        prop_assert_eq!(pf.mul(&pg), want.clone());

        let (q, r) = want.div_rem(&ph).unwrap();
        prop_assert_eq!(q.mul(&ph).add(&r), want.clone());
        match (r.degree(), ph.degree()) {
            (Some(dr), Some(dh)) => prop_assert!(dr < dh),
            (None, _) => {}
            (Some(_), None) => prop_assert!(false, "division by the zero polynomial"),
        }
        prop_assert_eq!(pf.mul_mod(&pg, &ph).unwrap(), r);
        for x in [0u64, 1, 2, 500, 1018] {
            prop_assert_eq!(want.eval(x), pf.eval(x) * pg.eval(x) % P);
        }
    }

    #[test]
    fn gcd_attack_is_sound(m in 1u64..1019) {
        let p = 1019;
        let c = swap_neighbors_chain2(m, p);
        prop_assume!(c != 0);
        if let Ok(found) = gcd_attack_swap_neighbors(&Natural::from(p), &Natural::from(c)) {
            let found: u64 = (&found).try_into().unwrap();
            prop_assert_eq!(swap_neighbors_chain2(found, p), c);
        }
    }
}

#[test]
fn babai_recovers_exact_lattice_points() {
    let basis = LatticeBasis::from_i64(&[&[3, 1, 0], &[1, 4, 1], &[0, 1, 5]]).unwrap();
    let point: Vec<BigInt> = [5i64, 11, 12].iter().map(|&x| BigInt::from(x)).collect();
    let target: Vec<BigRational> = point.iter().map(rat).collect();
    assert_eq!(babai_cvp(&basis, &target).unwrap(), point);
}
