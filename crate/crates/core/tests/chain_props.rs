use std::sync::OnceLock;

use cubelock::bigmath::{gen_safe_prime, Natural};
use cubelock::chain::{chain_apply, chain_invert, ChainSpec, PermKind, Permutation};
use num_bigint::{BigUint, RandBigInt};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn prime_512() -> &'static Natural {
    static P: OnceLock<Natural> = OnceLock::new();
    P.get_or_init(|| gen_safe_prime(512, &mut ChaCha20Rng::seed_from_u64(512)).unwrap())
}

fn single_kind() -> impl Strategy<Value = PermKind> {
    prop::sample::select(PermKind::ALL.iter().copied().filter(|k| *k != PermKind::PairMap).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn permutations_invert(
        kind in single_kind(),
        domain in prop::collection::vec(any::<u8>(), 1..26),
        key in any::<[u8; 32]>(),
        rounds in 1u32..24,
        seed in any::<u64>(),
    ) {
        let domain = BigUint::from_bytes_be(&domain) + 1u32;
        let perm = Permutation::new(kind, &domain, &key, rounds).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let x = rng.gen_biguint_below(&domain);
            let y = perm.forward(&x).unwrap();
            prop_assert!(y < domain);
            prop_assert_eq!(perm.inverse(&y).unwrap(), x.clone());
            prop_assert_eq!(perm.forward(&perm.inverse(&x).unwrap()).unwrap(), x);
        }
        prop_assert!(perm.forward(&domain).is_err());
        let again = Permutation::new(kind, &domain, &key, rounds).unwrap();
        let probe = &domain - 1u32;
        prop_assert_eq!(again.forward(&probe).unwrap(), perm.forward(&probe).unwrap());
    }

    #[test]
    fn pair_map_inverts(c1 in 0u64..1019, c2 in 0u64..1019, x in 0u64..1019 * 1019) {
        let mut key = c1.to_be_bytes()[6..].to_vec();
        key.extend_from_slice(&c2.to_be_bytes()[6..]);
        let perm = Permutation::new(PermKind::PairMap, &Natural::from(1019u64 * 1019), &key, 0).unwrap();
        let x = Natural::from(x);
        prop_assert_eq!(perm.inverse(&perm.forward(&x).unwrap()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chains_of_any_mix_round_trip(
        kinds in prop::collection::vec(prop::sample::select(PermKind::ALL.to_vec()), 1..=8),
        seed in any::<u64>(),
    ) {
        let p = prime_512();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let stages: Vec<(PermKind, Option<u32>)> = kinds.iter().map(|&k| (k, Some(8))).collect();
        let spec = ChainSpec::random(p, &stages, &mut rng).unwrap();
        let x = rng.gen_biguint_below(&spec.domain());
        let c = chain_apply(&spec, &x).unwrap();
        let (back, trace) = chain_invert(&spec, &c).unwrap();
        prop_assert_eq!(back, x);
        let floor_log_b = spec.params().b().bits() - 1;
        prop_assert!(trace.sequential_depth >= kinds.len() as u64 * floor_log_b);
    }
}

#[test]
fn eight_stage_chain_at_full_rounds() {
    let p = prime_512();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let kinds = [
        PermKind::Thorp,
        PermKind::SwapNeighbors,
        PermKind::SwapOrNot,
        PermKind::CycleWalkFpe,
        PermKind::MixAndCut,
        PermKind::BothEnds,
        PermKind::SwapNeighbors,
        PermKind::CycleWalkFpe,
    ];
    let stages: Vec<(PermKind, Option<u32>)> = kinds.iter().map(|&k| (k, None)).collect();
    let spec = ChainSpec::random(p, &stages, &mut rng).unwrap();
    assert!(spec.stages().iter().filter(|s| s.kind().is_shuffle()).all(|s| s.rounds() == 512));

    let reloaded = ChainSpec::from_file_string(&spec.to_file_string()).unwrap();
    assert_eq!(reloaded.id(), spec.id());
    for _ in 0..3 {
        let x = rng.gen_biguint_below(p);
        let c = chain_apply(&spec, &x).unwrap();
        assert_eq!(chain_apply(&reloaded, &x).unwrap(), c);
        assert_eq!(chain_invert(&reloaded, &c).unwrap().0, x);
    }
}

#[test]
fn small_domains_are_bijections() {
    for kind in PermKind::ALL.into_iter().filter(|k| *k != PermKind::PairMap) {
        for n in [1u32, 2, 3, 7, 64, 97] {
            let domain = Natural::from(n);
            let perm = Permutation::new(kind, &domain, &[7; 32], 6).unwrap();
            let mut seen = vec![false; n as usize];
            for x in 0..n {
                let y: u32 = (&perm.forward(&Natural::from(x)).unwrap()).try_into().unwrap();
                assert!(!seen[y as usize], "{kind} on {n}: collision");
                seen[y as usize] = true;
            }
        }
    }
}
