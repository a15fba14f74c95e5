use std::sync::OnceLock;

use cubelock::bigmath::{gen_safe_prime, is_safe_prime, Natural};
use cubelock::puzzle::{
    decrypt, encrypt_with, pad, reference_prime, unpad, unpad_verified, Ciphertext, PuzzleParams, Seed,
};
use num_bigint::RandBigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn params_2048() -> &'static PuzzleParams {
    static P: OnceLock<PuzzleParams> = OnceLock::new();
    P.get_or_init(|| PuzzleParams::from_prime(reference_prime(2048).unwrap(), 1.0, 2048.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn padding_round_trips(
        message in prop::collection::vec(any::<u8>(), 0..24),
        seed_bits in 0u64..200,
        slack in 0u64..300,
        seed in any::<u64>(),
    ) {
        let n = 32 + 8 * message.len() as u64 + seed_bits + 3 + slack;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let s = Seed::random(seed_bits, &mut rng);
        let x = pad(&message, &s, n).unwrap();
        prop_assert_eq!(x.bits(), n - 1);
        prop_assert_eq!(unpad(&x, n).unwrap(), message.clone());
        prop_assert_eq!(unpad_verified(&x, n, seed_bits).unwrap(), message);
    }

    #[test]
    fn overfull_padding_is_rejected(extra in 0u64..64) {
        let message = [0u8; 8];
        let n = 32 + 64 + 16 + 2 - extra;
        prop_assert!(pad(&message, &Seed::zero(16), n).is_err());
    }

    #[test]
    fn encryption_round_trips(message in prop::collection::vec(any::<u8>(), 0..64), seed in any::<u64>()) {
        let params = params_2048();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let ct = encrypt_with(&message, params, 256, &mut rng).unwrap();
        let parsed = Ciphertext::from_file_string(&ct.to_file_string()).unwrap();
        prop_assert_eq!(&parsed, &ct);
        prop_assert_eq!(decrypt(&parsed, params).unwrap(), message);
    }

    #[test]
    fn cube_root_exponent_inverts_cubing(seed in any::<u64>()) {
        let params = params_2048();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = rng.gen_biguint_range(&Natural::from(1u32), params.p());
        prop_assert_eq!(x.modpow(&(params.b() * 3u32), params.p()), x);
    }
}

#[test]
fn exponent_identity_by_enumeration() {
    for p in (11u64..10_000).filter(|&p| is_safe_prime(&Natural::from(p))) {
        let params = PuzzleParams::from_prime(Natural::from(p), 0.0, 0.0).unwrap();
        let e = params.b() * 3u32;
        let pn = Natural::from(p);
        for x in 1..p {
            let x = Natural::from(x);
            assert_eq!(x.modpow(&e, &pn), x, "p={p}");
        }
    }
}

#[test]
fn padded_values_never_square_to_one() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for bits in [40u64, 44, 48] {
        let p = gen_safe_prime(bits, &mut rng).unwrap();
        let one = Natural::from(1u32);
        let seed_bits = bits - 32 - 3;
        for v in 0..1u64 << seed_bits {
            for message in [&[][..], &[0xa5][..]] {
                let Ok(x) = pad(message, &Seed::new(Natural::from(v), seed_bits).unwrap(), bits) else {
                    continue;
                };
                assert_ne!(&x * &x % &p, one, "p={p} seed={v}");
            }
        }
    }
}

#[test]
fn key_file_round_trip() {
    let params = params_2048();
    let back = PuzzleParams::from_key_file(&params.to_key_file()).unwrap();
    assert_eq!(&back, params);
    let broken = params.to_key_file().replace("b=", "b=1");
    assert!(PuzzleParams::from_key_file(&broken).is_err());
}
