//! The cubing delay-encryption scheme.
//!
//! A sender pads a message into `[2^(n-2), 2^(n-1))` and cubes it modulo a
//! safe prime. The receiver recovers it by raising to `b = (1 + 2(p-1))/3`,
//! which takes roughly `n` sequential squarings.

mod curated;
pub(crate) mod files;
mod padding;
mod params;
mod reference;
mod scheme;
mod seed;
mod unit_group;

pub use curated::{CuratedPrime, BUNDLED_PRIMES, CURATED_THRESHOLD, MIN_SIZE_BITS};
pub use files::parse_hex;
pub use padding::{pad, unpad, unpad_verified, Seed};
pub use params::{fingerprint, setup, setup_with, PuzzleParams, Setup};
pub use reference::{reference_prime, REFERENCE_SIZES};
pub use scheme::{cube, decrypt, decrypt_traced, encrypt, encrypt_padded, encrypt_with, Ciphertext, DecryptOptions};
pub use seed::{seed_length_bound, SeedLengthBound, DEFAULT_SEED_BITS};
pub use unit_group::{unit_group_oracle, UnitEntry, UnitGroupReport, MAX_UNIT_GROUP_MODULUS};
