//! Longer delays from one prime by interleaving cubing with keyed
//! permutations that have no simple algebraic form.

mod bench;
mod fpe;
mod perm;
mod prf;
mod shuffle;
mod spec;

pub use bench::{chain_bench, BenchReport, BENCH_COLUMNS};
pub use perm::{PermKind, Permutation};
pub use spec::{chain_apply, chain_invert, chain_invert_with, decrypt_chained, encrypt_chained, ChainSpec, StageSpec};

/// Forward Thorp trace on `2^bits` cards with caller-supplied coins, for
/// checking the shuffle against a physical deck.
pub fn thorp_trace(
    bits: u64,
    rounds: u32,
    x: &crate::bigmath::Natural,
    coin: impl Fn(u32, &crate::bigmath::Natural) -> bool,
) -> crate::bigmath::Natural {
    shuffle::thorp_forward(bits, rounds, x, coin)
}
