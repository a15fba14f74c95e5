//! Arbitrary-precision modular arithmetic with multiplication-depth tracking.

mod barrett;
mod depth;
mod fixed_base;
mod montgomery;
mod powmod;
mod prime;
mod toom;

pub use barrett::BarrettCtx;
pub use depth::DepthTrace;
pub use fixed_base::{powmod_fixed_base, powmod_fixed_base_par, FixedBaseTable};
pub use montgomery::MontCtx;
pub use powmod::{powmod_combined, powmod_window, Evaluation, ModArith, Reduction, DEFAULT_WINDOW, MAX_TABLE_BYTES};
pub use prime::{gen_safe_prime, is_prime_u64, is_probable_prime, is_safe_prime};
pub use toom::mul_toom;

/// Nonnegative arbitrary-precision integer used for every residue.
pub type Natural = num_bigint::BigUint;

/// Free-function form of [`BarrettCtx::reduce`].
pub fn barrett_reduce(ctx: &BarrettCtx, a: &Natural) -> crate::Result<Natural> {
    ctx.reduce(a)
}

/// Free-function form of [`MontCtx::redc`].
pub fn mont_redc(ctx: &MontCtx, a: &Natural) -> crate::Result<Natural> {
    ctx.redc(a)
}

/// Big-endian bytes of `x`, left-padded with zeros to `width`.
pub fn to_fixed_bytes(x: &Natural, width: usize) -> Vec<u8> {
    let raw = x.to_bytes_be();
    let raw: &[u8] = if raw == [0] { &[] } else { &raw };
    assert!(raw.len() <= width, "value does not fit in {width} bytes");
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(raw);
    out
}

/// Reads `w` bits of `x` starting at bit `start` (bit 0 is least significant).
pub(crate) fn bit_window(limbs: &[u64], start: u64, w: u32) -> usize {
    let mut out = 0usize;
    for i in 0..u64::from(w) {
        let pos = start + i;
        let limb = (pos / 64) as usize;
        if limb < limbs.len() && (limbs[limb] >> (pos % 64)) & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}
