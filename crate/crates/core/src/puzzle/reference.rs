use super::parse_hex;
use crate::bigmath::Natural;

const SAFE_PRIME_2048: &str = include_str!("../../data/safe_prime_2048.hex");
const SAFE_PRIME_4096: &str = include_str!("../../data/safe_prime_4096.hex");

/// Bit sizes with a bundled safe prime.
pub const REFERENCE_SIZES: [u64; 2] = [2048, 4096];

/// Bundled safe prime of exactly `bits` bits, produced once by
/// `gen_safe_prime` so timing runs need not regenerate it.
pub fn reference_prime(bits: u64) -> Option<Natural> {
    let hex = match bits {
        2048 => SAFE_PRIME_2048,
        4096 => SAFE_PRIME_4096,
        _ => return None,
    };
    Some(parse_hex(hex.trim(), 0).expect("bundled prime is valid hex"))
}
