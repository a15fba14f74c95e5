//! Delay encryption built on modular cubing.
//!
//! Encrypting is a single cube modulo a safe prime `p`; decrypting raises the
//! ciphertext to `b = (1 + 2(p - 1)) / 3`, which costs about `log2 p`
//! sequential modular squarings. The crate is split into:
//!
//! * [`bigmath`]: reductions, exponentiation strategies with depth
//!   instrumentation, Toom-Cook multiplication and safe primes.
//! * [`puzzle`]: parameter setup, padding, encryption and decryption.
//! * [`chain`]: keyed permutations interleaved with cubing to build longer
//!   delays from one prime.
//! * [`attacks`]: desk-scale demonstrations of the known shortcuts.

pub mod attacks;
pub mod bigmath;
pub mod chain;
mod error;
pub mod puzzle;

pub use error::{Error, Result};
