//! AES-256 based pseudorandom function over fixed-width integer inputs.

use aes::cipher::{generic_array::GenericArray, BlockEncrypt, KeyInit};
use aes::Aes256;
use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::bigmath::{to_fixed_bytes, Natural};

/// Derives a 256-bit subkey from stage key material and a label.
pub(crate) fn derive_key(key: &[u8], label: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"cubelock-stage-key");
    h.update((label.len() as u32).to_be_bytes());
    h.update(label.as_bytes());
    h.update(key);
    h.finalize().into()
}

/// CBC-MAC over `(tag, level, round, width)` followed by a fixed-width input,
/// with counter-mode expansion for longer outputs. Inputs of one width
/// always produce messages of one length.
#[derive(Clone)]
pub(crate) struct Prf {
    cipher: Aes256,
}

impl std::fmt::Debug for Prf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Prf")
    }
}

impl Prf {
    pub(crate) fn new(key: &[u8; 32]) -> Self {
        Prf { cipher: Aes256::new(GenericArray::from_slice(key)) }
    }

    fn encrypt(&self, block: &mut [u8; 16]) {
        self.cipher.encrypt_block(GenericArray::from_mut_slice(block));
    }

    pub(crate) fn mac(&self, tag: u8, level: u32, round: u32, input: &Natural, width: usize) -> [u8; 16] {
        let mut state = [0u8; 16];
        state[0] = tag;
        state[1..5].copy_from_slice(&level.to_be_bytes());
        state[5..9].copy_from_slice(&round.to_be_bytes());
        state[9..13].copy_from_slice(&(width as u32).to_be_bytes());
        self.encrypt(&mut state);
        if width > 0 {
            let bytes = to_fixed_bytes(input, width);
            for chunk in bytes.chunks(16) {
                for (s, b) in state.iter_mut().zip(chunk) {
                    *s ^= b;
                }
                self.encrypt(&mut state);
            }
        }
        state
    }

    pub(crate) fn bit(&self, tag: u8, level: u32, round: u32, input: &Natural, width: usize) -> bool {
        self.mac(tag, level, round, input, width)[0] & 1 == 1
    }

    /// `bits` pseudorandom bits keyed by the MAC of the input.
    pub(crate) fn expand(&self, tag: u8, level: u32, round: u32, input: &Natural, width: usize, bits: u64) -> Natural {
        let seed = self.mac(tag, level, round, input, width);
        let blocks = bits.div_ceil(128) as usize;
        let mut out = Vec::with_capacity(blocks * 16);
        for ctr in 0..blocks {
            let mut block = seed;
            for (s, c) in block[8..].iter_mut().zip((ctr as u64).to_be_bytes()) {
                *s ^= c;
            }
            block[0] ^= 0x80;
            self.encrypt(&mut block);
            out.extend_from_slice(&block);
        }
        let mut value = BigUint::from_bytes_be(&out);
        let excess = (blocks as u64) * 128 - bits;
        value >>= excess;
        value
    }
}

/// AES-256 pair for block-wise encryption in both directions.
#[derive(Clone)]
pub(crate) struct BlockCipher {
    cipher: Aes256,
}

impl std::fmt::Debug for BlockCipher {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BlockCipher")
    }
}

impl BlockCipher {
    pub(crate) fn new(key: &[u8; 32]) -> Self {
        BlockCipher { cipher: Aes256::new(GenericArray::from_slice(key)) }
    }

    /// Encrypts or decrypts the `bits`-bit value `x` (a multiple of 128) as
    /// independent 128-bit blocks.
    pub(crate) fn apply(&self, x: &Natural, bits: u64, decrypt: bool) -> Natural {
        use aes::cipher::BlockDecrypt;
        debug_assert_eq!(bits % 128, 0);
        let mut buf = to_fixed_bytes(x, (bits / 8) as usize);
        for chunk in buf.chunks_mut(16) {
            let block = GenericArray::from_mut_slice(chunk);
            if decrypt {
                self.cipher.decrypt_block(block);
            } else {
                self.cipher.encrypt_block(block);
            }
        }
        Natural::from_bytes_be(&buf)
    }
}
