//! Standard (permuted-state) representation of the cipher.
//!
//! Serpent is defined twice over: on four 32-bit words (the bitsliced form
//! in [`crate::cipher`]) and on a 128-bit state that is passed through the
//! initial permutation first, substituted nibble-wise, and through the
//! final permutation at the end. The two describe the same byte-to-byte
//! function; this module implements the permuted-state data path so
//! conformance can be checked through an independent route.

use crate::cipher::{inverse_linear_transform, linear_transform, Block};
use crate::schedule::SubKeySchedule;
use crate::tables::{SboxTables, FP, IP, SERPENT_SBOXES};

fn permute(table: &[u8; 128], x: u128) -> u128 {
    let mut out = 0u128;
    for (p, src) in table.iter().enumerate() {
        out |= ((x >> src) & 1) << p;
    }
    out
}

/// Initial permutation over the 128-bit state.
pub fn ip(x: u128) -> u128 {
    permute(&IP, x)
}

/// Final permutation, inverse of [`ip`].
pub fn fp(x: u128) -> u128 {
    permute(&FP, x)
}

fn to_u128(b: Block) -> u128 {
    u128::from_le_bytes(b.to_bytes())
}

fn to_block(x: u128) -> Block {
    Block::from_bytes(&x.to_le_bytes())
}

/// Nibble-wise substitution on the permuted state.
fn s_hat(tables: &SboxTables, index: usize, state: u128) -> u128 {
    let table = &tables.s[index % 8];
    let mut out = 0u128;
    for nib in 0..32 {
        let v = (state >> (4 * nib)) & 0xf;
        out |= u128::from(table[v as usize]) << (4 * nib);
    }
    out
}

fn s_hat_inv(tables: &SboxTables, index: usize, state: u128) -> u128 {
    let table = &tables.inv[index % 8];
    let mut out = 0u128;
    for nib in 0..32 {
        let v = (state >> (4 * nib)) & 0xf;
        out |= u128::from(table[v as usize]) << (4 * nib);
    }
    out
}

/// The diffusion layer conjugated into permuted-state space.
fn lt_hat(state: u128) -> u128 {
    ip(to_u128(linear_transform(to_block(fp(state)))))
}

fn lt_hat_inv(state: u128) -> u128 {
    ip(to_u128(inverse_linear_transform(to_block(fp(state)))))
}

fn key_hat(ks: &SubKeySchedule, j: usize) -> u128 {
    ip(to_u128(Block(*ks.group(j))))
}

pub fn encrypt_block_standard(ks: &SubKeySchedule, plaintext: &[u8; 16]) -> [u8; 16] {
    encrypt_block_standard_with(&SERPENT_SBOXES, ks, plaintext)
}

pub fn encrypt_block_standard_with(
    tables: &SboxTables,
    ks: &SubKeySchedule,
    plaintext: &[u8; 16],
) -> [u8; 16] {
    let mut state = ip(u128::from_le_bytes(*plaintext));
    for round in 0..31 {
        state ^= key_hat(ks, round);
        state = s_hat(tables, round, state);
        state = lt_hat(state);
    }
    state ^= key_hat(ks, 31);
    state = s_hat(tables, 7, state);
    state ^= key_hat(ks, 32);
    fp(state).to_le_bytes()
}

pub fn decrypt_block_standard(ks: &SubKeySchedule, ciphertext: &[u8; 16]) -> [u8; 16] {
    decrypt_block_standard_with(&SERPENT_SBOXES, ks, ciphertext)
}

pub fn decrypt_block_standard_with(
    tables: &SboxTables,
    ks: &SubKeySchedule,
    ciphertext: &[u8; 16],
) -> [u8; 16] {
    let mut state = ip(u128::from_le_bytes(*ciphertext));
    state ^= key_hat(ks, 32);
    state = s_hat_inv(tables, 7, state);
    state ^= key_hat(ks, 31);
    for round in (0..31).rev() {
        state = lt_hat_inv(state);
        state = s_hat_inv(tables, round, state);
        state ^= key_hat(ks, round);
    }
    fp(state).to_le_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_invert() {
        for x in [0u128, 1, 0xdead_beef, u128::MAX, 0x0123_4567_89ab_cdef] {
            assert_eq!(fp(ip(x)), x);
            assert_eq!(ip(fp(x)), x);
        }
    }
}
