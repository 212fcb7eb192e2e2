//! Pure sequential Serpent on four 32-bit words (bitsliced representation).
//!
//! This is the oracle everything else is checked against. The cipher state
//! is a [`Block`] of four words; bit 0 of word 0 is the least significant
//! bit of the 128-bit value. S-boxes apply bitsliced: bit position `j` of
//! the four words forms one 4-bit S-box input, word 0 contributing the low
//! bit.

use crate::schedule::SubKeySchedule;
use crate::tables::{SboxTables, SERPENT_SBOXES};

/// One 128-bit cipher block as four 32-bit words, word 0 least significant.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Block(pub [u32; 4]);

impl Block {
    /// Little-endian word-wise: bytes 0..4 become word 0, low byte first.
    pub fn from_bytes(bytes: &[u8; 16]) -> Block {
        let mut w = [0u32; 4];
        for (i, chunk) in bytes.chunks_exact(4).enumerate() {
            w[i] = u32::from_le_bytes(chunk.try_into().expect("4-byte chunk"));
        }
        Block(w)
    }

    pub fn to_bytes(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        for (i, w) in self.0.iter().enumerate() {
            out[4 * i..4 * i + 4].copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn xor(self, keys: &[u32; 4]) -> Block {
        Block([
            self.0[0] ^ keys[0],
            self.0[1] ^ keys[1],
            self.0[2] ^ keys[2],
            self.0[3] ^ keys[3],
        ])
    }
}

/// Left circular rotation.
pub fn rotl(x: u32, n: u32) -> u32 {
    x.rotate_left(n)
}

/// Logical left shift toward the most significant bit, zero fill. `n` must
/// be at most 31.
pub fn shl(x: u32, n: u32) -> u32 {
    debug_assert!(n < 32);
    x << n
}

/// Bitsliced application of S-box `index` (mod 8).
pub fn sbox(index: usize, b: Block) -> Block {
    sbox_with(&SERPENT_SBOXES, index, b)
}

/// Bitsliced application of the inverse S-box `index` (mod 8).
pub fn inv_sbox(index: usize, b: Block) -> Block {
    inv_sbox_with(&SERPENT_SBOXES, index, b)
}

pub fn sbox_with(tables: &SboxTables, index: usize, b: Block) -> Block {
    apply_nibble_table(&tables.s[index % 8], b)
}

pub fn inv_sbox_with(tables: &SboxTables, index: usize, b: Block) -> Block {
    apply_nibble_table(&tables.inv[index % 8], b)
}

fn apply_nibble_table(table: &[u8; 16], b: Block) -> Block {
    let [x0, x1, x2, x3] = b.0;
    let mut out = [0u32; 4];
    for bit in 0..32 {
        let nibble = ((x0 >> bit) & 1)
            | (((x1 >> bit) & 1) << 1)
            | (((x2 >> bit) & 1) << 2)
            | (((x3 >> bit) & 1) << 3);
        let v = table[nibble as usize] as u32;
        for (w, out_w) in out.iter_mut().enumerate() {
            *out_w |= ((v >> w) & 1) << bit;
        }
    }
    Block(out)
}

/// The diffusion layer: rotations by 13, 3, 1, 7, 5 and 22 plus left shifts
/// by 3 and 7, XOR-wired across the four words.
pub fn linear_transform(b: Block) -> Block {
    let [mut x0, mut x1, mut x2, mut x3] = b.0;
    x0 = rotl(x0, 13);
    x2 = rotl(x2, 3);
    x1 ^= x0 ^ x2;
    x3 ^= x2 ^ shl(x0, 3);
    x1 = rotl(x1, 1);
    x3 = rotl(x3, 7);
    x0 ^= x1 ^ x3;
    x2 ^= x3 ^ shl(x1, 7);
    x0 = rotl(x0, 5);
    x2 = rotl(x2, 22);
    Block([x0, x1, x2, x3])
}

pub fn inverse_linear_transform(b: Block) -> Block {
    let [mut x0, mut x1, mut x2, mut x3] = b.0;
    x2 = x2.rotate_right(22);
    x0 = x0.rotate_right(5);
    x2 ^= x3 ^ shl(x1, 7);
    x0 ^= x1 ^ x3;
    x3 = x3.rotate_right(7);
    x1 = x1.rotate_right(1);
    x3 ^= x2 ^ shl(x0, 3);
    x1 ^= x0 ^ x2;
    x2 = x2.rotate_right(3);
    x0 = x0.rotate_right(13);
    Block([x0, x1, x2, x3])
}

/// Rough primitive-operation count of one round (key mixing, one bitsliced
/// S-box, linear transformation), used by the cycle-accounting networks.
pub const FOLD_OPS: u64 = 37;

/// Operation count of one bitsliced S-box application.
pub const SBOX_OPS: u64 = 17;

/// One encryption round for rounds 0..=30: mix subkeys, substitute with
/// S-box `round mod 8`, diffuse.
pub fn serpent_fold(b: Block, round: usize, subkeys: &[u32; 4]) -> Block {
    fold_with(&SERPENT_SBOXES, b, round, subkeys)
}

pub fn fold_with(tables: &SboxTables, b: Block, round: usize, subkeys: &[u32; 4]) -> Block {
    debug_assert!(round < 31);
    linear_transform(sbox_with(tables, round, b.xor(subkeys)))
}

pub fn encrypt_block(ks: &SubKeySchedule, b: Block) -> Block {
    encrypt_block_with(&SERPENT_SBOXES, ks, b)
}

pub fn encrypt_block_with(tables: &SboxTables, ks: &SubKeySchedule, b: Block) -> Block {
    let mut state = b;
    for round in 0..31 {
        state = fold_with(tables, state, round, ks.group(round));
    }
    // Last round: the diffusion is replaced by a final key mixing.
    state = state.xor(ks.group(31));
    state = sbox_with(tables, 7, state);
    state.xor(ks.group(32))
}

pub fn decrypt_block(ks: &SubKeySchedule, b: Block) -> Block {
    decrypt_block_with(&SERPENT_SBOXES, ks, b)
}

pub fn decrypt_block_with(tables: &SboxTables, ks: &SubKeySchedule, b: Block) -> Block {
    let mut state = b.xor(ks.group(32));
    state = inv_sbox_with(tables, 7, state);
    state = state.xor(ks.group(31));
    for round in (0..31).rev() {
        state = inverse_linear_transform(state);
        state = inv_sbox_with(tables, round, state);
        state = state.xor(ks.group(round));
    }
    state
}

/// Encrypt many blocks under one schedule, in order.
pub fn encrypt_blocks(ks: &SubKeySchedule, blocks: &[Block]) -> Vec<Block> {
    blocks.iter().map(|b| encrypt_block(ks, *b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotl_edges() {
        assert_eq!(rotl(0x1234_5678, 0), 0x1234_5678);
        assert_eq!(rotl(0x8000_0000, 1), 0x0000_0001);
    }

    #[test]
    fn shl_edges() {
        assert_eq!(shl(0xffff_ffff, 0), 0xffff_ffff);
        assert_eq!(shl(0xffff_ffff, 31), 0x8000_0000);
    }

    #[test]
    fn block_bytes_round_trip() {
        let b = Block([0x03020100, 0x07060504, 0x0b0a0908, 0x0f0e0d0c]);
        let bytes: Vec<u8> = (0..16).collect();
        assert_eq!(Block::from_bytes(bytes.as_slice().try_into().unwrap()), b);
        assert_eq!(b.to_bytes().to_vec(), bytes);
    }

    #[test]
    fn linear_transform_fixes_zero() {
        assert_eq!(linear_transform(Block([0; 4])), Block([0; 4]));
    }
}
