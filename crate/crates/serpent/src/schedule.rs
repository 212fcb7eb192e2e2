//! Key handling: padding, segmentation, prekey expansion, round subkeys.

use thiserror::Error;

use crate::cipher::{rotl, sbox_with, Block};
use crate::tables::{SboxTables, SERPENT_SBOXES};

/// Golden-ratio round constant of the prekey recurrence.
pub const PHI: u32 = 0x9e37_79b9;

/// Number of 32-bit prekeys feeding the round subkeys.
pub const PREKEY_COUNT: usize = 132;

/// 33 groups of four round subkeys.
pub const GROUP_COUNT: usize = 33;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KeyError {
    #[error("unsupported key length: {0} bits (expected 128, 192 or 256)")]
    UnsupportedLength(usize),
    #[error("key hex length {got} does not match declared {expected} bits")]
    BitsMismatch { got: usize, expected: usize },
    #[error("bad key hex: {0}")]
    BadHex(String),
    #[error("segment width {width} does not divide the 256-bit key")]
    NonDivisibleWidth { width: u32 },
    #[error("unsupported segment width {width} (words are 32-bit)")]
    UnsupportedWidth { width: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KeyBits {
    K128,
    K192,
    K256,
}

impl KeyBits {
    pub fn bits(self) -> usize {
        match self {
            KeyBits::K128 => 128,
            KeyBits::K192 => 192,
            KeyBits::K256 => 256,
        }
    }

    pub fn from_bits(bits: usize) -> Result<KeyBits, KeyError> {
        match bits {
            128 => Ok(KeyBits::K128),
            192 => Ok(KeyBits::K192),
            256 => Ok(KeyBits::K256),
            other => Err(KeyError::UnsupportedLength(other)),
        }
    }
}

/// A user key padded to 256 bits: shorter keys get a single 1 bit appended,
/// then zeros. Word 0 is the least significant key word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Key256 {
    words: [u32; 8],
}

impl Key256 {
    /// Key bytes in memory order (low word first, little-endian words);
    /// length selects 128, 192 or 256 bits.
    pub fn from_bytes(bytes: &[u8]) -> Result<Key256, KeyError> {
        if !matches!(bytes.len(), 16 | 24 | 32) {
            return Err(KeyError::UnsupportedLength(bytes.len() * 8));
        }
        let mut raw = [0u32; 8];
        for (i, chunk) in bytes.chunks_exact(4).enumerate() {
            raw[i] = u32::from_le_bytes(chunk.try_into().expect("4-byte chunk"));
        }
        let words = bytes.len() / 4;
        pad_key(&raw[..words], KeyBits::from_bits(bytes.len() * 8)?)
    }

    /// A full-length 256-bit key given directly as words (no padding).
    pub fn from_words(words: [u32; 8]) -> Key256 {
        Key256 { words }
    }

    pub fn words(&self) -> [u32; 8] {
        self.words
    }
}

/// Pad a raw key of the declared length to 256 bits by appending a single
/// 1 bit and zero fill. Full-length keys pass through unchanged.
pub fn pad_key(raw_words: &[u32], bits: KeyBits) -> Result<Key256, KeyError> {
    if raw_words.len() * 32 != bits.bits() {
        return Err(KeyError::BitsMismatch {
            got: raw_words.len() * 32,
            expected: bits.bits(),
        });
    }
    let mut words = [0u32; 8];
    words[..raw_words.len()].copy_from_slice(raw_words);
    if raw_words.len() < 8 {
        words[raw_words.len()] = 1;
    }
    Ok(Key256 { words })
}

/// Partition the padded key into equal segments; only the 32-bit word
/// width is meaningful here, and the result is low word first, matching
/// the prekey numbering where key words sit at indices -8..-1.
pub fn segs(segment_width: u32, key: &Key256) -> Result<Vec<u32>, KeyError> {
    if segment_width == 0 || 256 % segment_width != 0 {
        return Err(KeyError::NonDivisibleWidth {
            width: segment_width,
        });
    }
    if segment_width != 32 {
        return Err(KeyError::UnsupportedWidth {
            width: segment_width,
        });
    }
    Ok(key.words.to_vec())
}

/// The 132 intermediate prekeys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrekeyArray(pub [u32; PREKEY_COUNT]);

/// Expand the key words through the recurrence
/// `w[i] = rotl(w[i-8] ^ w[i-5] ^ w[i-3] ^ w[i-1] ^ PHI ^ i, 11)`
/// with the key occupying indices -8..-1.
pub fn generate_prekeys(key: &Key256) -> PrekeyArray {
    let mut w = [0u32; 8 + PREKEY_COUNT];
    w[..8].copy_from_slice(&key.words());
    for i in 8..w.len() {
        let idx = (i - 8) as u32;
        w[i] = rotl(w[i - 8] ^ w[i - 5] ^ w[i - 3] ^ w[i - 1] ^ PHI ^ idx, 11);
    }
    PrekeyArray(w[8..].try_into().expect("132 prekeys"))
}

/// 33 groups of four 32-bit round subkeys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubKeySchedule(pub [[u32; 4]; GROUP_COUNT]);

impl SubKeySchedule {
    pub fn group(&self, j: usize) -> &[u32; 4] {
        &self.0[j]
    }

    pub fn flat(&self) -> Vec<u32> {
        self.0.iter().flatten().copied().collect()
    }

    pub fn from_flat(words: &[u32]) -> SubKeySchedule {
        assert_eq!(words.len(), 4 * GROUP_COUNT);
        let mut groups = [[0u32; 4]; GROUP_COUNT];
        for (j, chunk) in words.chunks_exact(4).enumerate() {
            groups[j].copy_from_slice(chunk);
        }
        SubKeySchedule(groups)
    }
}

/// S-box used for prekey group `j`: the cycle 3, 2, 1, 0, 7, 6, 5, 4, i.e.
/// `(3 - j) mod 8`. Group 32 wraps back to S3.
pub fn sbox_index_for_group(j: usize) -> usize {
    (11 - (j % 8)) % 8
}

pub fn key_schedule(key: &Key256) -> SubKeySchedule {
    key_schedule_with(&SERPENT_SBOXES, key)
}

pub fn key_schedule_with(tables: &SboxTables, key: &Key256) -> SubKeySchedule {
    let prekeys = generate_prekeys(key);
    let mut groups = [[0u32; 4]; GROUP_COUNT];
    for (j, group) in groups.iter_mut().enumerate() {
        let chunk: [u32; 4] = prekeys.0[4 * j..4 * j + 4]
            .try_into()
            .expect("4-word group");
        *group = sbox_with(tables, sbox_index_for_group(j), Block(chunk)).0;
    }
    SubKeySchedule(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_sbox_cycle() {
        let expected = [3, 2, 1, 0, 7, 6, 5, 4];
        for j in 0..GROUP_COUNT {
            assert_eq!(sbox_index_for_group(j), expected[j % 8]);
        }
        assert_eq!(sbox_index_for_group(0), 3);
        assert_eq!(sbox_index_for_group(32), 3);
    }

    #[test]
    fn padding_sets_lone_bit_at_key_length() {
        let k = Key256::from_bytes(&[0u8; 16]).unwrap();
        // Bit 128 is bit 0 of word 4.
        assert_eq!(k.words(), [0, 0, 0, 0, 1, 0, 0, 0]);
        let k = Key256::from_bytes(&[0u8; 24]).unwrap();
        assert_eq!(k.words(), [0, 0, 0, 0, 0, 0, 1, 0]);
        let k = Key256::from_bytes(&[0u8; 32]).unwrap();
        assert_eq!(k.words(), [0; 8]);
    }

    #[test]
    fn segs_checks_width() {
        let k = Key256::from_words([7; 8]);
        assert_eq!(segs(32, &k).unwrap(), vec![7u32; 8]);
        assert!(matches!(
            segs(33, &k),
            Err(KeyError::NonDivisibleWidth { width: 33 })
        ));
        assert!(matches!(
            segs(64, &k),
            Err(KeyError::UnsupportedWidth { width: 64 })
        ));
        assert!(matches!(segs(0, &k), Err(KeyError::NonDivisibleWidth { .. })));
    }

    #[test]
    fn zero_key_first_prekey() {
        // With an all-zero 256-bit key the first recurrence step reduces to
        // rotl(PHI ^ 0, 11).
        let key = Key256::from_words([0; 8]);
        let pre = generate_prekeys(&key);
        assert_eq!(pre.0[0], rotl(PHI, 11));
    }

    #[test]
    fn schedule_shape() {
        let ks = key_schedule(&Key256::from_words([3; 8]));
        assert_eq!(ks.0.len(), 33);
        assert_eq!(SubKeySchedule::from_flat(&ks.flat()), ks);
    }
}
