//! Byte and hex conventions shared by the CLI, the KAT file and the tests.
//!
//! Hex strings are byte sequences: the first hex pair is byte 0. Blocks and
//! keys load little-endian word-wise, word 0 first.

use thiserror::Error;

use crate::cipher::Block;
use crate::schedule::{Key256, KeyError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BytesError {
    #[error("data length {0} is not a multiple of the 16-byte block size")]
    NotBlockAligned(usize),
    #[error("bad hex: {0}")]
    BadHex(String),
    #[error("{0}")]
    Key(#[from] KeyError),
}

pub fn decode_hex(s: &str) -> Result<Vec<u8>, BytesError> {
    hex::decode(s.trim()).map_err(|e| BytesError::BadHex(e.to_string()))
}

/// Parse a key from hex; the number of hex digits selects 128/192/256 bits.
/// A declared bit width, when provided, must agree.
pub fn parse_key_hex(s: &str, declared_bits: Option<usize>) -> Result<Key256, BytesError> {
    let bytes = decode_hex(s)?;
    if let Some(bits) = declared_bits {
        if bytes.len() * 8 != bits {
            return Err(BytesError::Key(KeyError::BitsMismatch {
                got: bytes.len() * 8,
                expected: bits,
            }));
        }
    }
    Ok(Key256::from_bytes(&bytes)?)
}

pub fn blocks_from_bytes(data: &[u8]) -> Result<Vec<Block>, BytesError> {
    if !data.len().is_multiple_of(16) {
        return Err(BytesError::NotBlockAligned(data.len()));
    }
    Ok(data
        .chunks_exact(16)
        .map(|c| Block::from_bytes(c.try_into().expect("16-byte chunk")))
        .collect())
}

pub fn blocks_to_bytes(blocks: &[Block]) -> Vec<u8> {
    let mut out = Vec::with_capacity(blocks.len() * 16);
    for b in blocks {
        out.extend_from_slice(&b.to_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_partial_blocks() {
        assert!(matches!(
            blocks_from_bytes(&[0u8; 17]),
            Err(BytesError::NotBlockAligned(17))
        ));
        assert_eq!(blocks_from_bytes(&[]).unwrap(), vec![]);
    }

    #[test]
    fn key_hex_infers_and_checks_bits() {
        let k = parse_key_hex("00000000000000000000000000000080", None).unwrap();
        assert_eq!(k.words()[3], 0x8000_0000);
        assert!(parse_key_hex("0011", None).is_err());
        assert!(parse_key_hex(&"00".repeat(16), Some(192)).is_err());
        assert!(parse_key_hex("zz".repeat(16).as_str(), None).is_err());
    }
}
