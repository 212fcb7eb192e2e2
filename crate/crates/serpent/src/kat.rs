//! Known-answer test vectors: file format, bundled data, and the
//! conformance suite run over them.
//!
//! File format: one vector per line, `key_hex plaintext_hex ciphertext_hex`
//! separated by whitespace; `#` starts a comment; blank lines are ignored.

use thiserror::Error;

use crate::bytes::decode_hex;
use crate::cipher::{decrypt_block_with, encrypt_block_with, Block};
use crate::schedule::{key_schedule_with, Key256};
use crate::standard::{decrypt_block_standard_with, encrypt_block_standard_with};
use crate::tables::{SboxTables, SERPENT_SBOXES};

/// The vectors shipped with the crate.
pub const BUNDLED_KAT_TEXT: &str = include_str!("../kats/serpent_ecb.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatVector {
    /// 1-based line number in the source text, used as the vector id.
    pub line: usize,
    pub key: Vec<u8>,
    pub plaintext: [u8; 16],
    pub ciphertext: [u8; 16],
}

impl KatVector {
    pub fn key_bits(&self) -> usize {
        self.key.len() * 8
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KatError {
    #[error("line {line}: expected 3 fields (key plaintext ciphertext), got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: bad hex in {field}: {msg}")]
    BadHex {
        line: usize,
        field: &'static str,
        msg: String,
    },
    #[error("line {line}: {field} must be 16 bytes, got {got}")]
    BadBlockLength {
        line: usize,
        field: &'static str,
        got: usize,
    },
    #[error("line {line}: key must be 16, 24 or 32 bytes, got {got}")]
    BadKeyLength { line: usize, got: usize },
}

pub fn parse_kat_text(text: &str) -> Result<Vec<KatVector>, KatError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(KatError::FieldCount {
                line,
                got: fields.len(),
            });
        }
        let decode = |field: &'static str, s: &str| {
            decode_hex(s).map_err(|e| KatError::BadHex {
                line,
                field,
                msg: e.to_string(),
            })
        };
        let key = decode("key", fields[0])?;
        if !matches!(key.len(), 16 | 24 | 32) {
            return Err(KatError::BadKeyLength {
                line,
                got: key.len(),
            });
        }
        let pt = decode("plaintext", fields[1])?;
        let ct = decode("ciphertext", fields[2])?;
        let pt: [u8; 16] = pt.try_into().map_err(|v: Vec<u8>| KatError::BadBlockLength {
            line,
            field: "plaintext",
            got: v.len(),
        })?;
        let ct: [u8; 16] = ct.try_into().map_err(|v: Vec<u8>| KatError::BadBlockLength {
            line,
            field: "ciphertext",
            got: v.len(),
        })?;
        out.push(KatVector {
            line,
            key,
            plaintext: pt,
            ciphertext: ct,
        });
    }
    Ok(out)
}

pub fn bundled_vectors() -> Vec<KatVector> {
    parse_kat_text(BUNDLED_KAT_TEXT).expect("bundled vectors parse")
}

#[derive(Clone, Debug)]
pub struct KatFailure {
    pub line: usize,
    pub key_bits: usize,
    pub what: String,
}

impl std::fmt::Display for KatFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vector line {} ({}-bit key): {}",
            self.line, self.key_bits, self.what
        )
    }
}

/// Check every vector through both representations, encrypting and
/// decrypting. Returns the list of mismatches (empty on full conformance).
pub fn run_kat_suite(vectors: &[KatVector]) -> Vec<KatFailure> {
    run_kat_suite_with(&SERPENT_SBOXES, vectors)
}

pub fn run_kat_suite_with(tables: &SboxTables, vectors: &[KatVector]) -> Vec<KatFailure> {
    let mut failures = Vec::new();
    for v in vectors {
        let key = match Key256::from_bytes(&v.key) {
            Ok(k) => k,
            Err(e) => {
                failures.push(KatFailure {
                    line: v.line,
                    key_bits: v.key_bits(),
                    what: format!("key rejected: {e}"),
                });
                continue;
            }
        };
        let ks = key_schedule_with(tables, &key);
        let mut check = |what: &str, got: [u8; 16], expect: [u8; 16]| {
            if got != expect {
                failures.push(KatFailure {
                    line: v.line,
                    key_bits: v.key_bits(),
                    what: format!(
                        "{what}: expected {}, got {}",
                        hex::encode(expect),
                        hex::encode(got)
                    ),
                });
            }
        };
        let std_ct = encrypt_block_standard_with(tables, &ks, &v.plaintext);
        check("standard-mode encrypt", std_ct, v.ciphertext);
        let std_pt = decrypt_block_standard_with(tables, &ks, &v.ciphertext);
        check("standard-mode decrypt", std_pt, v.plaintext);
        let bits_ct =
            encrypt_block_with(tables, &ks, Block::from_bytes(&v.plaintext)).to_bytes();
        check("bitsliced encrypt", bits_ct, v.ciphertext);
        let bits_pt =
            decrypt_block_with(tables, &ks, Block::from_bytes(&v.ciphertext)).to_bytes();
        check("bitsliced decrypt", bits_pt, v.plaintext);
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_parses_with_all_key_sizes() {
        let vectors = bundled_vectors();
        assert!(vectors.len() >= 12);
        for bits in [128, 192, 256] {
            assert!(
                vectors.iter().filter(|v| v.key_bits() == bits).count() >= 4,
                "want at least 4 vectors for {bits}-bit keys"
            );
        }
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(matches!(
            parse_kat_text("00 11"),
            Err(KatError::FieldCount { line: 1, got: 2 })
        ));
        assert!(matches!(
            parse_kat_text("zz 00 11"),
            Err(KatError::BadHex { line: 1, .. })
        ));
        let short_key = format!("{} {} {}", "00".repeat(5), "00".repeat(16), "00".repeat(16));
        assert!(matches!(
            parse_kat_text(&short_key),
            Err(KatError::BadKeyLength { line: 1, got: 5 })
        ));
        let short_pt = format!("{} {} {}", "00".repeat(16), "00".repeat(15), "00".repeat(16));
        assert!(matches!(
            parse_kat_text(&short_pt),
            Err(KatError::BadBlockLength { line: 1, .. })
        ));
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# header\n\n  # indented comment\n";
        assert_eq!(parse_kat_text(text).unwrap(), vec![]);
    }
}
