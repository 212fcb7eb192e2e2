//! Serpent block cipher: a pure sequential reference and a family of
//! message-passing network designs built on [`procnet`].
//!
//! The reference ([`cipher`], [`schedule`], [`standard`]) is bit-exact
//! against published ECB known-answer vectors for 128-, 192- and 256-bit
//! keys. The [`networks`] module wires the key schedule and the encryption
//! rounds as process networks in five configurations — two key-schedule
//! layouts and three encryption layouts trading replication for throughput —
//! every one observationally equivalent to the reference.

pub mod bytes;
pub mod cipher;
pub mod kat;
pub mod networks;
pub mod schedule;
pub mod standard;
pub mod tables;

pub use cipher::{
    decrypt_block, encrypt_block, encrypt_blocks, inv_sbox, inverse_linear_transform,
    linear_transform, rotl, sbox, serpent_fold, shl, Block,
};
pub use schedule::{
    generate_prekeys, key_schedule, pad_key, segs, sbox_index_for_group, Key256, KeyBits,
    KeyError, PrekeyArray, SubKeySchedule, PHI,
};
pub use tables::{SboxTables, SERPENT_SBOXES};
