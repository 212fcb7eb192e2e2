//! Block file decoding must reject unaligned input without panicking, and
//! decrypt must invert encrypt for whatever blocks the fuzzer produces.

#![no_main]

use libfuzzer_sys::fuzz_target;
use serpent::bytes::{blocks_from_bytes, blocks_to_bytes};
use serpent::{decrypt_block, encrypt_block, key_schedule, Key256};

fuzz_target!(|data: &[u8]| {
    if data.len() < 16 {
        let _ = blocks_from_bytes(data);
        return;
    }
    let (key_bytes, rest) = data.split_at(16);
    let key = Key256::from_bytes(key_bytes).expect("16-byte key");
    let ks = key_schedule(&key);
    match blocks_from_bytes(rest) {
        Ok(blocks) => {
            for b in &blocks {
                let c = encrypt_block(&ks, *b);
                assert_eq!(decrypt_block(&ks, c), *b);
            }
            assert_eq!(blocks_to_bytes(&blocks), rest);
        }
        Err(_) => assert!(rest.len() % 16 != 0),
    }
});
