//! The known-answer file parser must never panic on arbitrary input, and
//! accepted vectors must satisfy their length contracts.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(vectors) = serpent::kat::parse_kat_text(text) {
        for v in vectors {
            assert!(matches!(v.key.len(), 16 | 24 | 32));
            assert!(v.line >= 1);
        }
    }
});
