//! Key parsing must never panic, and every accepted key must round through
//! the schedule without trouble.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let declared = match data.first() {
        Some(b) if b % 4 == 1 => Some(128),
        Some(b) if b % 4 == 2 => Some(192),
        Some(b) if b % 4 == 3 => Some(256),
        _ => None,
    };
    if let Ok(key) = serpent::bytes::parse_key_hex(text, declared) {
        let _ = serpent::key_schedule(&key);
    }
});
