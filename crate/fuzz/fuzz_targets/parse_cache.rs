//! Cache files are untrusted input: parsing and cell validation must reject
//! garbage with errors, never panic, and whatever survives validation must
//! genuinely satisfy the recurrence identity.

#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cells) = archruns::cache::parse_cache_text(input) else {
        return;
    };
    if let Ok(map) = archruns::cache::validate_cells(&cells) {
        for ((n, k), v) in &map {
            if *k == 0 {
                assert_eq!(v, &BigUint::from(1u32));
                continue;
            }
            let a = &map[&(*n, k - 1)];
            let b = &map[&(n + 1, k - 1)];
            let n64 = *n as u64;
            let k64 = *k as u64;
            let first = a * BigUint::from(n64 + 2 * k64 - 1);
            let rhs = if n64 >= k64 {
                first + b * BigUint::from(n64 - k64)
            } else {
                first - b * BigUint::from(k64 - n64)
            };
            assert_eq!(v * 2u32, rhs);
        }
    }
});
