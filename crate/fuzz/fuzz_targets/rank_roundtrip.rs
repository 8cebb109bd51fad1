//! Behavioral fuzz: for shapes and ranks decoded from the input bytes,
//! unranking must produce a valid run and ranking must invert it exactly.

#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

fuzz_target!(|data: &[u8]| {
    if data.len() < 10 {
        return;
    }
    let n = 1 + (data[0] % 9) as u32;
    let k = 1 + (data[1] % n as u8) as u32;
    let raw = u64::from_le_bytes(data[2..10].try_into().unwrap());

    let shape = archruns::Shape::new(n, k).expect("k <= n by construction");
    let table = archruns::build_count_table(n, k).expect("in-domain");
    let ptable = archruns::counting::build_position_table(n, k).expect("k <= n");
    let total = table.total().to_u64().expect("small shape");
    let r = BigUint::from(raw % total);

    let run = archruns::unrank(&ptable, &table, shape, &r).expect("rank in range");
    assert!(archruns::validate_run(shape, &run));
    let back = archruns::rank(&ptable, &table, shape, &run).expect("valid run");
    assert_eq!(back, r);
});
