//! The JSON run parser must never panic; whatever it accepts must be
//! re-serializable, and validation of the parsed run must not panic either.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((shape, run)) = archruns::text::parse_run_json(input) {
        let _ = archruns::validate_run(shape, &run);
        let json = archruns::text::run_to_json(shape, &run);
        let (shape2, run2) =
            archruns::text::parse_run_json(&json).expect("round-tripped JSON must parse");
        assert_eq!(shape2, shape);
        assert_eq!(run2, run);
    }
});
