//! The text run parser must never panic, and accepted input must survive a
//! serialize/parse cycle unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(run) = archruns::text::parse_run_text(input) {
        let reparsed = archruns::text::parse_run_text(&run.to_string())
            .expect("serialized form of an accepted run must parse");
        assert_eq!(reparsed, run);
    }
});
