//! Accepted instance files must emit canonically: the emission re-parses,
//! and emitting again reproduces the same bytes.

#![no_main]

use interval_ordering::format::{instance_to_json, parse_instance_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_instance_json(text) {
        let emitted = instance_to_json(&inst);
        let reparsed = parse_instance_json(&emitted).expect("canonical emission re-parses");
        assert_eq!(instance_to_json(&reparsed), emitted, "emission is not a fixed point");
    }
});
