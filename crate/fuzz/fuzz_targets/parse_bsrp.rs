//! Accepted triplet files round-trip: parse -> emit -> parse is identity.

#![no_main]

use interval_ordering::format::{bsrp_to_json, parse_bsrp_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_bsrp_json(text) {
        let emitted = bsrp_to_json(&inst);
        let reparsed = parse_bsrp_json(&emitted).expect("canonical emission re-parses");
        assert_eq!(reparsed, inst, "round trip changed the instance");
    }
});
