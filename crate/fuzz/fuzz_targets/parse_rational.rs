//! Accepted rational literals round-trip through the canonical renderer.

#![no_main]

use interval_ordering::format::{parse_rational, rational_to_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Cap the digit count so the fuzzer explores syntax rather than
    // quadratic-time bignum arithmetic.
    if text.len() > 64 {
        return;
    }
    if let Ok(r) = parse_rational(text) {
        let rendered = rational_to_string(&r);
        let reparsed = parse_rational(&rendered).expect("canonical rendering re-parses");
        assert_eq!(reparsed, r, "round trip changed the value");
    }
});
