#![no_main]
use libfuzzer_sys::fuzz_target;
use negcurve::laurent_poly::{parse_text, to_json, parse_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for ch in [0, 2, 7] {
        if let Ok(p) = parse_text(s, ch) {
            // Printing and reparsing must round-trip.
            assert_eq!(parse_text(&p.to_string(), ch).unwrap(), p);
            assert_eq!(parse_json(&to_json(&p).to_string()).unwrap(), p);
        }
    }
});
