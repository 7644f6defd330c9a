#![no_main]
use libfuzzer_sys::fuzz_target;
use negcurve::laurent_poly::{parse_json, to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_json(s) {
        assert_eq!(parse_json(&to_json(&p).to_string()).unwrap(), p);
    }
});
