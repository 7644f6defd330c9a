#![no_main]
use libfuzzer_sys::fuzz_target;
use negcurve::toric_surface::{class_group_of_rays, parse_rays};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rays) = parse_rays(s) {
        let _ = class_group_of_rays(&rays);
    }
});
