#![no_main]
use libfuzzer_sys::fuzz_target;
use negcurve::lattice_geom::{parse_polygon_json, PolygonInput};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(PolygonInput::Integral(p)) = parse_polygon_json(s) {
        let c = p.lattice_points();
        assert!(c.boundary <= c.total());
    }
});
