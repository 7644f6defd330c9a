//! The checked-in fuzz seeds must exercise the success path of each parser.

use std::path::Path;

use negcurve::lattice_geom::parse_polygon_json;
use negcurve::laurent_poly::{parse_json, parse_text, to_json};
use negcurve::toric_surface::{class_group_of_rays, parse_rays};

fn seeds(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn laurent_text_seeds_round_trip() {
    for s in seeds("laurent_text") {
        let p = parse_text(&s, 0).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(parse_text(&p.to_string(), 0).unwrap(), p);
        assert_eq!(parse_json(&to_json(&p).to_string()).unwrap(), p);
    }
}

#[test]
fn laurent_json_seeds_round_trip() {
    for s in seeds("laurent_json") {
        let p = parse_json(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(parse_json(&to_json(&p).to_string()).unwrap(), p);
    }
}

#[test]
fn polygon_seeds_parse() {
    for s in seeds("polygon_json") {
        parse_polygon_json(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn ray_seeds_parse() {
    for s in seeds("rays") {
        let rays = parse_rays(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
        class_group_of_rays(&rays).unwrap();
    }
}
