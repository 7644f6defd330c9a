//! Command-line front end. Reports go to stdout as compact JSON or as
//! indented `key: value` text; progress goes to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact_arith::{check_char, rational_string, Char};
use crate::herzog_semigroup::{herzog_data, triangle};
use crate::lattice_geom::{parse_polygon_json, polygon_json, PolygonInput};
use crate::laurent_poly::{parse_json, parse_text, LaurentPoly};
use crate::nct_catalog::{classify, ggk_prime_family, ggk_tetragon, is_nct};
use crate::negcurve_search::{scan_with_progress, ScanOptions};
use crate::symbolic_power::{ehrhart_polynomial, hilbert_numerator, PREFILTER_SEED};
use crate::toric_surface::{class_group_of_rays, intersection_numbers, parse_rays, thm36_report, Fan2D};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "negcurve", version, about = "Negative curves on blow-ups of weighted projective planes")]
pub struct Config {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "NEGCURVE_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized stages (modular prefilter primes).
    #[arg(long, default_value_t = PREFILTER_SEED, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Herzog data and the rational triangle of (a, b, c).
    Herzog { a: i64, b: i64, c: i64 },
    /// Scan for negative curves with r <= rmax.
    Search {
        a: i64,
        b: i64,
        c: i64,
        #[arg(long = "char", default_value_t = 0)]
        ch: Char,
        #[arg(long)]
        rmax: usize,
        /// Restrict to these degrees.
        #[arg(long = "d")]
        degrees: Vec<i64>,
        /// Include cells with large supports; reports progress on stderr.
        #[arg(long)]
        long: bool,
    },
    /// Check whether a polynomial (text or JSON file) is an r-nct.
    CheckNct {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long = "char")]
        ch: Option<Char>,
    },
    /// Condition report for the blow-up of the toric surface of a polynomial.
    Thm36 {
        file: PathBuf,
        #[arg(long)]
        r: i64,
        #[arg(long = "char")]
        ch: Option<Char>,
    },
    /// Representatives of all r-nct classes.
    Classify {
        #[arg(long)]
        r: usize,
        #[arg(long = "char", default_value_t = 0)]
        ch: Char,
        /// Allow r = 3.
        #[arg(long)]
        experimental: bool,
    },
    /// The tetragon-family r-nct and its lattice counts.
    Ggk {
        #[arg(long)]
        r: i64,
        #[arg(long = "char", default_value_t = 0)]
        ch: Char,
    },
    /// Lattice counts, Ehrhart polynomial and Hilbert numerator of a polygon.
    Ehrhart {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        dilate: i64,
    },
    /// Class group of a toric variety given by its rays.
    Classgroup {
        /// `2,-1;-2,-1;0,1`, a JSON ray list, or a file holding either.
        rays: String,
    },
}

/// Exit status for an error: 2 for contradictions, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Contradiction(_) | Error::KernelDimension { .. } => 2,
        _ => 1,
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// A polynomial from text or JSON. A JSON polynomial over Q is reduced when
/// a positive characteristic is requested.
pub fn read_poly(text: &str, ch: Option<Char>) -> Result<LaurentPoly> {
    if text.trim_start().starts_with('{') {
        let p = parse_json(text)?;
        match ch {
            None => Ok(p),
            Some(c) if c == p.char() => Ok(p),
            Some(c) if p.char() == 0 => p.reduce_mod(c),
            Some(c) => Err(Error::CharMismatch(p.char(), c)),
        }
    } else {
        parse_text(text, ch.unwrap_or(0))
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn herzog(a: i64, b: i64, c: i64) -> Result<Value> {
    let h = herzog_data(a, b, c)?;
    let tri = triangle(&h)?;
    let mut v = to_value(&h);
    v["triangle"] = polygon_json(tri.vertices());
    v["area2"] = json!(rational_string(&tri.area2()));
    Ok(v)
}

fn ehrhart(text: &str, dilate: i64) -> Result<Value> {
    let (verts, counts, poly) = match parse_polygon_json(text)? {
        PolygonInput::Integral(p) => (p.to_rational(), p.dilate(dilate)?.lattice_points(), Some(p)),
        PolygonInput::Rational(p) => {
            let c = p.dilate(dilate)?.lattice_points();
            (p, c, None)
        }
    };
    let mut v = json!({
        "polygon": polygon_json(verts.vertices()),
        "dilate": dilate,
        "lattice_count": counts.total(),
        "boundary": counts.boundary,
        "interior": counts.interior,
    });
    if let Some(p) = poly.filter(|p| p.dimension() == 2) {
        let e = ehrhart_polynomial(&p)?;
        v["ehrhart"] = e.iter().map(rational_string).collect();
        v["hilbert_numerator"] = json!(hilbert_numerator(&p, 6)?);
    }
    Ok(v)
}

fn classgroup(arg: &str) -> Result<Value> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) => arg.to_string(),
    };
    let rays = parse_rays(&text)?;
    let mut v = to_value(&class_group_of_rays(&rays)?);
    if rays[0].len() == 2 {
        if let Ok(fan) = Fan2D::new(rays.iter().map(|r| (r[0], r[1])).collect()) {
            v["fan_rays"] = json!(fan.rays());
            v["smooth"] = json!(fan.is_smooth());
            v["intersections"] = to_value(&intersection_numbers(&fan));
        }
    }
    Ok(v)
}

fn search(cfg: &Config, a: i64, b: i64, c: i64, ch: Char, rmax: usize, degrees: &[i64], long: bool) -> Result<Value> {
    let opts = ScanOptions { degrees: (!degrees.is_empty()).then(|| degrees.to_vec()), long, seed: cfg.seed };
    let done = AtomicUsize::new(0);
    let progress = |r: usize, d: i64| {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        if long && n.is_multiple_of(500) {
            eprintln!("[search] {n} cells done (last r = {r}, d = {d})");
        }
    };
    let out = scan_with_progress(a, b, c, ch, rmax, &opts, &progress)?;
    if !out.skipped.is_empty() {
        eprintln!("[search] {} large cells skipped; rerun with --long", out.skipped.len());
    }
    Ok(to_value(&out))
}

fn dispatch(cfg: &Config) -> Result<Value> {
    match &cfg.command {
        Command::Herzog { a, b, c } => herzog(*a, *b, *c),
        Command::Search { a, b, c, ch, rmax, degrees, long } => {
            check_char(*ch)?;
            search(cfg, *a, *b, *c, *ch, *rmax, degrees, *long)
        }
        Command::CheckNct { file, r, ch } => Ok(to_value(&is_nct(&read_poly(&read(file)?, *ch)?, *r)?)),
        Command::Thm36 { file, r, ch } => Ok(to_value(&thm36_report(&read_poly(&read(file)?, *ch)?, *r)?)),
        Command::Classify { r, ch, experimental } => Ok(to_value(&classify(*r, *ch, *experimental)?)),
        Command::Ggk { r, ch } => {
            let phi = ggk_prime_family(*r, *ch)?;
            let counts = ggk_tetragon(*r)?.lattice_points();
            Ok(json!({
                "r": r,
                "phi": phi,
                "vertices": phi.newton_polygon()?.vertices(),
                "lattice_count": counts.total(),
                "boundary": counts.boundary,
                "interior": counts.interior,
                "kernel_dimension": 1,
            }))
        }
        Command::Ehrhart { file, dilate } => ehrhart(&read(file)?, *dilate),
        Command::Classgroup { rays } => classgroup(rays),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Indented `key: value` lines; arrays of scalars stay on one line.
pub fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object() || e.is_array())) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() || x.is_array() {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(x)));
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar_text(x))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        x => scalar_text(x),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match Config::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    if let Some(n) = cfg.threads {
        // Fails only if a pool already exists, e.g. on a second call in tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(&cfg) {
        Ok(v) => {
            let body = match cfg.format {
                Format::Json => serde_json::to_string(&v).expect("json"),
                Format::Text => {
                    let mut s = String::new();
                    render_text(&v, 0, &mut s);
                    s.trim_end().to_string()
                }
            };
            let _ = writeln!(stdout, "{body}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("negcurve").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn herzog_json() {
        let (code, out, _) = call(&["herzog", "9", "10", "13"]);
        assert_eq!(code, 0);
        for key in ["\"s2\":3", "\"s3\":1", "\"t1\":1", "\"t3\":3", "\"u1\":2", "\"u2\":1", "\"area2\":\"1/1170\""] {
            assert!(out.contains(key), "{key} missing in {out}");
        }
    }

    #[test]
    fn errors_and_codes() {
        assert_eq!(call(&["herzog", "9", "10", "12"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["classify", "--r", "3"]).0, 1);
        assert_eq!(call(&["classgroup", "1,0;0"]).0, 1);
    }

    #[test]
    fn text_carries_the_numbers() {
        let (_, json_out, _) = call(&["classgroup", "2,-1;-2,-1;0,1"]);
        let (_, text, _) = call(&["--format", "text", "classgroup", "2,-1;-2,-1;0,1"]);
        let v: Value = serde_json::from_str(&json_out).unwrap();
        assert_eq!(v["torsion"], json!([2]));
        assert!(text.contains("torsion: [2]"), "{text}");
        assert!(text.contains("free_rank: 1"));
    }

    #[test]
    fn poly_inputs() {
        let text = "-v^2*w - v*w^2 + 3*v*w - 1";
        let p = read_poly(text, None).unwrap();
        let j = crate::laurent_poly::to_json(&p).to_string();
        assert_eq!(read_poly(&j, None).unwrap(), p);
        assert_eq!(read_poly(&j, Some(3)).unwrap(), p.reduce_mod(3).unwrap());
        let j3 = crate::laurent_poly::to_json(&p.reduce_mod(3).unwrap()).to_string();
        assert_eq!(read_poly(&j3, Some(5)), Err(Error::CharMismatch(3, 5)));
    }
}
