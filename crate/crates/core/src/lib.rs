pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod herzog_semigroup;
pub mod irreducibility;
pub mod lattice_geom;
pub mod negcurve_search;
pub mod nct_catalog;
pub mod symbolic_power;
pub mod laurent_poly;
pub mod toric_surface;

pub use error::{Error, Result};
