//! Exact scalars and linear algebra over the rationals and prime fields.

pub mod linalg;
pub mod modular;
pub mod scalar;
pub mod snf;

pub use linalg::{
    bareiss_nullspace, binomial, binomial_i64, binomial_row, integer_kernel, integer_nullity, rank_mod_p,
    rational_kernel, Matrix,
};
pub use modular::is_prime;
pub use scalar::{
    check_char, parse_rational, rational_string, serialize_rational, serialize_rationals, Char, Scalar,
};
pub use snf::{hermite_normal_form, smith_normal_form, IntMatrix, Smith};
