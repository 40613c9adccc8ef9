//! Exact arithmetic over `F_q`, `F_q[T]`, `F_q(T)` and its places.

mod field;
mod matrix;
mod parse;
mod place;
mod poly;
mod ratfunc;

pub(crate) use field::{add_mod, check_modulus, inv_mod, mul_mod, pow_mod, sub_mod};
pub use field::{is_prime, FieldScalar};
pub use matrix::{Mat2, P1};
pub use parse::{parse_poly, parse_ratfunc};
pub use place::{enumerate_places, poly_valuation, valuation, Place};
pub use poly::{Degree, Poly};
pub use ratfunc::RatFunc;
