//! Truncated π-adic arithmetic at a place of `F_q(T)`, Teichmüller lifts,
//! the unramified quadratic extension and the Tate period from `j`.

mod element;
mod quad;
mod tate;
mod teich;

pub use element::{LocalElement, LocalField, DEFAULT_PRECISION};
pub use quad::{QuadElement, QuadExt};
pub use tate::{tate_q_from_j, tate_q_with, verify_j_checksum, TateSeries, J_COEFFICIENTS};
pub use teich::detect_root_of_unity;
