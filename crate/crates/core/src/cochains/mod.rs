//! Cuspidal harmonic cochains on the quotient graph and the operators acting on them.

pub mod linalg;
mod newform;
mod operators;
mod petersson;
mod space;

pub use newform::{newform_for_curve, EigenvalueEntry, Newform, NewformOptions};
pub use operators::{
    atkin_lehner, atkin_lehner_matrix, hecke_operator, inclusion, trace, trace_conjugate,
    u_operator, EdgeOperator,
};
pub use petersson::petersson;
pub use space::{cuspidal_basis, CochainEntry, CuspidalSpace, HarmonicCochain};
