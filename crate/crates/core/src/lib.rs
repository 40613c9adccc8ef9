//! Harmonic cochains on Bruhat–Tits trees over `F_q(T)`, modular symbols,
//! boundary measures and multiplicative integrals, with a verifier for the
//! exceptional-zero identity of split multiplicative elliptic curves.

pub mod algebra;
pub mod cochains;
pub mod elliptic;
pub mod error;
pub mod harness;
pub mod integrals;
pub mod local;
pub mod quotient;
pub mod symbols;
pub mod tree;

pub use algebra::{FieldScalar, Place, Poly, RatFunc};
pub use error::{Error, Result};
