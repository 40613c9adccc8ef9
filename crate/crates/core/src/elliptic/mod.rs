//! Elliptic curves over `F_q(T)`: Weierstrass quantities, reduction types,
//! point counts and Tate periods.

mod curve;
mod reduction;
mod scan;
mod tate;

pub use curve::{weierstrass_quantities, CurveQuantities, EllipticCurve};
pub use reduction::{count_points, reduction_of, trace_of_frobenius, Reduction};
pub use scan::{scan, ScanBounds, ScanHit};
pub use tate::TatePeriod;
