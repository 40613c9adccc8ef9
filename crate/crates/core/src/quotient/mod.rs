//! The quotient graph `Γ₀(m)\T_∞` of the Bruhat–Tits tree at infinity.

mod graph;
mod p1;
mod reduce;

pub use graph::{build_quotient, group_order, orbits, EdgeOrbit, Layer, LayerGroup, QuotientGraph};
pub use p1::{p1_count, p1_points, P1Table, ProjPoint};
pub use reduce::{normal_form_at_infinity, reduce_at_infinity, Projection};
