use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::space::HarmonicCochain;
use crate::error::{Error, Result};

/// `Σ φ(e)ψ(e)/#Γ̄_e` over the oriented edges of the quotient; each orbit is counted
/// once per orientation.
pub fn petersson(phi: &HarmonicCochain, psi: &HarmonicCochain) -> Result<BigRational> {
    if !Arc::ptr_eq(phi.graph(), psi.graph()) {
        return Err(Error::InvalidInput(
            "pairing needs cochains on one graph".into(),
        ));
    }
    let g = phi.graph();
    let mut sum = BigRational::zero();
    for e in g.edge_orbits() {
        let v = phi.value(e) as i128 * psi.value(e) as i128;
        if v != 0 {
            sum += BigRational::new(BigInt::from(2 * v), BigInt::from(g.stabilizer_order(e)));
        }
    }
    Ok(sum)
}
