use super::element::{LocalElement, LocalField};
use crate::algebra::Poly;
use crate::error::{Error, Result};

impl LocalField {
    /// The Teichmüller representative of a nonzero residue `r` (a polynomial of
    /// degree below the residue degree), to `prec` digits.
    pub fn teichmuller(&self, r: &Poly, prec: u32) -> Result<LocalElement> {
        let r = r.rem(self.pi())?;
        if r.is_zero() {
            return Err(Error::InvalidInput("Teichmüller lift of zero".into()));
        }
        let m = self.pi_pow(prec);
        let frob = self.residue_size();
        let mut y = r;
        for _ in 0..=prec {
            let next = y.pow_mod(frob, &m);
            if next == y {
                break;
            }
            y = next;
        }
        Ok(self.from_parts(0, y, prec))
    }

    /// Elements of the residue field, as polynomials of degree below the residue degree.
    pub fn residues(&self) -> impl Iterator<Item = Poly> {
        Poly::all_below_degree(self.q(), self.degree())
    }
}

/// If `x` is a root of unity to its full precision, the residue it lifts.
pub fn detect_root_of_unity(x: &LocalElement) -> Result<Option<Poly>> {
    if x.precision() < 2 {
        return Err(Error::PrecisionExhausted(format!(
            "root-of-unity detection needs 2 relative digits, have {}",
            x.precision()
        )));
    }
    if x.valuation() != 0 {
        return Ok(None);
    }
    let r = x.residue();
    let t = x.field().teichmuller(&r, x.precision())?;
    Ok((t.unit() == x.unit()).then_some(r))
}
