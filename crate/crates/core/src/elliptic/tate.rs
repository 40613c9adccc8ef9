use serde::Serialize;

use super::curve::EllipticCurve;
use super::reduction::Reduction;
use crate::error::{Error, Result};
use crate::local::{tate_q_from_j, LocalElement, LocalField};

/// `q_E` at the split multiplicative place, its valuation `m_p` and the unit `q_E/π^{m_p}`.
#[derive(Clone, Debug, Serialize)]
pub struct TatePeriod {
    pub m_p: i64,
    pub q: LocalElement,
    pub q_tilde: LocalElement,
}

impl EllipticCurve {
    pub fn tate_period(&self, prec: u32) -> Result<TatePeriod> {
        match self.reduction_check(&self.p)? {
            Reduction::SplitMultiplicative { .. } => {}
            other => {
                return Err(Error::Reduction(format!(
                    "Tate period needs split multiplicative reduction at {}, found {other:?}",
                    self.p
                )))
            }
        }
        let field = LocalField::new(self.p.clone());
        let j = field.embed(&self.quantities()?.j, prec);
        let q = tate_q_from_j(&j, prec)?;
        let m_p = q.valuation();
        let q_tilde = q.mul(&field.uniformizer_pow(-m_p, q.precision()));
        Ok(TatePeriod { m_p, q, q_tilde })
    }
}
