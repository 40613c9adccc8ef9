use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::linalg::{integer_rows, nullspace, q_identity};
use super::operators::hecke_operator;
use super::space::{CuspidalSpace, HarmonicCochain};
use crate::algebra::{Place, Poly};
use crate::elliptic::{EllipticCurve, Reduction};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct NewformOptions {
    /// Use every good place of degree up to this bound.
    pub degree_bound: usize,
    /// Keep raising the bound to here while the eigenspace is not a line.
    pub max_degree: usize,
}

impl Default for NewformOptions {
    fn default() -> Self {
        Self {
            degree_bound: 3,
            max_degree: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueEntry {
    pub place: Place,
    pub a: i64,
}

/// The primitive integral cochain whose Hecke eigenvalues match a curve.
#[derive(Clone, Debug)]
pub struct Newform {
    pub cochain: HarmonicCochain,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub degree_bound: usize,
}

pub fn newform_for_curve(
    curve: &EllipticCurve,
    space: &CuspidalSpace,
    opts: NewformOptions,
) -> Result<Newform> {
    let graph = space.graph();
    let dim = space.dim();
    if dim == 0 {
        return Err(Error::NoEigenform("the cuspidal space is zero".into()));
    }
    let q = graph.q();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut eigenvalues = Vec::new();
    for d in 1..=opts.max_degree {
        for pi in Poly::monics_of_degree(q, d) {
            if !pi.is_irreducible()? || pi.divides(graph.level()) {
                continue;
            }
            let place = Place::finite(pi.clone())?;
            if curve.reduction_check(&place)? != Reduction::Good {
                continue;
            }
            let a = curve.a_v(&place)?;
            let mut m = hecke_operator(graph, &pi)?.matrix_on(space)?;
            let shift = BigRational::from_integer(a.into());
            for (i, row) in q_identity(dim).into_iter().enumerate() {
                m[i][i] -= &shift * &row[i];
            }
            rows.extend(integer_rows(&m));
            eigenvalues.push(EigenvalueEntry { place, a });
        }
        let (kernel, _) = nullspace(&rows, dim);
        match kernel.len() {
            0 => {
                return Err(Error::NoEigenform(format!(
                    "no common eigenvector through degree {d}"
                )))
            }
            1 if d >= opts.degree_bound => {
                let coeffs = kernel[0]
                    .iter()
                    .map(|c| {
                        c.to_i64()
                            .ok_or_else(|| Error::NoEigenform("coefficient overflow".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let v = space.combine(&coeffs);
                let g = v.content();
                let mut v = v.values().iter().map(|x| x / g).collect::<Vec<_>>();
                if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                return Ok(Newform {
                    cochain: HarmonicCochain::from_values(graph.clone(), v)?,
                    eigenvalues,
                    degree_bound: d,
                });
            }
            n if d == opts.max_degree => return Err(Error::EigenspaceDimension(n)),
            _ => {}
        }
    }
    Err(Error::EigenspaceDimension(dim))
}
