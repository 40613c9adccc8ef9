use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::linalg::QMatrix;
use super::space::{CuspidalSpace, HarmonicCochain};
use crate::algebra::{Mat2, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::quotient::{Projection, QuotientGraph};

/// A linear map between cochain spaces, stored as signed edge-orbit lookups:
/// the output value on target orbit `s` is `Σ sign·φ(source orbit)`.
#[derive(Clone, Debug)]
pub struct EdgeOperator {
    source: Arc<QuotientGraph>,
    target: Arc<QuotientGraph>,
    rows: Vec<Vec<Projection>>,
}

impl EdgeOperator {
    /// For every target orbit with tree representative `E`, evaluate the source cochain
    /// on `h·E` for each `h` produced by `mats(E)`.
    pub fn build(
        source: Arc<QuotientGraph>,
        target: Arc<QuotientGraph>,
        mats: &[Mat2],
    ) -> Result<Self> {
        Self::build_with(source, target, |e| mats.iter().map(|h| h.mul(e)).collect())
    }

    pub fn build_with(
        source: Arc<QuotientGraph>,
        target: Arc<QuotientGraph>,
        mats: impl Fn(&Mat2) -> Vec<Mat2>,
    ) -> Result<Self> {
        let rows = target
            .edge_orbits()
            .map(|s| {
                mats(&target.edge_matrix(s))
                    .iter()
                    .map(|g| source.project_matrix(g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            source,
            target,
            rows,
        })
    }

    pub fn apply(&self, phi: &HarmonicCochain) -> Result<HarmonicCochain> {
        if !Arc::ptr_eq(phi.graph(), &self.source) {
            return Err(Error::InvalidInput(
                "cochain lives on a different graph".into(),
            ));
        }
        let values = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&p| phi.at(p)).sum())
            .collect();
        HarmonicCochain::from_values(self.target.clone(), values)
    }

    /// Matrix on a basis of the cuspidal space; column `j` holds the image of `b_j`.
    pub fn matrix_on(&self, space: &CuspidalSpace) -> Result<QMatrix> {
        let n = space.dim();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (j, b) in space.basis().iter().enumerate() {
            let img = self.apply(b)?;
            for (i, c) in space.coordinates(img.values())?.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        Ok(m)
    }
}

/// `(1, b; 0, P)` for `deg b < deg P`.
fn upper_reps(p: &Poly) -> Vec<Mat2> {
    let q = p.modulus();
    let (one, zero) = (Poly::one(q), Poly::zero(q));
    Poly::all_below_degree(q, p.deg().unwrap_or(0))
        .map(|b| Mat2::from_polys(&one, &b, &zero, p))
        .collect()
}

fn check_prime(p: &Poly) -> Result<()> {
    if !p.is_monic() || p.deg().unwrap_or(0) == 0 || !p.is_irreducible()? {
        return Err(Error::BadPlace(format!("{p} is not a monic irreducible")));
    }
    Ok(())
}

/// Hecke operator `T_Q` for a prime `Q` not dividing the level.
pub fn hecke_operator(graph: &Arc<QuotientGraph>, qp: &Poly) -> Result<EdgeOperator> {
    check_prime(qp)?;
    if qp.divides(graph.level()) {
        return Err(Error::BadPlace(format!("{qp} divides the level")));
    }
    let q = qp.modulus();
    let mut reps = upper_reps(qp);
    reps.push(Mat2::from_polys(
        qp,
        &Poly::zero(q),
        &Poly::zero(q),
        &Poly::one(q),
    ));
    EdgeOperator::build(graph.clone(), graph.clone(), &reps)
}

/// `U_P` for a prime `P` dividing the level: the upper cosets only.
pub fn u_operator(graph: &Arc<QuotientGraph>, p: &Poly) -> Result<EdgeOperator> {
    check_prime(p)?;
    if !p.divides(graph.level()) {
        return Err(Error::BadPlace(format!("{p} does not divide the level")));
    }
    EdgeOperator::build(graph.clone(), graph.clone(), &upper_reps(p))
}

/// The Atkin–Lehner matrix `(P x, 1; m z, P)` with `P x - (m/P) z = 1`.
pub fn atkin_lehner_matrix(m: &Poly, p: &Poly) -> Result<Mat2> {
    let q = m.modulus();
    let n = m.div_exact(p)?;
    if p.divides(&n) {
        return Err(Error::InvalidInput(format!(
            "{p} does not exactly divide {m}"
        )));
    }
    let (g, x, z) = p.xgcd(&n);
    debug_assert!(g.is_one());
    // x·P + z·n = 1, so take z ↦ -z.
    Ok(Mat2::from_polys(&(p * &x), &Poly::one(q), &(m * &(-&z)), p))
}

pub fn atkin_lehner(graph: &Arc<QuotientGraph>, p: &Poly) -> Result<EdgeOperator> {
    check_prime(p)?;
    let w = atkin_lehner_matrix(graph.level(), p)?;
    EdgeOperator::build(graph.clone(), graph.clone(), &[w])
}

/// Restriction of a level-`m` cochain to level `m·P`.
pub fn inclusion(low: &Arc<QuotientGraph>, high: &Arc<QuotientGraph>) -> Result<EdgeOperator> {
    check_levels(low, high)?;
    EdgeOperator::build(low.clone(), high.clone(), &[Mat2::identity(low.q())])
}

fn check_levels(low: &QuotientGraph, high: &QuotientGraph) -> Result<Poly> {
    let p = high.level().div_exact(low.level()).map_err(|_| {
        Error::InvalidInput(format!("{} does not divide {}", low.level(), high.level()))
    })?;
    check_prime(&p)?;
    if p.divides(low.level()) {
        return Err(Error::InvalidInput(format!(
            "{p} already divides {}",
            low.level()
        )));
    }
    Ok(p)
}

/// Trace from `Γ₀(m·P)` to `Γ₀(m)`: sum over `h ∈ Γ₀(mP)\Γ₀(m)`,
/// represented by `(1, 0; m t, 1)` with `deg t < deg P` and `(a, b; m, P)`.
pub fn trace(high: &Arc<QuotientGraph>, low: &Arc<QuotientGraph>) -> Result<EdgeOperator> {
    let p = check_levels(low, high)?;
    let m = low.level();
    let q = m.modulus();
    let (one, zero) = (Poly::one(q), Poly::zero(q));
    let mut reps: Vec<Mat2> = Poly::all_below_degree(q, p.deg().unwrap())
        .map(|t| Mat2::from_polys(&one, &zero, &(m * &t), &one))
        .collect();
    let (_, a, b) = p.xgcd(m);
    // a·P + b·m = 1
    reps.push(Mat2::from_polys(&a, &(-&b), m, &p));
    EdgeOperator::build(high.clone(), low.clone(), &reps)
}

/// The other degeneracy trace: `Σ φ(δ h e)` with `δ = diag(1/P, 1)` and `h` running over
/// `(Γ₀(m) ∩ Γ⁰(P))\Γ₀(m)`, represented by `(1, t; 0, 1)` and `(P x, 1; m z, 1)`.
pub fn trace_conjugate(
    high: &Arc<QuotientGraph>,
    low: &Arc<QuotientGraph>,
) -> Result<EdgeOperator> {
    let p = check_levels(low, high)?;
    let m = low.level();
    let q = m.modulus();
    let (one, zero) = (Poly::one(q), Poly::zero(q));
    let mut hs: Vec<Mat2> = Poly::all_below_degree(q, p.deg().unwrap())
        .map(|t| Mat2::from_polys(&one, &t, &zero, &one))
        .collect();
    let (_, x, z) = p.xgcd(m);
    // x·P + z·m = 1
    hs.push(Mat2::from_polys(&(&p * &x), &one, &(m * &(-&z)), &one));
    let delta = Mat2::new(
        RatFunc::new(one.clone(), p.clone())?,
        RatFunc::zero(q),
        RatFunc::zero(q),
        RatFunc::one(q),
    );
    let reps: Vec<Mat2> = hs.iter().map(|h| delta.mul(h)).collect();
    EdgeOperator::build(high.clone(), low.clone(), &reps)
}
