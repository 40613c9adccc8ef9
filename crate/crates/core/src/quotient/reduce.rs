use serde::Serialize;

use super::graph::{EdgeOrbit, QuotientGraph};
use crate::algebra::{Mat2, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::tree::{Family, OrientedEdge};

/// Where a tree edge at infinity lands in the quotient.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Projection {
    pub edge: EdgeOrbit,
    /// `+1` if the edge has the orientation of the stored representative `e_{-k}`.
    pub sign: i64,
}

/// Continued-fraction bound on reduction steps; each step lowers the level by at least 2.
fn step_cap(n: i64) -> usize {
    n.max(0) as usize / 2 + 4
}

/// Degree-at-infinity valuation `ν_∞(x) = -deg x`.
fn nu_inf(x: &RatFunc) -> Option<i64> {
    x.degree().map(|d| -d)
}

/// `u mod π^n O_∞` for `n >= 1` and `deg u < 0`: keep the terms `T^-j`, `j < n`.
fn truncate_inf(u: &RatFunc, n: i64) -> RatFunc {
    let q = u.modulus();
    let s = Poly::monomial(q, 1, (n - 1) as usize);
    let scaled = u.mul(&RatFunc::from_poly(s.clone()));
    RatFunc::new(scaled.poly_part(), s).unwrap()
}

/// Reduce the edge `(π^n, u; 0, 1)·[w]·e₀` at infinity to `M·e_{-k}` (or its reverse)
/// with `M ∈ GL_2(F_q[T])`; returns `k`, the family, and the bottom row of `M` mod `m`.
pub fn reduce_at_infinity(
    n: i64,
    u: &RatFunc,
    family: Family,
    m: &Poly,
) -> Result<(u64, Family, Poly, Poly)> {
    let q = m.modulus();
    let (mut n, mut u, mut family) = (n, u.clone(), family);
    let (mut c, mut d) = (Poly::zero(q), Poly::one(q));
    for _ in 0..step_cap(n) {
        let b = u.poly_part();
        if !b.is_zero() {
            d = (&(&c * &b) + &d).rem(m)?;
            u = u.sub(&RatFunc::from_poly(b));
        }
        if n <= 0 {
            return Ok(((-n) as u64, family, c, d));
        }
        u = truncate_inf(&u, n);
        std::mem::swap(&mut c, &mut d);
        if u.is_zero() {
            n = 1 - n;
            family = family.toggled();
        } else {
            let d0 = nu_inf(&u).unwrap();
            n -= 2 * d0;
            u = u.inv()?;
        }
    }
    Err(Error::PathCap(step_cap(n)))
}

/// Normal form `(n, u, family)` at infinity of `g·e₀`, with `u` exact.
pub fn normal_form_at_infinity(g: &Mat2) -> Result<(i64, RatFunc, Family)> {
    let det = g.det();
    let vdet = nu_inf(&det).ok_or(Error::DivisionByZero)?;
    let (vc, vd) = (nu_inf(&g.c), nu_inf(&g.d));
    let main = match (vc, vd) {
        (None, _) => true,
        (Some(c), Some(d)) => d < c,
        (Some(_), None) => false,
    };
    Ok(if main {
        (vdet - 2 * vd.unwrap(), g.b.div(&g.d)?, Family::Main)
    } else {
        (vdet + 1 - 2 * vc.unwrap(), g.a.div(&g.c)?, Family::Flipped)
    })
}

impl QuotientGraph {
    /// Project `(π^n, u; 0, 1)·[w]·e₀` at infinity to its edge orbit and orientation.
    pub fn project(&self, n: i64, u: &RatFunc, family: Family) -> Result<Projection> {
        let (k, fam, c, d) = reduce_at_infinity(n, u, family, self.level())?;
        let x = self.table.lookup(&c, &d)?;
        Ok(Projection {
            edge: self.edge_orbit_of(k as usize, x),
            sign: if fam == Family::Main { 1 } else { -1 },
        })
    }

    /// Project the edge `g·e₀` for a matrix over `F_q(T)`.
    pub fn project_matrix(&self, g: &Mat2) -> Result<Projection> {
        let (n, u, fam) = normal_form_at_infinity(g)?;
        self.project(n, &u, fam)
    }

    /// Project an oriented edge of the tree at infinity.
    pub fn project_edge(&self, e: &OrientedEdge) -> Result<Projection> {
        if !e.place().is_infinity() {
            return Err(Error::BadPlace(
                "projection needs an edge at infinity".into(),
            ));
        }
        self.project(e.n, &e.center(), e.family)
    }

    /// A matrix `γ ∈ SL_2(F_q[T])` whose bottom row represents the point `x`.
    pub fn representative(&self, x: usize) -> Mat2 {
        let m = self.level();
        let q = self.q();
        let p = self.table.point(x);
        if p.c.is_zero() {
            return Mat2::identity(q);
        }
        let mut t = 0u64;
        loop {
            let d = &p.d + &(&Poly::from_index(q, t) * m);
            if p.c.gcd(&d).is_one() {
                let (_, e, f) = p.c.xgcd(&d);
                // e·c + f·d = 1
                return Mat2::from_polys(&f, &-&e, &p.c, &d);
            }
            t += 1;
        }
    }

    /// A tree edge in the orbit: `γ_x · diag(T^k, 1) · e₀`.
    pub fn edge_matrix(&self, e: EdgeOrbit) -> Mat2 {
        let x = self.edges[e.layer.min(self.depth - 1)].reps[e.orbit];
        let q = self.q();
        let tk = Mat2::from_polys(
            &Poly::monomial(q, 1, e.layer),
            &Poly::zero(q),
            &Poly::zero(q),
            &Poly::one(q),
        );
        self.representative(x).mul(&tk)
    }
}
