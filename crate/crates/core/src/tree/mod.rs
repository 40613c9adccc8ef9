//! The Bruhat–Tits tree of `PGL_2` over a completion of `F_q(T)`: edge and
//! vertex normal forms, matrix reduction, boundary balls and geodesics.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::algebra::{valuation, Mat2, Place, Poly, RatFunc, P1};
use crate::error::{Error, Result};
use crate::local::{LocalElement, LocalField};

/// Extra digits `reduce_matrix` insists on beyond the level it resolves.
pub const PRECISION_MARGIN: i64 = 2;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(π^n, u; 0, 1)·e₀`, pointing away from the end `∞`.
    Main,
    /// `(π^n, u; 0, 1)·(0, 1; π, 0)·e₀`, the reverse of the main edge.
    Flipped,
}

impl Family {
    pub fn toggled(self) -> Self {
        match self {
            Family::Main => Family::Flipped,
            Family::Flipped => Family::Main,
        }
    }
}

/// A class in `F_v / π^n O_v` as a sparse map exponent → residue digit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Tail(BTreeMap<i64, Poly>);

impl Tail {
    pub fn zero() -> Self {
        Tail(BTreeMap::new())
    }

    /// Digits of `x` at exponents below `n`.
    pub fn of(field: &LocalField, x: &RatFunc, n: i64) -> Tail {
        let mut digits = BTreeMap::new();
        if x.is_zero() {
            return Tail(digits);
        }
        let v = valuation(x, field.place()).unwrap();
        if v >= n {
            return Tail(digits);
        }
        let e = field.embed(x, (n - v) as u32);
        for (i, d) in e.digits().into_iter().enumerate() {
            if !d.is_zero() {
                digits.insert(v + i as i64, d);
            }
        }
        Tail(digits)
    }

    /// Digits of a local element at exponents below `n`; its precision must reach `n`.
    pub fn of_local(x: &LocalElement, n: i64) -> Result<Tail> {
        if x.absolute_precision() < n {
            return Err(Error::PrecisionExhausted(format!(
                "tail up to π^{n} needs absolute precision {n}, have {}",
                x.absolute_precision()
            )));
        }
        let mut digits = BTreeMap::new();
        if !x.is_zero() {
            for (i, d) in x.digits().into_iter().enumerate() {
                let e = x.valuation() + i as i64;
                if e >= n {
                    break;
                }
                if !d.is_zero() {
                    digits.insert(e, d);
                }
            }
        }
        Ok(Tail(digits))
    }

    pub fn digits(&self) -> &BTreeMap<i64, Poly> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Keep only exponents below `n`.
    pub fn truncated(&self, n: i64) -> Tail {
        Tail(self.0.range(..n).map(|(k, v)| (*k, v.clone())).collect())
    }

    /// The exact global element `Σ d_i π^i` (at infinity `π = 1/T`).
    pub fn to_ratfunc(&self, field: &LocalField) -> RatFunc {
        let q = field.q();
        let mut acc = RatFunc::zero(q);
        let base = match field.place() {
            Place::Finite(pi) => pi.clone(),
            Place::Infinity { .. } => Poly::t(q),
        };
        let sign = if field.place().is_infinity() { -1 } else { 1 };
        for (&e, d) in &self.0 {
            let term = RatFunc::from_poly(d.clone()).mul_pow(&base, sign * e);
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(e, d)| format!("[{d}]π^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An oriented edge in normal form.
#[derive(Clone)]
pub struct OrientedEdge {
    field: LocalField,
    pub n: i64,
    pub tail: Tail,
    pub family: Family,
}

impl OrientedEdge {
    pub fn new(field: &LocalField, n: i64, tail: Tail, family: Family) -> Self {
        let tail = tail.truncated(n);
        Self {
            field: field.clone(),
            n,
            tail,
            family,
        }
    }

    pub fn from_global(field: &LocalField, n: i64, u: &RatFunc, family: Family) -> Self {
        Self::new(field, n, Tail::of(field, u, n), family)
    }

    /// The standard edge `e₀`.
    pub fn base(field: &LocalField) -> Self {
        Self::new(field, 0, Tail::zero(), Family::Main)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn place(&self) -> &Place {
        self.field.place()
    }

    pub fn reverse(&self) -> Self {
        Self {
            field: self.field.clone(),
            n: self.n,
            tail: self.tail.clone(),
            family: self.family.toggled(),
        }
    }

    /// Center of the ball of the underlying main edge, as a global element.
    pub fn center(&self) -> RatFunc {
        self.tail.to_ratfunc(&self.field)
    }

    /// A matrix `g` with `g·e₀ = self`.
    pub fn matrix(&self) -> Mat2 {
        let q = self.field.q();
        let (one, zero) = (RatFunc::one(q), RatFunc::zero(q));
        let pi = self.field.embed_uniformizer_global();
        let g = Mat2::new(
            pi_pow(&pi, self.n),
            self.center(),
            zero.clone(),
            one.clone(),
        );
        match self.family {
            Family::Main => g,
            Family::Flipped => g.mul(&Mat2::new(zero.clone(), one, pi, zero)),
        }
    }

    pub fn terminus(&self) -> Vertex {
        match self.family {
            Family::Main => Vertex::new(&self.field, self.n, self.tail.clone()),
            Family::Flipped => Vertex::new(&self.field, self.n - 1, self.tail.clone()),
        }
    }

    pub fn origin(&self) -> Vertex {
        self.reverse().terminus()
    }

    pub fn ball(&self) -> BoundaryRegion {
        let ball = Ball {
            center: self.tail.clone(),
            radius: self.n,
        };
        match self.family {
            Family::Main => BoundaryRegion::Ball(ball),
            Family::Flipped => BoundaryRegion::Complement(ball),
        }
    }
}

fn pi_pow(pi: &RatFunc, n: i64) -> RatFunc {
    let mut acc = RatFunc::one(pi.modulus());
    let base = if n < 0 { pi.inv().unwrap() } else { pi.clone() };
    for _ in 0..n.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc
}

impl LocalField {
    /// The uniformizer as a global element: `π` or `1/T`.
    pub fn embed_uniformizer_global(&self) -> RatFunc {
        match self.place() {
            Place::Finite(pi) => RatFunc::from_poly(pi.clone()),
            Place::Infinity { q } => RatFunc::from_poly(Poly::t(*q)).inv().unwrap(),
        }
    }
}

impl PartialEq for OrientedEdge {
    fn eq(&self, o: &Self) -> bool {
        self.place() == o.place() && self.n == o.n && self.tail == o.tail && self.family == o.family
    }
}

impl Eq for OrientedEdge {}

impl Hash for OrientedEdge {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.place().hash(h);
        self.n.hash(h);
        self.tail.hash(h);
        self.family.hash(h);
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Main => "main",
            Family::Flipped => "flipped",
        };
        write!(f, "(n={}, u={}, {fam})@{}", self.n, self.tail, self.place())
    }
}

impl fmt::Debug for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A vertex `(π^n, u; 0, 1)·v₀` in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vertex {
    pub place: Place,
    pub n: i64,
    pub tail: Tail,
}

impl Vertex {
    pub fn new(field: &LocalField, n: i64, tail: Tail) -> Self {
        Self {
            place: field.place().clone(),
            n,
            tail: tail.truncated(n),
        }
    }
}

/// `u + π^radius O_v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ball {
    pub center: Tail,
    pub radius: i64,
}

/// The set of ends `U(e)` through an oriented edge.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BoundaryRegion {
    Ball(Ball),
    Complement(Ball),
}

impl BoundaryRegion {
    pub fn contains(&self, field: &LocalField, t: &P1) -> bool {
        let in_ball = |b: &Ball| match t {
            P1::Infinity => false,
            P1::Finite(x) => {
                let d = x.sub(&b.center.to_ratfunc(field));
                valuation(&d, field.place()).is_none_or(|v| v >= b.radius)
            }
        };
        match self {
            BoundaryRegion::Ball(b) => in_ball(b),
            BoundaryRegion::Complement(b) => !in_ball(b),
        }
    }
}

/// Normal form of `g·e₀` for a matrix with local entries.
pub fn reduce_matrix(g: &[[LocalElement; 2]; 2]) -> Result<OrientedEdge> {
    let [[a, b], [c, d]] = g;
    let field = a.field().clone();
    let det = a.mul(d).sub(&b.mul(c));
    if det.is_zero() {
        return Err(Error::PrecisionExhausted(
            "determinant not resolved to a nonzero value".into(),
        ));
    }
    let vdet = det.valuation();
    // c = 0 or ν(d) < ν(c): main family; otherwise flipped.
    let main = match (c.is_zero(), d.is_zero()) {
        (_, false) if d.valuation() < c.valuation() => true,
        (false, _) if d.valuation() >= c.valuation() => false,
        _ => {
            return Err(Error::PrecisionExhausted(
                "cannot compare the valuations of the bottom row".into(),
            ))
        }
    };
    let (n, num, den) = if main {
        (vdet - 2 * d.valuation(), b, d)
    } else {
        (vdet + 1 - 2 * c.valuation(), a, c)
    };
    let u = num.div(den)?;
    if u.absolute_precision() < n + PRECISION_MARGIN {
        return Err(Error::PrecisionExhausted(format!(
            "level {n} needs tail precision {}, have {}",
            n + PRECISION_MARGIN,
            u.absolute_precision()
        )));
    }
    let family = if main { Family::Main } else { Family::Flipped };
    Ok(OrientedEdge::new(&field, n, Tail::of_local(&u, n)?, family))
}

/// Exact normal form of `g·e₀` for a matrix over `F_q(T)`.
pub fn reduce_global(field: &LocalField, g: &Mat2) -> Result<OrientedEdge> {
    let place = field.place();
    let det = g.det();
    let vdet = valuation(&det, place).ok_or(Error::DivisionByZero)?;
    let vc = valuation(&g.c, place);
    let vd = valuation(&g.d, place);
    let main = match (vc, vd) {
        (None, _) => true,
        (Some(c), Some(d)) => d < c,
        (Some(_), None) => false,
    };
    let (n, u) = if main {
        (vdet - 2 * vd.unwrap(), g.b.div(&g.d)?)
    } else {
        (vdet + 1 - 2 * vc.unwrap(), g.a.div(&g.c)?)
    };
    let family = if main { Family::Main } else { Family::Flipped };
    Ok(OrientedEdge::from_global(field, n, &u, family))
}

/// The edge at height `k` on the geodesic from `r` to `∞`, oriented toward `∞`.
pub fn geodesic_edge(field: &LocalField, r: &P1, k: i64) -> Result<OrientedEdge> {
    match r {
        P1::Infinity => Err(Error::InvalidInput(
            "the geodesic from ∞ to ∞ is empty".into(),
        )),
        P1::Finite(x) => Ok(OrientedEdge::from_global(field, k, x, Family::Flipped)),
    }
}
