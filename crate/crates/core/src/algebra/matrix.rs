use std::fmt;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A point of `P^1(F_q(T))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum P1 {
    Finite(RatFunc),
    Infinity,
}

impl P1 {
    pub fn zero(q: u32) -> Self {
        P1::Finite(RatFunc::zero(q))
    }
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(x) => write!(f, "{x}"),
            P1::Infinity => write!(f, "inf"),
        }
    }
}

/// A 2×2 matrix `(a b; c d)` over `F_q(T)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
}

impl Mat2 {
    pub fn new(a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_polys(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> Self {
        Self::new(
            RatFunc::from_poly(a.clone()),
            RatFunc::from_poly(b.clone()),
            RatFunc::from_poly(c.clone()),
            RatFunc::from_poly(d.clone()),
        )
    }

    pub fn identity(q: u32) -> Self {
        let (o, z) = (RatFunc::one(q), RatFunc::zero(q));
        Self::new(o.clone(), z.clone(), z, o)
    }

    pub fn modulus(&self) -> u32 {
        self.a.modulus()
    }

    pub fn det(&self) -> RatFunc {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = det.inv()?;
        Ok(Mat2::new(
            self.d.mul(&inv),
            self.b.neg().mul(&inv),
            self.c.neg().mul(&inv),
            self.a.mul(&inv),
        ))
    }

    /// The Möbius action `z ↦ (az + b)/(cz + d)`.
    pub fn act(&self, z: &P1) -> P1 {
        let (num, den) = match z {
            P1::Infinity => (self.a.clone(), self.c.clone()),
            P1::Finite(x) => (self.a.mul(x).add(&self.b), self.c.mul(x).add(&self.d)),
        };
        if den.is_zero() {
            P1::Infinity
        } else {
            P1::Finite(num.div(&den).expect("nonzero denominator"))
        }
    }

    /// Entries are polynomials.
    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| x.is_poly())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat2{self}")
    }
}
