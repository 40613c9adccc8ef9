use std::fmt;
use std::sync::Arc;

use super::element::{LocalElement, LocalField};
use crate::algebra::{Place, Poly};
use crate::error::{Error, Result};

/// The unramified quadratic extension `F_v(θ)` with `θ^2 = A + Bθ`.
#[derive(Clone)]
pub struct QuadExt(Arc<QuadInner>);

struct QuadInner {
    field: LocalField,
    a: LocalElement,
    b: LocalElement,
}

fn residue_mul(f: &LocalField, x: &Poly, y: &Poly) -> Poly {
    x.mul_mod(y, f.pi())
}

impl QuadExt {
    /// Odd `q`: `θ^2 = ` lift of the first non-square residue. `q = 2`:
    /// `θ^2 + θ = ` lift of the first residue of absolute trace 1.
    pub fn new(field: &LocalField, prec: u32) -> Result<Self> {
        if let Place::Infinity { .. } = field.place() {
            return Err(Error::BadPlace("quadratic extension at infinity".into()));
        }
        let q = field.q();
        let size = field.residue_size();
        let (a, b) = if q == 2 {
            let c = field
                .residues()
                .find(|c| {
                    // absolute trace c + c^2 + c^4 + ...
                    let mut t = c.clone();
                    let mut s = Poly::zero(2);
                    for _ in 0..field.degree() {
                        s = &s + &t;
                        t = residue_mul(field, &t, &t);
                    }
                    s.is_one()
                })
                .expect("trace is surjective");
            // θ^2 = c - θ = c + θ in characteristic 2
            (field.teichmuller(&c, prec)?, field.one(prec))
        } else {
            let c = field
                .residues()
                .find(|c| !c.is_zero() && !c.pow_mod((size - 1) / 2, field.pi()).is_one())
                .expect("non-squares exist for odd q");
            (field.teichmuller(&c, prec)?, field.zero(prec as i64))
        };
        Ok(Self(Arc::new(QuadInner {
            field: field.clone(),
            a,
            b,
        })))
    }

    pub fn base(&self) -> &LocalField {
        &self.0.field
    }

    /// `(A, B)` with `θ^2 = A + Bθ`.
    pub fn defining(&self) -> (&LocalElement, &LocalElement) {
        (&self.0.a, &self.0.b)
    }

    pub fn element(&self, x: LocalElement, y: LocalElement) -> QuadElement {
        QuadElement {
            ext: self.clone(),
            x,
            y,
        }
    }

    pub fn from_base(&self, x: LocalElement) -> QuadElement {
        let abs = x.absolute_precision();
        self.element(x, self.0.field.zero(abs))
    }

    pub fn theta(&self, prec: u32) -> QuadElement {
        self.element(self.0.field.zero(prec as i64), self.0.field.one(prec))
    }
}

/// `x + yθ`.
#[derive(Clone)]
pub struct QuadElement {
    ext: QuadExt,
    x: LocalElement,
    y: LocalElement,
}

impl QuadElement {
    pub fn x(&self) -> &LocalElement {
        &self.x
    }

    pub fn y(&self) -> &LocalElement {
        &self.y
    }

    pub fn ext(&self) -> &QuadExt {
        &self.ext
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Lies in the base field to its known precision.
    pub fn is_base(&self) -> bool {
        self.y.is_zero()
    }

    pub fn valuation(&self) -> i64 {
        self.x.valuation().min(self.y.valuation())
    }

    pub fn absolute_precision(&self) -> i64 {
        self.x.absolute_precision().min(self.y.absolute_precision())
    }

    /// Relative precision, measured against the valuation of the whole element.
    pub fn precision(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.absolute_precision() - self.valuation()
        }
    }

    pub fn add(&self, o: &QuadElement) -> QuadElement {
        self.ext.element(self.x.add(&o.x), self.y.add(&o.y))
    }

    pub fn sub(&self, o: &QuadElement) -> QuadElement {
        self.ext.element(self.x.sub(&o.x), self.y.sub(&o.y))
    }

    pub fn neg(&self) -> QuadElement {
        self.ext.element(self.x.neg(), self.y.neg())
    }

    pub fn mul(&self, o: &QuadElement) -> QuadElement {
        let (a, b) = self.ext.defining();
        let yy = self.y.mul(&o.y);
        let x = self.x.mul(&o.x).add(&a.mul(&yy));
        let y = self.x.mul(&o.y).add(&o.x.mul(&self.y)).add(&b.mul(&yy));
        self.ext.element(x, y)
    }

    pub fn scale(&self, c: &LocalElement) -> QuadElement {
        self.ext.element(self.x.mul(c), self.y.mul(c))
    }

    /// `N(x + yθ) = x^2 + Bxy - Ay^2`.
    pub fn norm(&self) -> LocalElement {
        let (a, b) = self.ext.defining();
        self.x
            .mul(&self.x)
            .add(&b.mul(&self.x).mul(&self.y))
            .sub(&a.mul(&self.y).mul(&self.y))
    }

    /// The Galois conjugate `(x + By) - yθ`.
    pub fn conjugate(&self) -> QuadElement {
        let (_, b) = self.ext.defining();
        self.ext.element(self.x.add(&b.mul(&self.y)), self.y.neg())
    }

    pub fn inv(&self) -> Result<QuadElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conjugate().scale(&n.inv()?))
    }

    pub fn div(&self, o: &QuadElement) -> Result<QuadElement> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<QuadElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let field = self.ext.base();
        let prec = self.precision().max(1) as u32;
        let mut acc = self.ext.from_base(field.one(prec));
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `self ≡ o` modulo `π^abs` in both coordinates.
    pub fn congruent(&self, o: &QuadElement, abs: i64) -> bool {
        self.x.congruent(&o.x, abs) && self.y.congruent(&o.y, abs)
    }
}

impl fmt::Debug for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})θ", self.x, self.y)
    }
}
