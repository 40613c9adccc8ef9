use std::fmt;

use super::field::inv_mod;
use super::poly::Poly;
use crate::error::{Error, Result};

/// An element of `F_q(T)` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = num.modulus();
        if num.is_zero() {
            return Ok(Self::zero(q));
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let s = inv_mod(d.lead(), q);
        Ok(Self {
            num: n.scale(s),
            den: d.scale(s),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let q = p.modulus();
        Self {
            num: p,
            den: Poly::one(q),
        }
    }

    pub fn zero(q: u32) -> Self {
        Self::from_poly(Poly::zero(q))
    }

    pub fn one(q: u32) -> Self {
        Self::from_poly(Poly::one(q))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(n, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    /// Polynomial part under division with remainder: `num div den`.
    pub fn poly_part(&self) -> Poly {
        self.num.divmod(&self.den).expect("nonzero denominator").0
    }

    /// `deg(num) - deg(den)`, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.deg_i64() - self.den.deg_i64())
        }
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[F_{}]({})", self.modulus(), self)
    }
}

impl RatFunc {
    /// Substitute `T -> 1/T`, the change to the local variable at infinity.
    pub fn invert_variable(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let q = self.modulus();
        let dn = self.num.deg().unwrap();
        let dd = self.den.deg().unwrap();
        let n = self.num.reverse(dn + 1);
        let d = self.den.reverse(dd + 1);
        let (n, d) = if dd >= dn {
            (n.shift(dd - dn), d)
        } else {
            (n, d.shift(dn - dd))
        };
        debug_assert_eq!(n.modulus(), q);
        RatFunc::new(n, d).expect("reversed denominator is nonzero")
    }

    /// Multiply by `f^e` for `e` of either sign.
    pub fn mul_pow(&self, f: &Poly, e: i64) -> RatFunc {
        let p = RatFunc::from_poly(f.pow(e.unsigned_abs() as u32));
        if e >= 0 {
            self.mul(&p)
        } else {
            self.div(&p).expect("nonzero factor")
        }
    }

    /// Residue class modulo an irreducible `pi`; the denominator must be prime to `pi`.
    pub fn reduce_mod(&self, pi: &Poly) -> Result<Poly> {
        let inv = self.den.inv_mod(pi)?;
        Ok(self.num.mul_mod(&inv, pi))
    }
}
