use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::algebra::{poly_valuation, Place, Poly, RatFunc};
use crate::error::{Error, Result};

/// Default number of relative residue digits.
pub const DEFAULT_PRECISION: u32 = 32;

struct Inner {
    place: Place,
    /// Uniformizer in the local variable; at infinity the local variable is `1/T`
    /// and is written as `T` in this polynomial.
    pi: Poly,
    pi_powers: Vec<Poly>,
}

/// The completion of `F_q(T)` at a place, truncated to explicit precisions.
#[derive(Clone)]
pub struct LocalField(Arc<Inner>);

const CACHED_POWERS: usize = 72;

impl LocalField {
    pub fn new(place: Place) -> Self {
        let q = place.modulus();
        let pi = match &place {
            Place::Finite(pi) => pi.clone(),
            Place::Infinity { .. } => Poly::t(q),
        };
        let mut pi_powers = vec![Poly::one(q)];
        for i in 1..=CACHED_POWERS {
            let next = &pi_powers[i - 1] * &pi;
            pi_powers.push(next);
        }
        Self(Arc::new(Inner {
            place,
            pi,
            pi_powers,
        }))
    }

    pub fn place(&self) -> &Place {
        &self.0.place
    }

    pub fn pi(&self) -> &Poly {
        &self.0.pi
    }

    pub fn q(&self) -> u32 {
        self.0.pi.modulus()
    }

    /// Residue degree.
    pub fn degree(&self) -> usize {
        self.0.pi.deg().unwrap()
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        (self.q() as u64).pow(self.degree() as u32)
    }

    pub fn pi_pow(&self, n: u32) -> Poly {
        match self.0.pi_powers.get(n as usize) {
            Some(p) => p.clone(),
            None => self.0.pi.pow(n),
        }
    }

    pub(crate) fn pi_pow_ref(&self, n: u32) -> std::borrow::Cow<'_, Poly> {
        match self.0.pi_powers.get(n as usize) {
            Some(p) => std::borrow::Cow::Borrowed(p),
            None => std::borrow::Cow::Owned(self.0.pi.pow(n)),
        }
    }

    pub(crate) fn same(&self, o: &LocalField) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.place == o.0.place
    }

    /// The zero sentinel known to absolute precision `abs`.
    pub fn zero(&self, abs: i64) -> LocalElement {
        LocalElement {
            field: self.clone(),
            val: abs,
            unit: Poly::zero(self.q()),
            prec: 0,
        }
    }

    pub fn one(&self, prec: u32) -> LocalElement {
        self.from_parts(0, Poly::one(self.q()), prec)
    }

    /// `π^k` to relative precision `prec`.
    pub fn uniformizer_pow(&self, k: i64, prec: u32) -> LocalElement {
        self.from_parts(k, Poly::one(self.q()), prec)
    }

    /// An element `π^val · unit`; `unit` must be prime to `π`.
    pub fn from_parts(&self, val: i64, unit: Poly, prec: u32) -> LocalElement {
        debug_assert!(prec == 0 || !unit.rem(self.pi()).unwrap().is_zero());
        let unit = unit.rem(&self.pi_pow_ref(prec)).unwrap();
        LocalElement {
            field: self.clone(),
            val,
            unit,
            prec,
        }
    }

    /// Normalize `π^v · r` where `r` is known modulo `π^(abs - v)`.
    pub(crate) fn normalize(&self, v: i64, r: Poly, abs: i64) -> LocalElement {
        let width = abs - v;
        if width <= 0 {
            return self.zero(abs);
        }
        let mut r = r.rem(&self.pi_pow_ref(width as u32)).unwrap();
        if r.is_zero() {
            return self.zero(abs);
        }
        let mut v = v;
        loop {
            let (quot, rem) = r.divmod(self.pi()).unwrap();
            if !rem.is_zero() {
                break;
            }
            r = quot;
            v += 1;
        }
        let prec = (abs - v) as u32;
        LocalElement {
            field: self.clone(),
            val: v,
            unit: r,
            prec,
        }
    }

    /// The image of a global element, with `prec` relative digits.
    pub fn embed(&self, x: &RatFunc, prec: u32) -> LocalElement {
        let x = match self.place() {
            Place::Finite(_) => x.clone(),
            Place::Infinity { .. } => x.invert_variable(),
        };
        if x.is_zero() {
            return self.zero(i64::MAX / 4);
        }
        let pi = self.pi();
        let vn = poly_valuation(x.num(), pi).unwrap();
        let vd = poly_valuation(x.den(), pi).unwrap();
        let n = x.num().div_exact(&pi.pow(vn as u32)).unwrap();
        let d = x.den().div_exact(&pi.pow(vd as u32)).unwrap();
        let m = self.pi_pow(prec);
        let unit = n.mul_mod(&d.inv_mod(&m).expect("unit denominator"), &m);
        LocalElement {
            field: self.clone(),
            val: vn - vd,
            unit,
            prec,
        }
    }

    pub fn embed_poly(&self, x: &Poly, prec: u32) -> LocalElement {
        self.embed(&RatFunc::from_poly(x.clone()), prec)
    }

    /// Reduce a global polynomial modulo `π` (finite places only).
    pub fn residue_of(&self, x: &Poly) -> Poly {
        x.rem(self.pi()).unwrap()
    }
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField({})", self.place())
    }
}

impl PartialEq for LocalField {
    fn eq(&self, o: &Self) -> bool {
        self.same(o)
    }
}

/// `π^val · unit`, with `unit` known modulo `π^prec`. The zero sentinel has
/// `prec = 0` and `val` equal to its known absolute precision.
#[derive(Clone)]
pub struct LocalElement {
    field: LocalField,
    val: i64,
    unit: Poly,
    prec: u32,
}

impl LocalElement {
    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// The valuation; for the zero sentinel this is the known absolute precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Surviving relative precision.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn absolute_precision(&self) -> i64 {
        self.val + self.prec as i64
    }

    pub fn unit(&self) -> &Poly {
        &self.unit
    }

    /// Leading residue digit of the unit part.
    pub fn residue(&self) -> Poly {
        self.unit.rem(self.field.pi()).unwrap()
    }

    /// Fail unless at least `n` relative digits survive.
    pub fn require_precision(&self, n: u32) -> Result<()> {
        if self.prec < n.max(1) {
            return Err(Error::PrecisionExhausted(format!(
                "need {n} relative digits, have {}",
                self.prec
            )));
        }
        Ok(())
    }

    /// Drop relative digits beyond `prec`.
    pub fn truncate(&self, prec: u32) -> LocalElement {
        if prec >= self.prec {
            return self.clone();
        }
        if prec == 0 {
            return self.field.zero(self.val);
        }
        self.field.from_parts(self.val, self.unit.clone(), prec)
    }

    fn check(&self, o: &LocalElement) {
        assert!(
            self.field.same(&o.field),
            "local elements at different places"
        );
    }

    pub fn mul(&self, o: &LocalElement) -> LocalElement {
        self.check(o);
        let val = self.val + o.val;
        if self.is_zero() || o.is_zero() {
            return self.field.zero(val);
        }
        let prec = self.prec.min(o.prec);
        let unit = self.unit.mul_mod(&o.unit, &self.field.pi_pow_ref(prec));
        LocalElement {
            field: self.field.clone(),
            val,
            unit,
            prec,
        }
    }

    pub fn add(&self, o: &LocalElement) -> LocalElement {
        self.check(o);
        let abs = self.absolute_precision().min(o.absolute_precision());
        let v = self.val.min(o.val);
        if v >= abs {
            return self.field.zero(abs);
        }
        let term = |x: &LocalElement| {
            if x.is_zero() || x.val >= abs {
                Poly::zero(self.field.q())
            } else {
                &x.unit * &*self.field.pi_pow_ref((x.val - v) as u32)
            }
        };
        self.field.normalize(v, &term(self) + &term(o), abs)
    }

    pub fn neg(&self) -> LocalElement {
        LocalElement {
            field: self.field.clone(),
            val: self.val,
            unit: -&self.unit,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &LocalElement) -> LocalElement {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<LocalElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.field.pi_pow(self.prec);
        let unit = self.unit.inv_mod(&m)?;
        Ok(LocalElement {
            field: self.field.clone(),
            val: -self.val,
            unit,
            prec: self.prec,
        })
    }

    pub fn div(&self, o: &LocalElement) -> Result<LocalElement> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<LocalElement> {
        if e == 0 {
            return Ok(self.field.one(self.prec.max(1)));
        }
        if self.is_zero() {
            if e < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.field.zero(self.val * e));
        }
        let m = self.field.pi_pow(self.prec);
        let mut unit = self.unit.pow_mod(e.unsigned_abs(), &m);
        if e < 0 {
            unit = unit.inv_mod(&m)?;
        }
        Ok(LocalElement {
            field: self.field.clone(),
            val: self.val * e,
            unit,
            prec: self.prec,
        })
    }

    /// True when `self ≡ o` modulo `π^abs`.
    pub fn congruent(&self, o: &LocalElement, abs: i64) -> bool {
        self.sub(o).val >= abs
    }

    /// π-adic digits of the unit part, each a residue-field element.
    pub fn digits(&self) -> Vec<Poly> {
        let mut out = Vec::with_capacity(self.prec as usize);
        let mut r = self.unit.clone();
        for _ in 0..self.prec {
            let (quot, d) = r.divmod(self.field.pi()).unwrap();
            out.push(d);
            r = quot;
        }
        out
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.val == o.val && self.prec == o.prec && self.unit == o.unit
    }
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(π^{})", self.val);
        }
        write!(
            f,
            "π^{}·({}) + O(π^{})",
            self.val,
            self.unit,
            self.absolute_precision()
        )
    }
}

impl Serialize for LocalElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LocalElement", 3)?;
        st.serialize_field("valuation", &self.val)?;
        let digits: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
        st.serialize_field("digits", &digits)?;
        st.serialize_field("precision", &self.prec)?;
        st.end()
    }
}
