use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{add_mod, check_modulus, inv_mod, mul_mod, reduce_i64, sub_mod, FieldScalar};
use crate::error::{Error, Result};

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

/// A polynomial in `F_q[T]`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    q: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn zero(q: u32) -> Self {
        Self { q, c: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Self::constant(q, 1)
    }

    pub fn constant(q: u32, v: u32) -> Self {
        Self::from_raw(q, vec![v % q])
    }

    /// The indeterminate `T`.
    pub fn t(q: u32) -> Self {
        Self::monomial(q, 1, 1)
    }

    pub fn monomial(q: u32, coeff: u32, exp: usize) -> Self {
        let mut c = vec![0; exp + 1];
        c[exp] = coeff % q;
        Self::from_raw(q, c)
    }

    /// Build from signed integer coefficients, reducing mod `q`.
    pub fn from_coeffs(q: u32, coeffs: &[i64]) -> Result<Self> {
        check_modulus(q)?;
        Ok(Self::from_raw(
            q,
            coeffs.iter().map(|&v| reduce_i64(v, q)).collect(),
        ))
    }

    pub(crate) fn from_raw(q: u32, mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { q, c }
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn scalar(&self, i: usize) -> FieldScalar {
        FieldScalar::raw(self.coeff(i), self.q)
    }

    pub fn degree(&self) -> Degree {
        if self.c.is_empty() {
            Degree::NegInfinity
        } else {
            Degree::Finite(self.c.len() - 1)
        }
    }

    /// Degree as an option, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        match self.degree() {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Degree with the zero polynomial mapped to `-1`; only for bounds arithmetic.
    pub(crate) fn deg_i64(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.q))
    }

    pub fn scale(&self, s: u32) -> Self {
        let q = self.q;
        Self::from_raw(q, self.c.iter().map(|&a| mul_mod(a, s, q)).collect())
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Self { q: self.q, c }
    }

    /// Reduce modulo `T^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_raw(self.q, self.c.iter().take(n).copied().collect())
    }

    /// Coefficient reversal relative to length `len`: `T^(len-1) f(1/T)`.
    pub fn reverse(&self, len: usize) -> Self {
        debug_assert!(self.c.len() <= len);
        let mut c = vec![0; len];
        for (i, &a) in self.c.iter().enumerate() {
            c[len - 1 - i] = a;
        }
        Self::from_raw(self.q, c)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|&a| a != 0)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let q = self.q;
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| add_mod(mul_mod(acc, x, q), a, q))
    }

    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.q;
        if self.c.len() < b.c.len() {
            return Ok((Poly::zero(q), self.clone()));
        }
        let mut r = self.c.clone();
        let db = b.c.len() - 1;
        let inv_lead = inv_mod(b.lead(), q);
        let mut quot = vec![0u32; self.c.len() - db];
        for i in (0..quot.len()).rev() {
            let coef = mul_mod(r[i + db], inv_lead, q);
            quot[i] = coef;
            if coef != 0 {
                for (j, &bj) in b.c.iter().enumerate() {
                    r[i + j] = sub_mod(r[i + j], mul_mod(coef, bj, q), q);
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_raw(q, quot), Poly::from_raw(q, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Exact division; errors if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        let (quot, r) = self.divmod(b)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput(format!("{b} does not divide {self}")));
        }
        Ok(quot)
    }

    pub fn divides(&self, b: &Poly) -> bool {
        !self.is_zero() && b.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, b: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*b = g`, `g` monic.
    pub fn xgcd(&self, b: &Poly) -> (Poly, Poly, Poly) {
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
        let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
        while !r1.is_zero() {
            let (quot, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&quot * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&quot * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), q);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.xgcd(m);
        if !g.is_one() {
            return Err(Error::NotInvertible(self.to_string(), m.to_string()));
        }
        s.rem(m)
    }

    pub fn mul_mod(&self, b: &Poly, m: &Poly) -> Poly {
        (self * b).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Poly::one(self.q).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.q);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.deg() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidInput(
                    "irreducibility is only defined for nonconstant polynomials".into(),
                ))
            }
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let q = self.q as u64;
        let t = Poly::t(self.q);
        // frob[k] = T^(q^k) mod f
        let mut frob = vec![t.rem(&f)?];
        for _ in 0..n {
            let last = frob.last().unwrap();
            frob.push(last.pow_mod(q, &f));
        }
        if frob[n] != t.rem(&f)? {
            return Ok(false);
        }
        for r in prime_factors(n) {
            let h = &frob[n / r] - &t;
            if !h.gcd(&f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The polynomial whose base-`q` digits (low first) are the coefficients of `idx`.
    pub fn from_index(q: u32, mut idx: u64) -> Self {
        let mut c = Vec::new();
        while idx > 0 {
            c.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        Self::from_raw(q, c)
    }

    pub fn to_index(&self) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0u64, |acc, &a| acc * self.q as u64 + a as u64)
    }

    /// All polynomials of degree `< d` (the residues modulo a degree-`d` polynomial).
    pub fn all_below_degree(q: u32, d: usize) -> impl Iterator<Item = Poly> {
        let count = (q as u64).pow(d as u32);
        (0..count).map(move |i| Poly::from_index(q, i))
    }

    /// All monic polynomials of exact degree `d`.
    pub fn monics_of_degree(q: u32, d: usize) -> impl Iterator<Item = Poly> {
        let lead = Poly::monomial(q, 1, d);
        Poly::all_below_degree(q, d).map(move |r| &lead + &r)
    }

    pub fn derivative(&self) -> Poly {
        let q = self.q;
        Self::from_raw(
            q,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod(a, (i as u64 % q as u64) as u32, q))
                .collect(),
        )
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    fn add(self, b: &'a Poly) -> Poly {
        debug_assert_eq!(self.q, b.q);
        let q = self.q;
        let n = self.c.len().max(b.c.len());
        Poly::from_raw(
            q,
            (0..n)
                .map(|i| add_mod(self.coeff(i), b.coeff(i), q))
                .collect(),
        )
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, b: &'a Poly) -> Poly {
        debug_assert_eq!(self.q, b.q);
        let q = self.q;
        let n = self.c.len().max(b.c.len());
        Poly::from_raw(
            q,
            (0..n)
                .map(|i| sub_mod(self.coeff(i), b.coeff(i), q))
                .collect(),
        )
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, b: &'a Poly) -> Poly {
        debug_assert_eq!(self.q, b.q);
        let q = self.q;
        if self.is_zero() || b.is_zero() {
            return Poly::zero(q);
        }
        let mut acc = vec![0u64; self.c.len() + b.c.len() - 1];
        let bound = u64::MAX - (q as u64) * (q as u64);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &bj) in b.c.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += a as u64 * bj as u64;
                if *slot >= bound {
                    *slot %= q as u64;
                }
            }
        }
        Poly::from_raw(q, acc.into_iter().map(|v| (v % q as u64) as u32).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let q = self.q;
        Poly::from_raw(q, self.c.iter().map(|&a| sub_mod(0, a, q)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, b: Poly) -> Poly {
                (&self).$m(&b)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, b: &'a Poly) -> Poly {
                (&self).$m(b)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{a}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{a}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.q, self)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u32, c: &[i64]) -> Poly {
        Poly::from_coeffs(q, c).unwrap()
    }

    #[test]
    fn gcd_over_f2() {
        // gcd(T^2 + T, T) = T
        assert_eq!(p(2, &[0, 1, 1]).gcd(&p(2, &[0, 1])), p(2, &[0, 1]));
    }

    #[test]
    fn long_division_over_f2() {
        let (quot, r) = p(2, &[0, 0, 0, 1]).divmod(&p(2, &[1, 1])).unwrap();
        assert_eq!(quot, p(2, &[1, 1, 1]));
        assert_eq!(r, p(2, &[1]));
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(p(2, &[0, 1]).inv_mod(&p(2, &[1, 1])).unwrap(), p(2, &[1]));
        assert!(matches!(
            p(2, &[0, 1]).inv_mod(&p(2, &[0, 0, 1])),
            Err(Error::NotInvertible(..))
        ));
        assert_eq!(
            p(3, &[1]).divmod(&Poly::zero(3)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p(2, &[1, 1, 1]).is_irreducible().unwrap());
        assert!(!p(2, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(p(3, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(p(2, &[1]).is_irreducible().is_err());
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(Poly::zero(5).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(p(5, &[1, 2, 0]).degree(), Degree::Finite(1));
    }

    #[test]
    fn display_canonical() {
        assert_eq!(p(3, &[1, 2, 0, 1]).to_string(), "T^3 + 2*T + 1");
        assert_eq!(Poly::zero(3).to_string(), "0");
    }
}
