use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::algebra::{check_modulus, parse_poly, parse_ratfunc, Place, Poly, RatFunc};
use crate::error::{Error, Result};

/// Weierstrass curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_q(T)`,
/// with its declared level `n` and split multiplicative place `p`.
#[derive(Clone, Debug)]
pub struct EllipticCurve {
    pub name: String,
    pub q: u32,
    /// `[a1, a2, a3, a4, a6]`
    pub a: [RatFunc; 5],
    pub p: Place,
    pub n: Poly,
}

/// The b-, c-quantities, discriminant and j-invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQuantities {
    pub b2: RatFunc,
    pub b4: RatFunc,
    pub b6: RatFunc,
    pub b8: RatFunc,
    pub c4: RatFunc,
    pub c6: RatFunc,
    pub disc: RatFunc,
    pub j: RatFunc,
}

fn small(q: u32, v: i64) -> RatFunc {
    RatFunc::from_poly(Poly::from_coeffs(q, &[v]).expect("checked modulus"))
}

/// Weierstrass quantities of `[a1, a2, a3, a4, a6]`, valid in every characteristic.
pub fn weierstrass_quantities(a: &[RatFunc; 5]) -> Result<CurveQuantities> {
    let q = a[0].modulus();
    let [a1, a2, a3, a4, a6] = a;
    let k = |v| small(q, v);
    let b2 = a1.mul(a1).add(&k(4).mul(a2));
    let b4 = k(2).mul(a4).add(&a1.mul(a3));
    let b6 = a3.mul(a3).add(&k(4).mul(a6));
    let b8 = a1
        .mul(a1)
        .mul(a6)
        .add(&k(4).mul(a2).mul(a6))
        .sub(&a1.mul(a3).mul(a4))
        .add(&a2.mul(a3).mul(a3))
        .sub(&a4.mul(a4));
    let c4 = b2.mul(&b2).sub(&k(24).mul(&b4));
    let c6 = k(36)
        .mul(&b2)
        .mul(&b4)
        .sub(&b2.mul(&b2).mul(&b2))
        .sub(&k(216).mul(&b6));
    let disc = k(9)
        .mul(&b2)
        .mul(&b4)
        .mul(&b6)
        .sub(&b2.mul(&b2).mul(&b8))
        .sub(&k(8).mul(&b4).mul(&b4).mul(&b4))
        .sub(&k(27).mul(&b6).mul(&b6));
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let j = c4.mul(&c4).mul(&c4).div(&disc)?;
    Ok(CurveQuantities {
        b2,
        b4,
        b6,
        b8,
        c4,
        c6,
        disc,
        j,
    })
}

impl EllipticCurve {
    pub fn new(name: &str, a: [RatFunc; 5], p: Place, n: Poly) -> Result<Self> {
        let q = p.modulus();
        if a.iter().any(|x| x.modulus() != q) || n.modulus() != q {
            return Err(Error::InvalidInput("mixed base fields".into()));
        }
        let pi = p
            .pi()
            .ok_or_else(|| Error::BadPlace("p must be a finite place".into()))?;
        if n.is_zero() || !n.is_monic() {
            return Err(Error::InvalidInput(format!("level {n} must be monic")));
        }
        if pi.divides(&n) {
            return Err(Error::InvalidInput(format!("p = {pi} divides n = {n}")));
        }
        let curve = Self {
            name: name.to_string(),
            q,
            a,
            p,
            n,
        };
        curve.quantities()?;
        Ok(curve)
    }

    pub fn quantities(&self) -> Result<CurveQuantities> {
        weierstrass_quantities(&self.a)
    }

    pub fn pi(&self) -> &Poly {
        self.p.pi().expect("finite by construction")
    }

    /// Level `pi_p * n` of the attached newform.
    pub fn level(&self) -> Poly {
        self.pi() * &self.n
    }

    /// Parse the key-value fixture format (`q`, `a1`..`a6`, `p`, `n`, optional `name`).
    pub fn parse_fixture(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Fixture(format!("line {}: expected key = value", lineno + 1))
            })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            kv.get(k)
                .cloned()
                .ok_or_else(|| Error::Fixture(format!("missing key {k:?}")))
        };
        let q: u32 = get("q")?
            .parse()
            .map_err(|_| Error::Fixture("q must be an integer".into()))?;
        check_modulus(q)?;
        let coeff = |k: &str| -> Result<RatFunc> {
            match kv.get(k) {
                Some(v) => parse_ratfunc(v, q),
                None => Ok(RatFunc::zero(q)),
            }
        };
        let a = [
            coeff("a1")?,
            coeff("a2")?,
            coeff("a3")?,
            coeff("a4")?,
            coeff("a6")?,
        ];
        let p = Place::finite(parse_poly(&get("p")?, q)?)?;
        let n = parse_poly(&get("n")?, q)?;
        let name = kv.get("name").cloned().unwrap_or_else(|| "unnamed".into());
        Self::new(&name, a, p, n)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_fixture(&std::fs::read_to_string(path)?)
    }

    pub fn to_fixture(&self) -> String {
        let mut s = format!("name = {}\nq = {}\n", self.name, self.q);
        for (k, v) in ["a1", "a2", "a3", "a4", "a6"].iter().zip(&self.a) {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s.push_str(&format!("p = {}\nn = {}\n", self.pi(), self.n));
        s
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(
            f,
            "[{a1}, {a2}, {a3}, {a4}, {a6}] over F_{}(T), p = {}, n = {}",
            self.q,
            self.pi(),
            self.n
        )
    }
}
