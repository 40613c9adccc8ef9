use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::check_modulus;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A place of `F_q(T)`: a monic irreducible `π`, or the place at infinity (uniformizer `1/T`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(Poly),
    Infinity { q: u32 },
}

impl Place {
    pub fn finite(pi: Poly) -> Result<Self> {
        if !pi.is_monic() || pi.is_constant() || !pi.is_irreducible()? {
            return Err(Error::BadPlace(format!(
                "{pi} is not a monic irreducible polynomial"
            )));
        }
        Ok(Place::Finite(pi))
    }

    pub fn infinity(q: u32) -> Result<Self> {
        check_modulus(q)?;
        Ok(Place::Infinity { q })
    }

    pub fn modulus(&self) -> u32 {
        match self {
            Place::Finite(pi) => pi.modulus(),
            Place::Infinity { q } => *q,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.deg().unwrap_or(0),
            Place::Infinity { .. } => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity { .. })
    }

    /// The uniformizer polynomial at a finite place.
    pub fn pi(&self) -> Option<&Poly> {
        match self {
            Place::Finite(pi) => Some(pi),
            Place::Infinity { .. } => None,
        }
    }

    /// Size of the residue field.
    pub fn norm(&self) -> u64 {
        (self.modulus() as u64).pow(self.degree() as u32)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "({pi})"),
            Place::Infinity { .. } => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(_: D) -> std::result::Result<Self, D::Error> {
        Err(serde::de::Error::custom(
            "places are serialized for reports only",
        ))
    }
}

/// Valuation of a nonzero polynomial at a finite uniformizer.
pub fn poly_valuation(f: &Poly, pi: &Poly) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut g = f.clone();
    loop {
        let (quot, r) = g.divmod(pi).expect("nonzero uniformizer");
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        g = quot;
    }
}

/// `ν_v(x)`; `None` stands for `+∞` (the valuation of zero).
pub fn valuation(x: &RatFunc, v: &Place) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    match v {
        Place::Finite(pi) => Some(poly_valuation(x.num(), pi)? - poly_valuation(x.den(), pi)?),
        Place::Infinity { .. } => Some(x.den().deg_i64() - x.num().deg_i64()),
    }
}

/// All monic irreducibles of degree `<= max_degree`, then infinity.
pub fn enumerate_places(q: u32, max_degree: usize) -> Result<Vec<Place>> {
    check_modulus(q)?;
    if max_degree == 0 {
        return Err(Error::InvalidInput("max_degree must be at least 1".into()));
    }
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for f in Poly::monics_of_degree(q, d) {
            if f.is_irreducible()? {
                out.push(Place::Finite(f));
            }
        }
    }
    out.push(Place::Infinity { q });
    Ok(out)
}
