use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::Poly;
use crate::error::{Error, Result};

/// A point `(c : d)` of `P^1(A/m)`, canonical within its class under `(A/m)^×`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    pub c: Poly,
    pub d: Poly,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.c, self.d)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All of `P^1(A/m)` with a lookup from arbitrary representatives.
#[derive(Clone, Debug)]
pub struct P1Table {
    m: Poly,
    points: Vec<ProjPoint>,
    index: HashMap<(u64, u64), usize>,
}

impl P1Table {
    pub fn new(m: &Poly) -> Result<Self> {
        let dm = match m.deg() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "level {m} must be nonconstant"
                )))
            }
        };
        let m = m.monic();
        let q = m.modulus();
        let residues: Vec<Poly> = Poly::all_below_degree(q, dm).collect();
        let units: Vec<&Poly> = residues.iter().filter(|u| u.gcd(&m).is_one()).collect();
        let mut points = Vec::new();
        let mut index = HashMap::new();
        for c in &residues {
            for d in &residues {
                let key = (c.to_index(), d.to_index());
                if index.contains_key(&key) || !c.gcd(d).gcd(&m).is_one() {
                    continue;
                }
                // (c, d) is the first of its class in enumeration order, so canonical.
                let id = points.len();
                points.push(ProjPoint {
                    c: c.clone(),
                    d: d.clone(),
                });
                for u in &units {
                    let (uc, ud) = (c.mul_mod(u, &m), d.mul_mod(u, &m));
                    index.insert((uc.to_index(), ud.to_index()), id);
                }
            }
        }
        Ok(Self { m, points, index })
    }

    pub fn level(&self) -> &Poly {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    /// Index of the class of `(c : d)`; the pair must generate the unit ideal mod `m`.
    pub fn lookup(&self, c: &Poly, d: &Poly) -> Result<usize> {
        let c = c.rem(&self.m)?;
        let d = d.rem(&self.m)?;
        self.index
            .get(&(c.to_index(), d.to_index()))
            .copied()
            .ok_or_else(|| {
                Error::InvalidInput(format!("({c} : {d}) is not a point of P^1 mod {}", self.m))
            })
    }

    /// `(c : d)·(a b; e f) = (ca + de : cb + df)`.
    pub fn act(&self, i: usize, h: [&Poly; 4]) -> usize {
        let p = &self.points[i];
        let [a, b, e, f] = h;
        let c = &(&p.c * a) + &(&p.d * e);
        let d = &(&p.c * b) + &(&p.d * f);
        self.lookup(&c, &d).expect("invertible action")
    }
}

/// `|P^1(A/m)| = |m| ∏_{π | m} (1 + 1/|π|)`, from the factorization.
pub fn p1_count(m: &Poly, prime_factors: &[Poly]) -> u64 {
    let q = m.modulus() as u64;
    let mut n = q.pow(m.deg().unwrap() as u32);
    for p in prime_factors {
        let np = q.pow(p.deg().unwrap() as u32);
        n = n / np * (np + 1);
    }
    n
}

/// `P^1(A/m)` as a list.
pub fn p1_points(m: &Poly) -> Result<Vec<ProjPoint>> {
    Ok(P1Table::new(m)?.points)
}
