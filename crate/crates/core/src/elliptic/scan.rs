use serde::Serialize;

use super::curve::{weierstrass_quantities, EllipticCurve};
use super::reduction::{reduction_of, Reduction};
use crate::algebra::{poly_valuation, Place, Poly, RatFunc};
use crate::error::Result;

/// Search space for [`scan`].
#[derive(Clone, Debug)]
pub struct ScanBounds {
    pub q: u32,
    /// `deg a_i <= min(i, max_coeff_degree)`
    pub max_coeff_degree: usize,
    /// Force `a1 = a3 = 0` (short models, odd characteristic).
    pub short_form: bool,
    pub level_degrees: (usize, usize),
    pub p_degrees: (usize, usize),
    pub max_hits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanHit {
    pub fixture: String,
    pub level_degree: usize,
    pub m_p: u32,
    pub m_inf: u32,
    pub bad_places: Vec<String>,
}

/// Monic irreducible factors of a nonzero polynomial, each once.
pub fn distinct_prime_factors(f: &Poly) -> Vec<Poly> {
    let q = f.modulus();
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg().unwrap_or(0) >= 1 {
        if 2 * d > rest.deg().unwrap() {
            out.push(rest.clone());
            break;
        }
        for g in Poly::monics_of_degree(q, d) {
            if g.divides(&rest) && g.is_irreducible().unwrap_or(false) {
                out.push(g.clone());
                while g.divides(&rest) {
                    rest = rest.div_exact(&g).unwrap();
                }
            }
        }
        d += 1;
    }
    out
}

fn coefficient_choices(q: u32, max_deg: usize, zero: bool) -> Vec<RatFunc> {
    if zero {
        return vec![RatFunc::zero(q)];
    }
    Poly::all_below_degree(q, max_deg + 1)
        .map(RatFunc::from_poly)
        .collect()
}

/// Enumerate small Weierstrass models that are semistable, split multiplicative at
/// infinity and at a place `p`, with level `p * n` of degree within bounds and at least 3.
pub fn scan(bounds: &ScanBounds) -> Result<Vec<ScanHit>> {
    let q = bounds.q;
    let cap = |i: usize| i.min(bounds.max_coeff_degree);
    let choices: Vec<Vec<RatFunc>> = [1, 2, 3, 4, 6]
        .iter()
        .map(|&i| coefficient_choices(q, cap(i), bounds.short_form && (i == 1 || i == 3)))
        .collect();
    let inf = Place::infinity(q)?;
    let mut hits = Vec::new();
    let mut idx = [0usize; 5];
    loop {
        let a: [RatFunc; 5] = std::array::from_fn(|i| choices[i][idx[i]].clone());
        if let Some(found) = examine(&a, &inf, bounds, hits.len())? {
            for h in found {
                if hits.len() >= bounds.max_hits {
                    return Ok(hits);
                }
                hits.push(h);
            }
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == 5 {
                return Ok(hits);
            }
        }
    }
}

fn examine(
    a: &[RatFunc; 5],
    inf: &Place,
    b: &ScanBounds,
    seen: usize,
) -> Result<Option<Vec<ScanHit>>> {
    let qs = match weierstrass_quantities(a) {
        Ok(qs) => qs,
        Err(_) => return Ok(None),
    };
    let disc_poly = qs.disc.num();
    let m_inf = match reduction_of(a, inf)? {
        Reduction::SplitMultiplicative { m } => m,
        _ => return Ok(None),
    };
    let bad = distinct_prime_factors(disc_poly);
    let level_deg: usize = bad.iter().map(|f| f.deg().unwrap()).sum();
    if level_deg < b.level_degrees.0.max(3) || level_deg > b.level_degrees.1 {
        return Ok(None);
    }
    let mut split = Vec::new();
    for f in &bad {
        // Multiplicative at every finite bad place; equivalently c4 is a unit there.
        if poly_valuation(qs.c4.num(), f) != Some(0) {
            return Ok(None);
        }
        let place = Place::Finite(f.clone());
        if let Reduction::SplitMultiplicative { m } = reduction_of(a, &place)? {
            split.push((f.clone(), m));
        }
    }
    let level = bad.iter().fold(Poly::one(b.q), |acc, f| &acc * f);
    let mut out = Vec::new();
    for (pi, m_p) in split {
        let d = pi.deg().unwrap();
        if d < b.p_degrees.0 || d > b.p_degrees.1 {
            continue;
        }
        let n = level.div_exact(&pi)?;
        let name = format!("q{}-{}", b.q, seen + out.len());
        let curve = EllipticCurve::new(&name, a.clone(), Place::Finite(pi), n)?;
        out.push(ScanHit {
            fixture: curve.to_fixture(),
            level_degree: level_deg,
            m_p,
            m_inf,
            bad_places: bad.iter().map(|f| f.to_string()).collect(),
        });
    }
    Ok(Some(out))
}
