use serde::Serialize;

use super::curve::{weierstrass_quantities, EllipticCurve};
use crate::algebra::{poly_valuation, Place, Poly, RatFunc};
use crate::error::{Error, Result};

/// Reduction type at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Reduction {
    Good,
    SplitMultiplicative {
        m: u32,
    },
    NonsplitMultiplicative {
        m: u32,
    },
    /// Additive, or not decidable from an integral model without minimalization.
    Other {
        disc_valuation: i64,
        j_valuation: Option<i64>,
    },
}

impl Reduction {
    pub fn is_multiplicative(&self) -> bool {
        matches!(
            self,
            Reduction::SplitMultiplicative { .. } | Reduction::NonsplitMultiplicative { .. }
        )
    }
}

fn rf_valuation(x: &RatFunc, pi: &Poly) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(poly_valuation(x.num(), pi)? - poly_valuation(x.den(), pi)?)
}

/// An integral model at `v`, written in the local variable, together with its uniformizer.
///
/// At infinity the coefficients are rewritten in `S = 1/T`, so the place becomes `(S)`.
pub(crate) fn integral_model(a: &[RatFunc; 5], v: &Place) -> ([RatFunc; 5], Poly) {
    let q = v.modulus();
    let (local, pi) = match v {
        Place::Finite(pi) => (a.clone(), pi.clone()),
        Place::Infinity { .. } => (a.clone().map(|x| x.invert_variable()), Poly::t(q)),
    };
    let weights = [1i64, 2, 3, 4, 6];
    let mut k = 0i64;
    for (x, w) in local.iter().zip(weights) {
        if let Some(nu) = rf_valuation(x, &pi) {
            if nu < 0 {
                k = k.max((-nu + w - 1) / w);
            }
        }
    }
    let scaled = std::array::from_fn(|i| local[i].mul_pow(&pi, weights[i] * k));
    (scaled, pi)
}

/// Elements of the residue field `F_q[T]/(pi)`.
pub(crate) fn residue_field(pi: &Poly) -> impl Iterator<Item = Poly> {
    Poly::all_below_degree(pi.modulus(), pi.deg().unwrap())
}

fn reduced_coeffs(a: &[RatFunc; 5], pi: &Poly) -> Result<[Poly; 5]> {
    let mut out: [Poly; 5] = std::array::from_fn(|_| Poly::zero(pi.modulus()));
    for (o, x) in out.iter_mut().zip(a) {
        *o = x.reduce_mod(pi)?;
    }
    Ok(out)
}

/// `F(x, y) = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6` and its partials over the residue field.
fn weierstrass_eval(r: &[Poly; 5], pi: &Poly, x: &Poly, y: &Poly) -> (Poly, Poly, Poly) {
    let q = pi.modulus();
    let m = |a: &Poly, b: &Poly| a.mul_mod(b, pi);
    let c = |v: i64| Poly::from_coeffs(q, &[v]).unwrap();
    let [a1, a2, a3, a4, a6] = r;
    let x2 = m(x, x);
    let x3 = m(&x2, x);
    let f =
        &(&(&m(y, y) + &m(&m(a1, x), y)) + &m(a3, y)) - &(&(&(&x3 + &m(a2, &x2)) + &m(a4, x)) + a6);
    let fx = &(&m(a1, y) - &m(&c(3), &x2)) - &(&m(&m(&c(2), a2), x) + a4);
    let fy = &(&m(&c(2), y) + &m(a1, x)) + a3;
    (f.rem(pi).unwrap(), fx.rem(pi).unwrap(), fy.rem(pi).unwrap())
}

/// Classify the reduction of `a` at `v`.
pub fn reduction_of(a: &[RatFunc; 5], v: &Place) -> Result<Reduction> {
    let (model, pi) = integral_model(a, v);
    let qs = weierstrass_quantities(&model)?;
    let nu_disc = rf_valuation(&qs.disc, &pi).expect("nonzero discriminant");
    let nu_j = rf_valuation(&qs.j, &pi);
    if nu_disc == 0 {
        return Ok(Reduction::Good);
    }
    let nu_c4 = rf_valuation(&qs.c4, &pi);
    if nu_c4 != Some(0) {
        return Ok(Reduction::Other {
            disc_valuation: nu_disc,
            j_valuation: nu_j,
        });
    }
    debug_assert_eq!(nu_j, Some(-nu_disc));
    let m = nu_disc as u32;
    let r = reduced_coeffs(&model, &pi)?;
    let mut node = None;
    'search: for x in residue_field(&pi) {
        for y in residue_field(&pi) {
            let (f, fx, fy) = weierstrass_eval(&r, &pi, &x, &y);
            if f.is_zero() && fx.is_zero() && fy.is_zero() {
                node = Some(x);
                break 'search;
            }
        }
    }
    let x0 = node.ok_or_else(|| Error::Reduction("no singular point on the reduction".into()))?;
    // After moving the node to the origin the tangent cone is Y^2 + a1 XY - (a2 + 3 x0) X^2.
    let q = pi.modulus();
    let three = Poly::from_coeffs(q, &[3]).unwrap();
    let a2s = (&r[1] + &three.mul_mod(&x0, &pi)).rem(&pi)?;
    let splits = residue_field(&pi).any(|t| {
        let v = &(&t.mul_mod(&t, &pi) + &r[0].mul_mod(&t, &pi)) - &a2s;
        v.rem(&pi).unwrap().is_zero()
    });
    Ok(if splits {
        Reduction::SplitMultiplicative { m }
    } else {
        Reduction::NonsplitMultiplicative { m }
    })
}

/// Number of points of the reduction at a good place, including the point at infinity.
pub fn count_points(a: &[RatFunc; 5], v: &Place) -> Result<u64> {
    if reduction_of(a, v)? != Reduction::Good {
        return Err(Error::BadPlace(format!(
            "{v} is not a place of good reduction"
        )));
    }
    let (model, pi) = integral_model(a, v);
    let r = reduced_coeffs(&model, &pi)?;
    let mut count = 1u64;
    for x in residue_field(&pi) {
        for y in residue_field(&pi) {
            if weierstrass_eval(&r, &pi, &x, &y).0.is_zero() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Frobenius trace `a_v = |k_v| + 1 - #E(k_v)`, with the Hasse bound asserted.
pub fn trace_of_frobenius(a: &[RatFunc; 5], v: &Place) -> Result<i64> {
    let n = count_points(a, v)?;
    let size = v.norm();
    let av = size as i64 + 1 - n as i64;
    if (av * av) as u64 > 4 * size {
        return Err(Error::Reduction(format!(
            "a_v = {av} violates the Hasse bound at {v}"
        )));
    }
    Ok(av)
}

impl EllipticCurve {
    pub fn reduction_check(&self, v: &Place) -> Result<Reduction> {
        reduction_of(&self.a, v)
    }

    pub fn point_count(&self, v: &Place) -> Result<u64> {
        count_points(&self.a, v)
    }

    pub fn a_v(&self, v: &Place) -> Result<i64> {
        trace_of_frobenius(&self.a, v)
    }
}
