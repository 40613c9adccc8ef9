//! Multiplicative integrals against the boundary measures of a newform: the unit `q(c)`,
//! the double integral in the quadratic extension and the period attached to the diagonal torus.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Poly, RatFunc, P1};
use crate::error::{Error, Result};
use crate::local::{LocalElement, LocalField, QuadElement, QuadExt};
use crate::symbols::{AxisMeasure, BoundaryMeasure, SymbolContext, Teitelbaum};

/// A product over a level-`level` ball cover, certified to `precision` relative digits.
#[derive(Clone, Debug)]
pub struct IntegralResult<T> {
    pub value: T,
    pub level: u32,
    pub precision: u32,
}

/// Residues mod `π^k` that are prime to `π`, as canonical polynomials.
fn unit_residues(pi: &Poly, k: u32) -> impl Iterator<Item = Poly> + '_ {
    let d = pi.deg().unwrap() * k as usize;
    Poly::all_below_degree(pi.modulus(), d).filter(move |a| !a.rem(pi).unwrap().is_zero())
}

fn check_level(level: u32) -> Result<()> {
    if level < 2 {
        return Err(Error::InvalidInput(format!("ball level {level} below 2")));
    }
    Ok(())
}

/// `×∫_{O^×} f(t) dμ(t)` with `f` evaluated at the canonical centers of the balls
/// `a + π^L O`. Factors sharing an exponent are multiplied first.
pub fn mult_integral_units(
    field: &LocalField,
    mu: &dyn BoundaryMeasure,
    level: u32,
    prec: u32,
    f: impl Fn(&Poly) -> Result<LocalElement>,
) -> Result<IntegralResult<LocalElement>> {
    check_level(level)?;
    let prec = prec.min(level);
    let mut groups: BTreeMap<i64, LocalElement> = BTreeMap::new();
    for a in unit_residues(field.pi(), level) {
        let e = mu.ball(&RatFunc::from_poly(a.clone()), level as i64)?;
        if e == 0 {
            continue;
        }
        let v = f(&a)?;
        if v.valuation() != 0 {
            return Err(Error::InvalidInput(
                "integrand must be a unit on O^×".into(),
            ));
        }
        let v = v.truncate(prec);
        let slot = groups.entry(e).or_insert_with(|| field.one(prec));
        *slot = slot.mul(&v);
    }
    let mut value = field.one(prec);
    for (e, g) in groups {
        value = value.mul(&g.pow(e)?);
    }
    Ok(IntegralResult {
        value,
        level,
        precision: prec,
    })
}

/// `×∫_{O^×} t dμ(t)`.
pub fn mult_integral_t(
    field: &LocalField,
    mu: &dyn BoundaryMeasure,
    level: u32,
    prec: u32,
) -> Result<IntegralResult<LocalElement>> {
    mult_integral_units(field, mu, level, prec, |a| Ok(field.embed_poly(a, prec)))
}

/// `q(c) = ×∫_{O^×} t dμ_Teit(t)`.
pub fn teitelbaum_unit(
    ctx: &SymbolContext,
    level: u32,
    prec: u32,
) -> Result<IntegralResult<LocalElement>> {
    let field = LocalField::new(crate::algebra::Place::finite(ctx.pi().clone())?);
    mult_integral_t(&field, &Teitelbaum(ctx), level, prec)
}

/// One ball of the standard cover of `P^1(F_p)` at level `L`.
#[derive(Clone, Debug, Serialize)]
pub enum CoverBall {
    /// `a + π^L O` with `a` a residue mod `π^L`.
    Inner { a: Poly },
    /// `a/π^k + π^{L-2k} O` inside `π^{-k} O^×`, `1 <= k < L`, `a` a unit mod `π^{L-k}`.
    Annulus { a: Poly, k: u32 },
    /// `{ν(t) <= -L}`, where the integrands used here are `1` to precision `L`.
    Infinity,
}

/// Every ball of the level-`L` cover, in a fixed order.
pub fn standard_cover(pi: &Poly, level: u32) -> Vec<CoverBall> {
    let q = pi.modulus();
    let mut out: Vec<CoverBall> = Poly::all_below_degree(q, pi.deg().unwrap() * level as usize)
        .map(|a| CoverBall::Inner { a })
        .collect();
    for k in 1..level {
        out.extend(unit_residues(pi, level - k).map(|a| CoverBall::Annulus { a, k }));
    }
    out.push(CoverBall::Infinity);
    out
}

fn require_off_line(z: &QuadElement) -> Result<()> {
    if z.y().is_zero() {
        return Err(Error::InvalidInput("z must lie off P^1(F_p)".into()));
    }
    if z.valuation() < 0 {
        return Err(Error::InvalidInput("z must be integral".into()));
    }
    Ok(())
}

/// `×∫_{P^1(F_p)} (t - z₂)/(t - z₁) dμ_c{x→y}(t)` over the level-`L` cover.
///
/// The integrand is evaluated at the ball centers; the certified precision is `L`
/// minus the largest valuation of `t - z_i` met, since that bounds the variation of each
/// factor over its ball.
pub fn double_integral(
    ctx: &SymbolContext,
    z1: &QuadElement,
    z2: &QuadElement,
    x: &P1,
    y: &P1,
    level: u32,
) -> Result<IntegralResult<QuadElement>> {
    check_level(level)?;
    require_off_line(z1)?;
    require_off_line(z2)?;
    let ext = z1.ext();
    let field = ext.base();
    let prec = (z1.precision().min(z2.precision()).max(0) as u32).min(level + 2);
    let one = ext.from_base(field.one(prec));
    if x == y {
        return Ok(IntegralResult {
            value: one,
            level,
            precision: prec,
        });
    }
    let pi = ctx.pi();
    let mut loss = 0i64;
    let mut mass = 0i64;
    let mut groups: BTreeMap<i64, QuadElement> = BTreeMap::new();
    for ball in standard_cover(pi, level) {
        let (e, factor) = match &ball {
            CoverBall::Inner { a } => {
                let e = ctx.mu_ball(x, y, &RatFunc::from_poly(a.clone()), level as i64)?;
                let t = ext.from_base(field.embed_poly(a, prec));
                (e, Some((t.sub(z2), t.sub(z1))))
            }
            CoverBall::Annulus { a, k } => {
                let center = RatFunc::from_poly(a.clone()).mul_pow(pi, -(*k as i64));
                let e = ctx.mu_ball(x, y, &center, level as i64 - 2 * *k as i64)?;
                // (t - z₂)/(t - z₁) = (a - π^k z₂)/(a - π^k z₁) at t = a/π^k
                let a = ext.from_base(field.embed_poly(a, prec));
                let pk = field.uniformizer_pow(*k as i64, prec);
                (e, Some((a.sub(&z2.scale(&pk)), a.sub(&z1.scale(&pk)))))
            }
            CoverBall::Infinity => {
                let inner = ctx.ball_matrix(&RatFunc::zero(pi.modulus()), 1 - level as i64);
                let w = crate::cochains::atkin_lehner_matrix(ctx.graph().level(), pi)?;
                (ctx.mu_edge(&inner.mul(&w), x, y)?, None)
            }
        };
        mass += e;
        let Some((num, den)) = factor else { continue };
        loss = loss.max(num.valuation()).max(den.valuation());
        if e == 0 {
            continue;
        }
        let f = num.div(&den)?;
        let slot = groups.entry(e).or_insert_with(|| one.clone());
        *slot = slot.mul(&f);
    }
    if mass != 0 {
        return Err(Error::InvalidInput(format!(
            "measure has total mass {mass}, expected 0"
        )));
    }
    let mut value = one;
    for (e, g) in groups {
        value = value.mul(&g.pow(e)?);
    }
    let precision = (level as i64 - loss).clamp(0, prec as i64) as u32;
    Ok(IntegralResult {
        value,
        level,
        precision,
    })
}

/// Whether the period is taken from its defining double integral or from the product over `O^×`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PeriodMode {
    Raw,
    Reduced,
}

/// The period of the diagonal torus with `γ = diag(π, 1)`.
#[derive(Clone, Debug)]
pub struct Period {
    pub value: LocalElement,
    pub level: u32,
    pub precision: u32,
    pub mode: PeriodMode,
}

/// `I = ×∫_z^{γz} ∫_∞^0 ω` (raw, with `z` in the quadratic extension) or
/// `π^{W}·×∫_{O^×} t dμ_c{∞→0}` (reduced).
pub fn period(
    ctx: &SymbolContext,
    level: u32,
    prec: u32,
    mode: PeriodMode,
    z: Option<&QuadElement>,
) -> Result<Period> {
    let q = ctx.q();
    let field = LocalField::new(crate::algebra::Place::finite(ctx.pi().clone())?);
    let (inf, zero) = (P1::Infinity, P1::zero(q));
    match mode {
        PeriodMode::Reduced => {
            let mu = AxisMeasure {
                ctx,
                from: inf,
                to: zero,
            };
            let r = mult_integral_t(&field, &mu, level, prec)?;
            let w = ctx.winding_element()?;
            let value = field.uniformizer_pow(w, r.precision).mul(&r.value);
            Ok(Period {
                value,
                level,
                precision: r.precision,
                mode,
            })
        }
        PeriodMode::Raw => {
            let ext = QuadExt::new(&field, prec + 2)?;
            let default_z = ext.theta(prec + 2);
            let z = z.unwrap_or(&default_z);
            let gz = z.scale(&field.uniformizer_pow(1, prec + 2));
            let r = double_integral(ctx, z, &gz, &inf, &zero, level)?;
            let precision = r.precision.min(prec);
            let y = r.value.y();
            let x = r.value.x();
            if !y.is_zero() && y.valuation() < x.valuation() + precision as i64 {
                return Err(Error::PrecisionExhausted(
                    "raw period has a θ-component above the certified precision".into(),
                ));
            }
            Ok(Period {
                value: x.truncate(precision),
                level,
                precision,
                mode,
            })
        }
    }
}
