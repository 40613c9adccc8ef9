use std::path::PathBuf;
use std::sync::Arc;

use exzero::algebra::{Place, Poly, RatFunc, P1};
use exzero::cochains::{cuspidal_basis, newform_for_curve, HarmonicCochain, NewformOptions};
use exzero::elliptic::EllipticCurve;
use exzero::integrals::{
    double_integral, mult_integral_t, mult_integral_units, period, standard_cover, teitelbaum_unit,
    CoverBall, PeriodMode,
};
use exzero::local::{LocalElement, LocalField, QuadElement, QuadExt};
use exzero::quotient::build_quotient;
use exzero::symbols::{AxisMeasure, BoundaryMeasure, SymbolContext, Teitelbaum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load(name: &str) -> EllipticCurve {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/curves");
    EllipticCurve::load(&dir.join(format!("{name}.curve"))).unwrap()
}

fn context(name: &str) -> SymbolContext {
    let e = load(name);
    let m = e.level();
    let g = Arc::new(build_quotient(&m, m.deg().unwrap() + 2).unwrap());
    let sp = cuspidal_basis(g).unwrap();
    let nf = newform_for_curve(&e, &sp, NewformOptions::default()).unwrap();
    SymbolContext::new(nf.cochain, e.pi()).unwrap()
}

fn local(ctx: &SymbolContext) -> LocalField {
    LocalField::new(Place::finite(ctx.pi().clone()).unwrap())
}

fn units(pi: &Poly, k: u32) -> Vec<Poly> {
    Poly::all_below_degree(pi.modulus(), pi.deg().unwrap() * k as usize)
        .filter(|a| !a.rem(pi).unwrap().is_zero())
        .collect()
}

/// Ungrouped product over the unit balls, one power per ball.
fn naive_product(f: &LocalField, mu: &dyn BoundaryMeasure, level: u32) -> LocalElement {
    let mut acc = f.one(level);
    for a in units(f.pi(), level) {
        let e = mu
            .ball(&RatFunc::from_poly(a.clone()), level as i64)
            .unwrap();
        acc = acc.mul(&f.embed_poly(&a, level).pow(e).unwrap());
    }
    acc
}

fn mass_of_units(mu: &dyn BoundaryMeasure, pi: &Poly) -> i64 {
    units(pi, 1)
        .iter()
        .map(|a| mu.ball(&RatFunc::from_poly(a.clone()), 1).unwrap())
        .sum()
}

#[test]
fn grouped_product_matches_ball_by_ball() {
    for (name, level) in [("f2-a", 8), ("f2-b", 4), ("f3-a", 6)] {
        let ctx = context(name);
        let f = local(&ctx);
        let got = teitelbaum_unit(&ctx, level, 64).unwrap();
        assert_eq!(got.precision, level);
        let want = naive_product(&f, &Teitelbaum(&ctx), level);
        assert!(got.value.congruent(&want, level as i64), "{name}");
    }
}

#[test]
fn constant_integrand_gives_power_of_total_mass() {
    let ctx = context("f3-a");
    let f = local(&ctx);
    let mu = AxisMeasure {
        ctx: &ctx,
        from: P1::Infinity,
        to: P1::zero(3),
    };
    let c = f.embed_poly(&Poly::from_coeffs(3, &[2, 0, 1]).unwrap(), 8);
    let r = mult_integral_units(&f, &mu, 5, 8, |_| Ok(c.clone())).unwrap();
    let want = c.pow(mass_of_units(&mu, ctx.pi())).unwrap();
    assert!(r.value.congruent(&want, r.precision as i64));
}

#[test]
fn level_refinement_is_congruent() {
    let ctx = context("f2-a");
    let mut prev = teitelbaum_unit(&ctx, 4, 64).unwrap();
    for level in 5..=9 {
        let next = teitelbaum_unit(&ctx, level, 64).unwrap();
        assert!(
            next.value.congruent(&prev.value, prev.precision as i64),
            "level {level}"
        );
        prev = next;
    }
}

#[test]
fn ball_representatives_do_not_matter() {
    let ctx = context("f3-a");
    let f = local(&ctx);
    let mu = Teitelbaum(&ctx);
    let level = 5;
    let shift = f.pi_pow(level);
    let base = mult_integral_t(&f, &mu, level, level).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let r = Poly::from_coeffs(3, &[rng.gen_range(0..3), rng.gen_range(0..3), 1]).unwrap();
        let moved = mult_integral_units(&f, &mu, level, level, |a| {
            Ok(f.embed_poly(&(a + &(&r * &shift)), level))
        })
        .unwrap();
        assert!(moved.value.congruent(&base.value, level as i64));
    }
}

#[test]
fn integral_is_multiplicative_in_the_integrand() {
    let ctx = context("f2-b");
    let f = local(&ctx);
    let mu = Teitelbaum(&ctx);
    let level = 4;
    let pi = ctx.pi().clone();
    let g = |a: &Poly| f.embed_poly(&(&(a * a) * a), level);
    let h = |a: &Poly| f.embed_poly(&(a + &pi), level);
    let prod = mult_integral_units(&f, &mu, level, level, |a| Ok(g(a).mul(&h(a)))).unwrap();
    let gi = mult_integral_units(&f, &mu, level, level, |a| Ok(g(a))).unwrap();
    let hi = mult_integral_units(&f, &mu, level, level, |a| Ok(h(a))).unwrap();
    assert!(prod.value.congruent(&gi.value.mul(&hi.value), level as i64));
}

#[test]
fn zero_measure_gives_one() {
    let ctx = context("f2-a");
    let zero = SymbolContext::new(HarmonicCochain::zero(ctx.graph().clone()), ctx.pi()).unwrap();
    let f = local(&zero);
    let r = teitelbaum_unit(&zero, 6, 6).unwrap();
    assert_eq!(r.value, f.one(6));
    let ext = QuadExt::new(&f, 8).unwrap();
    let th = ext.theta(8);
    let d = double_integral(
        &zero,
        &th,
        &th.add(&ext.from_base(f.one(8))),
        &P1::Infinity,
        &P1::zero(2),
        4,
    )
    .unwrap();
    assert!(d
        .value
        .congruent(&ext.from_base(f.one(8)), d.precision as i64));
}

#[test]
fn standard_cover_has_the_right_shape() {
    let pi = Poly::from_coeffs(2, &[1, 1, 1]).unwrap();
    let level = 3;
    let cover = standard_cover(&pi, level);
    let inner = cover
        .iter()
        .filter(|b| matches!(b, CoverBall::Inner { .. }))
        .count();
    let ann = cover
        .iter()
        .filter(|b| matches!(b, CoverBall::Annulus { .. }))
        .count();
    // N = 4: N^L inner balls and N^{L-k}(1 - 1/N) annulus balls per k.
    assert_eq!(inner, 64);
    assert_eq!(ann, 12 + 3);
    assert!(matches!(cover.last(), Some(CoverBall::Infinity)));
}

fn theta_point(f: &LocalField, prec: u32, shift: i64) -> QuadElement {
    let ext = QuadExt::new(f, prec).unwrap();
    let th = ext.theta(prec);
    th.add(&ext.from_base(f.embed_poly(
        &Poly::constant(f.q(), shift.rem_euclid(f.q() as i64) as u32),
        prec,
    )))
}

#[test]
fn cover_mass_is_zero_for_random_endpoints() {
    let ctx = context("f3-a");
    let f = local(&ctx);
    let z = theta_point(&f, 8, 0);
    let z2 = theta_point(&f, 8, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let point = |rng: &mut ChaCha8Rng| -> P1 {
        if rng.gen_ratio(1, 6) {
            return P1::Infinity;
        }
        let num = Poly::from_coeffs(3, &[rng.gen_range(0..3), rng.gen_range(0..3)]).unwrap();
        let den = Poly::from_coeffs(3, &[rng.gen_range(1..3), rng.gen_range(0..3)]).unwrap();
        P1::Finite(RatFunc::new(num, den).unwrap())
    };
    for _ in 0..6 {
        let (x, y) = (point(&mut rng), point(&mut rng));
        double_integral(&ctx, &z, &z2, &x, &y, 4).unwrap();
    }
}

#[test]
fn double_integral_is_multiplicative_in_both_endpoint_pairs() {
    let ctx = context("f2-a");
    let f = local(&ctx);
    let zs: Vec<QuadElement> = (0..3)
        .map(|s| {
            let z = theta_point(&f, 10, 0);
            z.add(&z.ext().from_base(f.uniformizer_pow(s, 10)))
        })
        .collect();
    let (x, y, w) = (
        P1::Infinity,
        P1::zero(2),
        P1::Finite(RatFunc::from_poly(Poly::one(2))),
    );
    let level = 6;
    let d = |a: &QuadElement, b: &QuadElement, x: &P1, y: &P1| {
        double_integral(&ctx, a, b, x, y, level).unwrap()
    };
    let d01 = d(&zs[0], &zs[1], &x, &y);
    let d12 = d(&zs[1], &zs[2], &x, &y);
    let d02 = d(&zs[0], &zs[2], &x, &y);
    let p = d01.precision.min(d12.precision).min(d02.precision) as i64;
    assert!(p >= 3);
    assert!(d01.value.mul(&d12.value).congruent(&d02.value, p));

    let dxy = d(&zs[0], &zs[1], &x, &y);
    let dyw = d(&zs[0], &zs[1], &y, &w);
    let dxw = d(&zs[0], &zs[1], &x, &w);
    let p = dxy.precision.min(dyw.precision).min(dxw.precision) as i64;
    assert!(dxy.value.mul(&dyw.value).congruent(&dxw.value, p));
}

#[test]
fn double_integral_is_invariant_under_translation_and_scaling() {
    let ctx = context("f3-a");
    let f = local(&ctx);
    let prec = 10;
    let z = theta_point(&f, prec, 0);
    let ext = z.ext().clone();
    let pi = f.uniformizer_pow(1, prec);
    let one = ext.from_base(f.one(prec));
    let (inf, zero, one_pt) = (
        P1::Infinity,
        P1::zero(3),
        P1::Finite(RatFunc::from_poly(Poly::one(3))),
    );
    let level = 5;
    let base = double_integral(&ctx, &z, &z.scale(&pi), &inf, &zero, level).unwrap();
    // t -> t + 1
    let moved = double_integral(
        &ctx,
        &z.add(&one),
        &z.scale(&pi).add(&one),
        &inf,
        &one_pt,
        level,
    )
    .unwrap();
    let p = base.precision.min(moved.precision) as i64;
    assert!(p >= 3);
    assert!(base.value.congruent(&moved.value, p));
    // t -> πt fixes both cusps
    let scaled = double_integral(
        &ctx,
        &z.scale(&pi),
        &z.scale(&pi).scale(&pi),
        &inf,
        &zero,
        level,
    )
    .unwrap();
    let p = base.precision.min(scaled.precision) as i64;
    assert!(base.value.congruent(&scaled.value, p));
}

#[test]
fn raw_period_does_not_depend_on_base_point() {
    let ctx = context("f2-a");
    let f = local(&ctx);
    let z0 = theta_point(&f, 10, 0);
    let z1 = z0.add(&z0.ext().from_base(f.uniformizer_pow(1, 10)));
    let a = period(&ctx, 6, 8, PeriodMode::Raw, Some(&z0)).unwrap();
    let b = period(&ctx, 6, 8, PeriodMode::Raw, Some(&z1)).unwrap();
    let p = a.precision.min(b.precision) as i64;
    assert!(a.value.congruent(&b.value, a.value.valuation() + p));
}

#[test]
fn period_valuation_is_the_winding_element_and_routes_agree() {
    for (name, raw_level, level) in [("f2-a", 6, 10), ("f2-b", 4, 6), ("f3-a", 5, 8)] {
        let ctx = context(name);
        let w = ctx.winding_element().unwrap();
        let red = period(&ctx, level, 64, PeriodMode::Reduced, None).unwrap();
        assert_eq!(red.value.valuation(), w, "{name}");
        assert_eq!(red.precision, level);
        let raw = period(&ctx, raw_level, 64, PeriodMode::Raw, None).unwrap();
        assert_eq!(raw.value.valuation(), w, "{name}");
        assert!(
            raw.precision >= 3,
            "{name}: raw precision {}",
            raw.precision
        );
        assert!(
            raw.value.congruent(&red.value, w + raw.precision as i64),
            "{name}"
        );
    }
}

#[test]
fn rejects_bad_inputs() {
    let ctx = context("f2-a");
    let f = local(&ctx);
    assert!(teitelbaum_unit(&ctx, 1, 8).is_err());
    let ext = QuadExt::new(&f, 8).unwrap();
    let on_line = ext.from_base(f.one(8));
    let th = ext.theta(8);
    assert!(double_integral(&ctx, &on_line, &th, &P1::Infinity, &P1::zero(2), 4).is_err());
    assert!(
        mult_integral_units(&f, &Teitelbaum(&ctx), 4, 4, |_| Ok(f.uniformizer_pow(1, 4))).is_err()
    );
}
