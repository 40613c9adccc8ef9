use std::path::PathBuf;
use std::sync::Arc;

use exzero::algebra::{Poly, RatFunc, P1};
use exzero::cochains::{cuspidal_basis, newform_for_curve, NewformOptions};
use exzero::elliptic::EllipticCurve;
use exzero::quotient::build_quotient;
use exzero::symbols::{ball_table, AxisMeasure, SymbolContext, Teitelbaum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURES: &[&str] = &["f2-a", "f2-b", "f3-a"];

fn context(name: &str) -> SymbolContext {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/curves");
    let e = EllipticCurve::load(&dir.join(format!("{name}.curve"))).unwrap();
    let m = e.level();
    let g = Arc::new(build_quotient(&m, m.deg().unwrap() + 2).unwrap());
    let sp = cuspidal_basis(g).unwrap();
    let nf = newform_for_curve(&e, &sp, NewformOptions::default()).unwrap();
    SymbolContext::new(nf.cochain, e.pi()).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> Poly {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(0..q as i64)).collect();
    Poly::from_coeffs(q, &c).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, q: u32) -> P1 {
    if rng.gen_ratio(1, 12) {
        return P1::Infinity;
    }
    let (dn, dd) = (rng.gen_range(0..6), rng.gen_range(0..5));
    let num = random_poly(rng, q, dn);
    let mut den = random_poly(rng, q, dd);
    if den.is_zero() {
        den = Poly::one(q);
    }
    P1::Finite(RatFunc::new(num, den).unwrap())
}

#[test]
fn continued_fractions_agree_with_geodesic_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        assert_eq!(ctx.symbol(&P1::Infinity).unwrap(), 0);
        for _ in 0..60 {
            let r = random_point(&mut rng, q);
            assert_eq!(
                ctx.symbol(&r).unwrap(),
                ctx.path_symbol(&r).unwrap(),
                "{name}: {r}"
            );
        }
    }
}

#[test]
fn two_end_symbols_are_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        for _ in 0..40 {
            let (x, y) = (random_point(&mut rng, q), random_point(&mut rng, q));
            let direct = ctx.path_symbol_between(&x, &y).unwrap();
            assert_eq!(
                direct,
                ctx.symbol_between(&x, &y).unwrap(),
                "{name}: [{x}, {y}]"
            );
        }
    }
}

#[test]
fn symbols_are_invariant_under_translations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        for _ in 0..30 {
            let P1::Finite(r) = random_point(&mut rng, q) else {
                continue;
            };
            let b = RatFunc::from_poly(random_poly(&mut rng, q, 3));
            let a = RatFunc::from_poly(Poly::constant(q, rng.gen_range(1..q)));
            let moved = P1::Finite(r.mul(&a).add(&b));
            assert_eq!(
                ctx.symbol(&moved).unwrap(),
                ctx.symbol(&P1::Finite(r)).unwrap()
            );
        }
    }
}

fn balls(pi: &Poly, k: u32) -> Vec<RatFunc> {
    Poly::all_below_degree(pi.modulus(), k as usize * pi.deg().unwrap())
        .map(RatFunc::from_poly)
        .collect()
}

#[test]
fn axis_measure_from_infinity_to_zero_is_teitelbaum() {
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        let mu = AxisMeasure {
            ctx: &ctx,
            from: P1::Infinity,
            to: P1::zero(q),
        };
        let teit = ball_table(&Teitelbaum(&ctx), ctx.pi(), 2).unwrap();
        let axis = ball_table(&mu, ctx.pi(), 2).unwrap();
        assert_eq!(teit.len(), axis.len());
        for (t, a) in teit.iter().zip(&axis) {
            assert_eq!(
                (t.mass, &t.center, t.radius),
                (a.mass, &a.center, a.radius),
                "{name}"
            );
        }
        for k in 0..=2 {
            for a in balls(ctx.pi(), k) {
                let neg = a.neg();
                assert_eq!(
                    ctx.mu_ball(&P1::Infinity, &P1::zero(q), &a, k as i64)
                        .unwrap(),
                    ctx.mu_ball(&P1::Infinity, &P1::zero(q), &neg, k as i64)
                        .unwrap()
                );
            }
        }
    }
}

#[test]
fn measures_are_additive_with_mass_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        let pi = ctx.pi().clone();
        let mut axes = vec![(P1::Infinity, P1::zero(q))];
        for _ in 0..3 {
            axes.push((random_point(&mut rng, q), random_point(&mut rng, q)));
        }
        for (x, y) in &axes {
            let mu = |a: &RatFunc, k: i64| ctx.mu_ball(x, y, a, k).unwrap();
            let total: i64 = balls(&pi, 1).iter().map(|a| mu(a, 1)).sum::<i64>();
            assert_eq!(total, mu(&RatFunc::zero(q), 0));
            assert_eq!(
                mu(&RatFunc::zero(q), 0) + ctx.mu_outside(x, y).unwrap(),
                0,
                "{name}"
            );
            for k in 0..3u32 {
                for a in balls(&pi, k) {
                    let children: i64 = balls(&pi, 1)
                        .iter()
                        .map(|b| {
                            let pk = b.mul_pow(&pi, k as i64);
                            mu(&a.add(&pk), k as i64 + 1)
                        })
                        .sum();
                    assert_eq!(children, mu(&a, k as i64), "{name}: {a} level {k}");
                }
            }
        }
        let x = random_point(&mut rng, q);
        assert_eq!(ctx.mu_ball(&x, &x, &RatFunc::zero(q), 1).unwrap(), 0);
    }
}

#[test]
fn axis_measures_form_a_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        for _ in 0..20 {
            let (x, y, z) = (
                random_point(&mut rng, q),
                random_point(&mut rng, q),
                random_point(&mut rng, q),
            );
            let k = rng.gen_range(-2..4);
            let a = RatFunc::from_poly(random_poly(&mut rng, q, 3)).mul_pow(ctx.pi(), -1);
            let xy = ctx.mu_ball(&x, &y, &a, k).unwrap();
            let yz = ctx.mu_ball(&y, &z, &a, k).unwrap();
            assert_eq!(xy + yz, ctx.mu_ball(&x, &z, &a, k).unwrap());
        }
    }
}

#[test]
fn winding_element() {
    for name in FIXTURES {
        let ctx = context(name);
        let q = ctx.q();
        let w = ctx.winding_element().unwrap();
        assert_eq!(w, ctx.symbol(&P1::zero(q)).unwrap());
        assert_eq!(
            w,
            -ctx.path_symbol_between(&P1::Infinity, &P1::zero(q))
                .unwrap()
        );
        // Starting the path at the next vertex towards p uses the ball π O_p.
        let shifted = ctx
            .mu_ball(&P1::Infinity, &P1::zero(q), &RatFunc::zero(q), 1)
            .unwrap();
        assert_eq!(w, shifted, "{name}");
        println!("{name}: W = {w}");
    }
}
