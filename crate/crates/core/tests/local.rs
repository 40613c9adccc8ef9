use exzero::algebra::{parse_poly, parse_ratfunc, Place, Poly, RatFunc};
use exzero::local::{
    detect_root_of_unity, tate_q_from_j, verify_j_checksum, LocalField, QuadExt, TateSeries,
    J_COEFFICIENTS,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn field(pi: &str, q: u32) -> LocalField {
    LocalField::new(Place::finite(parse_poly(pi, q).unwrap()).unwrap())
}

fn poly(s: &str, q: u32) -> Poly {
    parse_poly(s, q).unwrap()
}

#[test]
fn embedding_examples() {
    let f = field("T", 2);
    let t = f.embed(&parse_ratfunc("T", 2).unwrap(), 4);
    assert_eq!((t.valuation(), t.unit().clone()), (1, poly("1", 2)));
    let x = f.embed(&parse_ratfunc("1/(T + 1)", 2).unwrap(), 3);
    assert_eq!(x.valuation(), 0);
    assert_eq!(x.unit(), &poly("T^2 + T + 1", 2));
    let inf = LocalField::new(Place::infinity(2).unwrap());
    let t = inf.embed(&parse_ratfunc("T", 2).unwrap(), 4);
    assert_eq!((t.valuation(), t.unit().clone()), (-1, poly("1", 2)));
}

#[test]
fn arithmetic_examples() {
    let f = field("T", 2);
    let a = f.from_parts(0, poly("1", 2), 5);
    let b = f.from_parts(2, poly("1", 2), 5);
    let c = a.mul(&b);
    assert_eq!((c.valuation(), c.unit().clone()), (2, poly("1", 2)));

    let x = f.from_parts(1, poly("T + 1", 2), 3);
    let y = x.inv().unwrap();
    assert_eq!(
        (y.valuation(), y.unit().clone()),
        (-1, poly("T^2 + T + 1", 2))
    );

    let z = x.add(&x.neg());
    assert!(z.is_zero());
    assert_eq!(z.precision(), 0);
    assert_eq!(z.absolute_precision(), 4);
    assert!(z.inv().is_err());
    assert!(z.require_precision(1).is_err());
}

#[test]
fn cancellation_reports_loss() {
    let f = field("T", 3);
    let a = f.from_parts(0, poly("T^2 + T + 1", 3), 6);
    let b = f.from_parts(0, poly("2", 3), 6);
    let s = a.add(&b);
    assert_eq!(s.valuation(), 1);
    assert_eq!(s.precision(), 5);
}

#[test]
fn teichmuller_examples() {
    let f = field("T^2 + T + 1", 2);
    let one = f.teichmuller(&poly("1", 2), 10).unwrap();
    assert_eq!(one.unit(), &poly("1", 2));
    let t = f.teichmuller(&poly("T", 2), 10).unwrap();
    let t4 = t.pow(4).unwrap();
    assert_eq!(t4, t);
    assert_eq!(t.residue(), poly("T", 2));

    let g = field("T + 1", 3);
    let c = g.teichmuller(&poly("2", 3), 8).unwrap();
    assert_eq!(c.unit(), &poly("2", 3));
}

#[test]
fn root_of_unity_detection() {
    let f = field("T^2 + T + 1", 2);
    assert_eq!(detect_root_of_unity(&f.one(8)).unwrap(), Some(poly("1", 2)));
    let one_plus_pi = f.from_parts(0, poly("T^2 + T", 2), 8);
    assert_eq!(detect_root_of_unity(&one_plus_pi).unwrap(), None);
    for r in f.residues().filter(|r| !r.is_zero()) {
        let t = f.teichmuller(&r, 12).unwrap();
        assert_eq!(detect_root_of_unity(&t).unwrap(), Some(r));
    }
    assert!(detect_root_of_unity(&f.one(1)).is_err());
}

#[test]
fn quadratic_extension() {
    for (pi, q) in [("T", 2), ("T^2 + T + 1", 2), ("T", 3), ("T^2 + 1", 3)] {
        let f = field(pi, q);
        let ext = QuadExt::new(&f, 10).unwrap();
        let th = ext.theta(10);
        let (a, b) = ext.defining();
        let sq = th.mul(&th);
        assert!(sq.x().congruent(a, 10) && sq.y().congruent(b, 10));
        let inv = th.inv().unwrap();
        let one = inv.mul(&th);
        assert!(one.congruent(&ext.from_base(f.one(10)), 10));
        let x = f.embed_poly(&poly("T + 1", q), 10);
        let prod = ext.from_base(x.clone()).mul(&ext.from_base(x.clone()));
        assert!(prod.is_base());
        assert!(prod.x().congruent(&x.mul(&x), 10));
    }
}

/// `q·j(q)` as integers from `E4^3 / Δ`, an oracle independent of the stored table.
fn j_oracle(n: usize) -> Vec<BigInt> {
    let sigma3 = |k: usize| -> BigInt {
        (1..=k)
            .filter(|d| k.is_multiple_of(*d))
            .map(|d| BigInt::from(d).pow(3))
            .sum()
    };
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut c = vec![BigInt::from(0); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n - i) {
                c[i + j] += x * y;
            }
        }
        c
    };
    let mut e4 = vec![BigInt::from(1)];
    e4.extend((1..n).map(|k| sigma3(k) * 240));
    let e4c = mul(&mul(&e4, &e4), &e4);
    // eta^24 / q = prod (1 - q^k)^24
    let mut d = vec![BigInt::from(0); n];
    d[0] = BigInt::from(1);
    for k in 1..n {
        let mut f = vec![BigInt::from(0); n];
        f[0] = BigInt::from(1);
        f[k] = BigInt::from(-1);
        for _ in 0..24 {
            d = mul(&d, &f);
        }
    }
    let mut inv = vec![BigInt::from(0); n];
    inv[0] = BigInt::from(1);
    for k in 1..n {
        let s: BigInt = (1..=k).map(|i| &d[i] * &inv[k - i]).sum();
        inv[k] = -s;
    }
    mul(&e4c, &inv)
}

#[test]
fn stored_j_table_matches_oracle() {
    verify_j_checksum().unwrap();
    let stored: Vec<BigInt> = J_COEFFICIENTS
        .lines()
        .map(|l| l.trim().parse().unwrap())
        .collect();
    assert_eq!(stored.len(), 64);
    assert_eq!(stored, j_oracle(64));
    let s2 = TateSeries::new(2, 8).unwrap();
    assert_eq!(s2.j_coefficients()[1], 0, "744 is even");
}

fn random_j(f: &LocalField, nu: i64, seed: u64, prec: u32) -> exzero::local::LocalElement {
    let q = f.q() as u64;
    let mut s = seed;
    let mut coeffs = Vec::new();
    for _ in 0..(prec as usize * f.degree()) {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        coeffs.push(((s >> 33) % q) as i64);
    }
    let tail = Poly::from_coeffs(f.q(), &coeffs).unwrap();
    let lead = Poly::constant(f.q(), 1 + (seed % (q - 1)) as u32);
    let unit = &lead + &(&tail * f.pi());
    f.from_parts(nu, unit, prec)
}

#[test]
fn tate_round_trip() {
    for (pi, q) in [("T", 2), ("T + 1", 3), ("T^2 + T + 1", 2)] {
        let f = field(pi, q);
        let series = TateSeries::new(q, 40).unwrap();
        for m in 1..=5i64 {
            for seed in 0..4 {
                let j = random_j(&f, -m, seed, 32);
                let tq = tate_q_from_j(&j, 32).unwrap();
                assert_eq!(tq.valuation(), m);
                let back = series.j_of_q(&tq).unwrap();
                assert!(
                    back.congruent(&j, j.absolute_precision()),
                    "m={m} seed={seed}"
                );
            }
        }
    }
    let f = field("T", 2);
    assert!(tate_q_from_j(&f.one(4), 4).is_err());
}

fn rat_strategy(q: u32) -> impl Strategy<Value = RatFunc> {
    (
        prop::collection::vec(0..q as i64, 1..6),
        prop::collection::vec(0..q as i64, 1..5),
    )
        .prop_filter_map("nonzero", move |(n, d)| {
            let n = Poly::from_coeffs(q, &n).unwrap();
            let d = Poly::from_coeffs(q, &d).unwrap();
            if n.is_zero() || d.is_zero() {
                None
            } else {
                RatFunc::new(n, d).ok()
            }
        })
}

proptest! {
    #[test]
    fn ultrametric(a in rat_strategy(3), b in rat_strategy(3)) {
        let f = field("T + 1", 3);
        let (x, y) = (f.embed(&a, 12), f.embed(&b, 12));
        let s = x.add(&y);
        prop_assert!(s.valuation() >= x.valuation().min(y.valuation()));
        if x.valuation() != y.valuation() {
            prop_assert_eq!(s.valuation(), x.valuation().min(y.valuation()));
        }
    }

    #[test]
    fn embedding_is_a_ring_map(a in rat_strategy(2), b in rat_strategy(2)) {
        for place in [Place::finite(poly("T^2 + T + 1", 2)).unwrap(), Place::infinity(2).unwrap()] {
            let f = LocalField::new(place);
            let (x, y) = (f.embed(&a, 10), f.embed(&b, 10));
            let prod = f.embed(&a.mul(&b), 10);
            prop_assert!(x.mul(&y).congruent(&prod, prod.absolute_precision()));
            let sum = a.add(&b);
            if !sum.is_zero() {
                let es = f.embed(&sum, 10);
                let abs = x.add(&y).absolute_precision().min(es.absolute_precision());
                prop_assert!(x.add(&y).congruent(&es, abs));
            }
        }
    }

    #[test]
    fn teichmuller_is_multiplicative(r in 1u64..9, s in 1u64..9) {
        let f = field("T^2 + 1", 3);
        let (r, s) = (Poly::from_index(3, r), Poly::from_index(3, s));
        let rs = r.mul_mod(&s, f.pi());
        let lhs = f.teichmuller(&r, 16).unwrap().mul(&f.teichmuller(&s, 16).unwrap());
        prop_assert_eq!(lhs, f.teichmuller(&rs, 16).unwrap());
    }
}
