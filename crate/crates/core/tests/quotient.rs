use exzero::algebra::{parse_poly, Mat2, Place, Poly, RatFunc};
use exzero::local::LocalField;
use exzero::quotient::{
    build_quotient, group_order, p1_count, p1_points, LayerGroup, QuotientGraph,
};
use exzero::tree::{Family, OrientedEdge};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(s: &str, q: u32) -> Poly {
    parse_poly(s, q).unwrap()
}

fn graph(s: &str, q: u32) -> QuotientGraph {
    let m = poly(s, q);
    build_quotient(&m, m.deg().unwrap() + 2).unwrap()
}

/// Brute force: unimodular pairs mod m divided by the number of units.
fn p1_oracle(m: &Poly) -> usize {
    let q = m.modulus();
    let d = m.deg().unwrap();
    let res: Vec<Poly> = Poly::all_below_degree(q, d).collect();
    let units = res.iter().filter(|u| u.gcd(m).is_one()).count();
    let pairs = res
        .iter()
        .flat_map(|c| res.iter().map(move |e| (c, e)))
        .filter(|(c, e)| c.gcd(e).gcd(m).is_one())
        .count();
    assert_eq!(pairs % units, 0);
    pairs / units
}

const LEVELS: &[(&str, u32)] = &[
    ("T", 2),
    ("T^2 + T", 2),
    ("T^3 + T", 2),
    ("T^3 + T^2 + T", 2),
    ("T^3 + 1", 2),
    ("T^4 + T^3 + T + 1", 2),
    ("T", 3),
    ("T^2 + 1", 3),
    ("T^3 + 2*T", 3),
];

#[test]
fn projective_line_sizes() {
    assert_eq!(p1_points(&poly("T", 2)).unwrap().len(), 3);
    assert_eq!(p1_points(&poly("T^3 + T^2", 2)).unwrap().len(), 18);
    assert_eq!(p1_points(&poly("T", 3)).unwrap().len(), 4);
    for &(s, q) in LEVELS {
        let m = poly(s, q);
        let n = p1_points(&m).unwrap().len();
        assert_eq!(n, p1_oracle(&m), "{s} over F_{q}");
        let mut factors: Vec<Poly> = Vec::new();
        for d in 1..=m.deg().unwrap() {
            for f in Poly::monics_of_degree(q, d) {
                if f.is_irreducible().unwrap() && f.divides(&m) {
                    factors.push(f);
                }
            }
        }
        assert_eq!(p1_count(&m, &factors), n as u64);
    }
}

#[test]
fn star_sums_and_orbit_stabilizer() {
    for &(s, q) in LEVELS {
        let g = graph(s, q);
        for (k, o, sum) in g.star_sums() {
            assert_eq!(sum, q as u64 + 1, "{s}: vertex {k}:{o}");
        }
        let np = g.table().len() as u64;
        for k in 0..=g.depth() {
            let grp = if k == 0 {
                LayerGroup::Full
            } else {
                LayerGroup::Upper(k as u32)
            };
            let layer = g.vertex_layer(k);
            assert_eq!(layer.sizes.iter().sum::<usize>() as u64, np);
            for (size, stab) in layer.sizes.iter().zip(&layer.stab) {
                assert_eq!(*size as u64 * stab * (q as u64 - 1), group_order(q, grp));
            }
        }
        for k in 0..g.depth() {
            let grp = if k == 0 {
                LayerGroup::Borel
            } else {
                LayerGroup::Upper(k as u32)
            };
            let layer = g.edge_layer(k);
            for (size, stab) in layer.sizes.iter().zip(&layer.stab) {
                assert_eq!(*size as u64 * stab * (q as u64 - 1), group_order(q, grp));
            }
        }
    }
}

#[test]
fn level_t_over_f2() {
    let g = graph("T", 2);
    assert_eq!(g.vertex_layer(0).len(), 1);
    // Γ₀(T) ∩ GL₂(F_2) is the Borel subgroup, of order 2; the full group has order 6
    // but acts on the three points of P¹(F_2) transitively.
    assert_eq!(g.vertex_stabilizer_order(0, 0), 2);
    for k in 1..=g.depth() {
        assert_eq!(g.vertex_layer(k).len(), 2);
    }
    assert_eq!(g.cusps(), 2);
    assert_eq!(g.cycle_rank(), 0);
}

#[test]
fn cusp_ray_stabilizers_grow_by_q() {
    for &(s, q) in LEVELS {
        let g = graph(s, q);
        for k in g.core_depth()..g.depth() - 1 {
            let (a, b) = (g.edge_layer(k), g.edge_layer(k + 1));
            for (x, y) in a.stab.iter().zip(&b.stab) {
                assert_eq!(x * q as u64, *y);
            }
        }
    }
}

/// Rank of the vertex-edge incidence matrix, computed by exact elimination.
fn betti_oracle(g: &QuotientGraph) -> i64 {
    let mut vid = std::collections::HashMap::new();
    for k in 0..=g.depth() {
        for o in 0..g.vertex_layer(k).len() {
            let n = vid.len();
            vid.insert((k, o), n);
        }
    }
    let ne = g.num_edge_orbits();
    let mut rows = vec![vec![BigInt::zero(); ne]; vid.len()];
    for (j, e) in g.edge_orbits().enumerate() {
        let (a, b) = g.endpoints(e);
        rows[vid[&a]][j] += 1;
        rows[vid[&b]][j] -= 1;
    }
    let rank = exzero::cochains::linalg::echelon(&mut rows, ne).len() as i64;
    ne as i64 - rank
}

#[test]
fn cycle_rank_matches_incidence_rank() {
    let expect = [0, 0, 1, 2, 2, 5, 0, 0, 3];
    for (&(s, q), &b1) in LEVELS.iter().zip(&expect) {
        let g = graph(s, q);
        assert_eq!(g.cycle_rank(), b1, "{s}");
        assert_eq!(betti_oracle(&g), b1, "{s}");
    }
}

#[test]
fn representatives_project_to_themselves() {
    for &(s, q) in LEVELS {
        let g = graph(s, q);
        for e in g.edge_orbits() {
            let p = g.project_matrix(&g.edge_matrix(e)).unwrap();
            assert_eq!((p.edge, p.sign), (e, 1), "{s}: {e:?}");
        }
    }
}

#[test]
fn base_edge_and_reversal() {
    let g = graph("T^3 + T^2 + T", 2);
    let f = LocalField::new(Place::infinity(2).unwrap());
    let base = OrientedEdge::base(&f);
    let p = g.project_edge(&base).unwrap();
    let x = g.table().lookup(&Poly::zero(2), &Poly::one(2)).unwrap();
    assert_eq!(p.edge, g.edge_orbit_of(0, x));
    assert_eq!(p.sign, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(-6..6);
        let u = random_ratfunc(&mut rng, 2);
        let fam = if rng.gen() {
            Family::Main
        } else {
            Family::Flipped
        };
        let e = OrientedEdge::from_global(&f, n, &u, fam);
        let (a, b) = (
            g.project_edge(&e).unwrap(),
            g.project_edge(&e.reverse()).unwrap(),
        );
        assert_eq!(a.edge, b.edge);
        assert_eq!(a.sign, -b.sign);
    }
}

fn random_poly(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> Poly {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(0..q as i64)).collect();
    Poly::from_coeffs(q, &c).unwrap()
}

fn random_ratfunc(rng: &mut ChaCha8Rng, q: u32) -> RatFunc {
    let num = random_poly(rng, q, 4);
    let mut den = random_poly(rng, q, 3);
    if den.is_zero() {
        den = Poly::one(q);
    }
    RatFunc::new(num, den).unwrap()
}

/// Random element of Γ₀(m) as a product of elementary generators.
fn random_gamma0(rng: &mut ChaCha8Rng, m: &Poly) -> Mat2 {
    let q = m.modulus();
    let mut g = Mat2::identity(q);
    let (one, zero) = (Poly::one(q), Poly::zero(q));
    for _ in 0..4 {
        let b = random_poly(rng, q, 2);
        let c = &random_poly(rng, q, 1) * m;
        let a = Poly::constant(q, rng.gen_range(1..q));
        g = g
            .mul(&Mat2::from_polys(&one, &b, &zero, &one))
            .mul(&Mat2::from_polys(&one, &zero, &c, &one))
            .mul(&Mat2::from_polys(&a, &zero, &zero, &one));
    }
    g
}

#[test]
fn projection_is_gamma0_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(s, q) in LEVELS {
        let g = graph(s, q);
        let m = g.level().clone();
        for _ in 0..40 {
            let n = rng.gen_range(-5..5);
            let u = random_ratfunc(&mut rng, q);
            let fam = if rng.gen() {
                Family::Main
            } else {
                Family::Flipped
            };
            let t = RatFunc::from_poly(Poly::t(q));
            // (S^n, u; 0, 1) with S = 1/T, optionally followed by the flip (0, 1; S, 0).
            let s_n = if n >= 0 {
                RatFunc::new(Poly::one(q), Poly::monomial(q, 1, n as usize)).unwrap()
            } else {
                RatFunc::from_poly(Poly::monomial(q, 1, (-n) as usize))
            };
            let mut e = Mat2::new(s_n, u, RatFunc::zero(q), RatFunc::one(q));
            if fam == Family::Flipped {
                let w = Mat2::new(
                    RatFunc::zero(q),
                    RatFunc::one(q),
                    t.inv().unwrap(),
                    RatFunc::zero(q),
                );
                e = e.mul(&w);
            }
            let base = g.project_matrix(&e).unwrap();
            let gamma = random_gamma0(&mut rng, &m);
            let moved = g.project_matrix(&gamma.mul(&e)).unwrap();
            assert_eq!(base, moved, "{s}");
        }
    }
}

#[test]
fn dot_export_lists_core() {
    let g = graph("T^3 + T", 2);
    let dot = g.to_dot();
    assert!(dot.starts_with("graph quotient {"));
    assert!(dot.contains("\"0:0\""));
    assert_eq!(
        dot.matches("shape=box").count(),
        g.vertex_layer(g.core_depth()).len()
    );
}
