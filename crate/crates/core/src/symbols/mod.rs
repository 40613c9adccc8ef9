//! Modular symbols of a cuspidal cochain at infinity and the boundary measures they define
//! on `P^1(F_p)`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Mat2, Poly, RatFunc, P1};
use crate::cochains::{atkin_lehner_matrix, HarmonicCochain};
use crate::error::{Error, Result};
use crate::quotient::QuotientGraph;
use crate::tree::Family;

/// The newform, its graph and the finite place `p` dividing the level exactly.
#[derive(Clone, Debug)]
pub struct SymbolContext {
    graph: Arc<QuotientGraph>,
    cochain: HarmonicCochain,
    pi: Poly,
    /// `[γ_x·0, γ_x·∞]` for every point `x` of `P^1(A/m)`.
    manin: Vec<i64>,
}

/// `1/T^n` for `n >= 0`, `T^{-n}` otherwise.
fn s_pow(q: u32, n: i64) -> RatFunc {
    let t = Poly::monomial(q, 1, n.unsigned_abs() as usize);
    if n >= 0 {
        RatFunc::new(Poly::one(q), t).unwrap()
    } else {
        RatFunc::from_poly(t)
    }
}

/// `(S^n, u; 0, 1)` at infinity, optionally followed by the flip `(0, 1; S, 0)`.
fn edge_matrix(q: u32, n: i64, u: &RatFunc, family: Family) -> Mat2 {
    let m = Mat2::new(s_pow(q, n), u.clone(), RatFunc::zero(q), RatFunc::one(q));
    match family {
        Family::Main => m,
        Family::Flipped => m.mul(&Mat2::new(
            RatFunc::zero(q),
            RatFunc::one(q),
            s_pow(q, 1),
            RatFunc::zero(q),
        )),
    }
}

fn den_degree(r: &RatFunc) -> i64 {
    r.den().deg().unwrap() as i64
}

impl SymbolContext {
    pub fn new(cochain: HarmonicCochain, pi: &Poly) -> Result<Self> {
        let graph = cochain.graph().clone();
        atkin_lehner_matrix(graph.level(), pi)?;
        let mut ctx = Self {
            graph,
            cochain,
            pi: pi.clone(),
            manin: Vec::new(),
        };
        ctx.manin = (0..ctx.graph.table().len())
            .map(|x| ctx.manin_entry(x))
            .collect::<Result<_>>()?;
        Ok(ctx)
    }

    pub fn cochain(&self) -> &HarmonicCochain {
        &self.cochain
    }

    pub fn graph(&self) -> &Arc<QuotientGraph> {
        &self.graph
    }

    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    pub fn q(&self) -> u32 {
        self.graph.q()
    }

    fn core(&self) -> i64 {
        self.graph.core_depth() as i64
    }

    fn value(&self, g: &Mat2) -> Result<i64> {
        self.cochain.eval(g)
    }

    /// Edges past the summation window must lie on cusp rays, where the cochain vanishes.
    fn assert_outside(&self, g: &Mat2) -> Result<()> {
        let p = self.graph.project_matrix(g)?;
        if (p.edge.layer as i64) < self.core() {
            return Err(Error::PathCap(p.edge.layer));
        }
        Ok(())
    }

    /// Path edges `flipped(n, r)` from `r = a/b` to infinity can only meet the core for
    /// `1 - deg m <= n <= 2 deg b + deg m`.
    fn window(&self, r: &RatFunc) -> (i64, i64) {
        (1 - self.core(), 2 * den_degree(r) + self.core())
    }

    /// `[r, ∞]`: the sum of the cochain along the geodesic from `r` to `∞`, edge by edge.
    pub fn path_symbol(&self, r: &P1) -> Result<i64> {
        let P1::Finite(r) = r else { return Ok(0) };
        let q = self.q();
        let (lo, hi) = self.window(r);
        self.assert_outside(&edge_matrix(q, lo - 1, r, Family::Flipped))?;
        self.assert_outside(&edge_matrix(q, hi + 1, r, Family::Flipped))?;
        (lo..=hi)
            .map(|n| self.value(&edge_matrix(q, n, r, Family::Flipped)))
            .sum()
    }

    /// `[x, y]` summed directly along the geodesic between two points: rising from `x`
    /// through `flipped(n, x)` and descending to `y` through `main(n, y)` for `n > ν(x - y)`.
    pub fn path_symbol_between(&self, x: &P1, y: &P1) -> Result<i64> {
        let (x, y) = match (x, y) {
            (P1::Infinity, P1::Infinity) => return Ok(0),
            (P1::Infinity, y) => return Ok(-self.path_symbol(y)?),
            (x, P1::Infinity) => return self.path_symbol(x),
            (P1::Finite(x), P1::Finite(y)) => (x, y),
        };
        let Some(deg) = x.sub(y).degree() else {
            return Ok(0);
        };
        let q = self.q();
        let start = -deg + 1;
        let mut total = 0;
        for (r, fam) in [(x, Family::Flipped), (y, Family::Main)] {
            let hi = self.window(r).1;
            self.assert_outside(&edge_matrix(q, hi.max(start) + 1, r, fam))?;
            for n in start..=hi {
                total += self.value(&edge_matrix(q, n, r, fam))?;
            }
        }
        Ok(total)
    }

    fn manin_entry(&self, x: usize) -> Result<i64> {
        let g = self.graph.representative(x);
        let q = self.q();
        let zero = RatFunc::zero(q);
        let (lo, hi) = self.window(&zero);
        self.assert_outside(&g.mul(&edge_matrix(q, lo - 1, &zero, Family::Flipped)))?;
        self.assert_outside(&g.mul(&edge_matrix(q, hi + 1, &zero, Family::Flipped)))?;
        (lo..=hi)
            .map(|n| self.value(&g.mul(&edge_matrix(q, n, &zero, Family::Flipped))))
            .sum()
    }

    /// `[g·0, g·∞]` for `g ∈ GL_2(A)` with bottom row `(c, d)`.
    pub fn manin_symbol(&self, c: &Poly, d: &Poly) -> Result<i64> {
        Ok(self.manin[self.graph.table().lookup(c, d)?])
    }

    /// `[r, ∞]` through the continued fraction of `r`: consecutive convergents differ by a
    /// unimodular matrix, so the symbol is a signed sum of Manin symbols.
    pub fn symbol(&self, r: &P1) -> Result<i64> {
        let P1::Finite(r) = r else { return Ok(0) };
        let q = self.q();
        let (mut a, mut b) = (r.num().clone(), r.den().clone());
        let (mut q_prev, mut q_cur) = (Poly::zero(q), Poly::one(q));
        // The integer part only translates by an element of Γ₀(m).
        let (_, rem) = a.divmod(&b)?;
        let mut total = self.manin_symbol(&Poly::zero(q), &Poly::one(q))?;
        a = b;
        b = rem;
        while !b.is_zero() {
            let (ci, rem) = a.divmod(&b)?;
            let q_next = &(&ci * &q_cur) + &q_prev;
            q_prev = std::mem::replace(&mut q_cur, q_next);
            total -= self.manin_symbol(&q_cur, &q_prev)?;
            a = b;
            b = rem;
        }
        Ok(total)
    }

    /// `[x, y] = [x, ∞] - [y, ∞]`.
    pub fn symbol_between(&self, x: &P1, y: &P1) -> Result<i64> {
        Ok(self.symbol(x)? - self.symbol(y)?)
    }

    /// `μ(U(g e₀)) = -[g⁻¹x, g⁻¹y]` for the measure attached to the axis from `x` to `y`.
    pub fn mu_edge(&self, g: &Mat2, x: &P1, y: &P1) -> Result<i64> {
        if x == y {
            return Ok(0);
        }
        let gi = g.inverse()?;
        Ok(-self.symbol_between(&gi.act(x), &gi.act(y))?)
    }

    /// The translation-dilation `(π^k, a; 0, 1)` carrying `O_p` onto `a + π^k O_p`.
    pub fn ball_matrix(&self, a: &RatFunc, k: i64) -> Mat2 {
        let q = self.q();
        let pk = RatFunc::from_poly(Poly::one(q)).mul_pow(&self.pi, k);
        Mat2::new(pk, a.clone(), RatFunc::zero(q), RatFunc::one(q))
    }

    /// `μ_c{x→y}(a + π^k O_p)` for a center `a ∈ A[1/π]`.
    pub fn mu_ball(&self, x: &P1, y: &P1, a: &RatFunc, k: i64) -> Result<i64> {
        self.check_center(a)?;
        self.mu_edge(&self.ball_matrix(a, k), x, y)
    }

    /// `μ_c{x→y}(P^1 ∖ O_p)`, through the Atkin–Lehner matrix which reverses `e₀` at `p`.
    pub fn mu_outside(&self, x: &P1, y: &P1) -> Result<i64> {
        let w = atkin_lehner_matrix(self.graph.level(), &self.pi)?;
        self.mu_edge(&w, x, y)
    }

    /// `μ_Teit(a + π^k O_p) = [a/π^k, ∞]`.
    pub fn teit(&self, a: &RatFunc, k: i64) -> Result<i64> {
        self.check_center(a)?;
        self.symbol(&P1::Finite(a.mul_pow(&self.pi, -k)))
    }

    /// `W_ψ = μ_c{∞→0}(U(e₀)) = μ(O_p)`.
    pub fn winding_element(&self) -> Result<i64> {
        let q = self.q();
        self.mu_ball(&P1::Infinity, &P1::zero(q), &RatFunc::zero(q), 0)
    }

    fn check_center(&self, a: &RatFunc) -> Result<()> {
        let mut d = a.den().clone();
        while !d.is_one() {
            d = d.div_exact(&self.pi).map_err(|_| {
                Error::InvalidInput(format!("center {a} is not in A[1/{}]", self.pi))
            })?;
        }
        Ok(())
    }
}

/// A ball `a + π^k O_p` with its measure, for tables.
#[derive(Clone, Debug, Serialize)]
pub struct BallValue {
    pub center: String,
    pub radius: i64,
    pub mass: i64,
}

/// An integer-valued measure on compact opens of `P^1(F_p)`, given on balls.
pub trait BoundaryMeasure {
    fn ball(&self, a: &RatFunc, k: i64) -> Result<i64>;
}

/// `μ_Teit` on `O_p`.
pub struct Teitelbaum<'a>(pub &'a SymbolContext);

impl BoundaryMeasure for Teitelbaum<'_> {
    fn ball(&self, a: &RatFunc, k: i64) -> Result<i64> {
        self.0.teit(a, k)
    }
}

/// `μ_c{x→y}`.
pub struct AxisMeasure<'a> {
    pub ctx: &'a SymbolContext,
    pub from: P1,
    pub to: P1,
}

impl BoundaryMeasure for AxisMeasure<'_> {
    fn ball(&self, a: &RatFunc, k: i64) -> Result<i64> {
        self.ctx.mu_ball(&self.from, &self.to, a, k)
    }
}

/// Balls `a + π^k O_p` with `deg a < k deg π` tabulated for `k <= depth`.
pub fn ball_table(mu: &dyn BoundaryMeasure, pi: &Poly, depth: u32) -> Result<Vec<BallValue>> {
    let q = pi.modulus();
    let mut out = Vec::new();
    for k in 0..=depth {
        for a in Poly::all_below_degree(q, k as usize * pi.deg().unwrap()) {
            let mass = mu.ball(&RatFunc::from_poly(a.clone()), k as i64)?;
            out.push(BallValue {
                center: a.to_string(),
                radius: k as i64,
                mass,
            });
        }
    }
    Ok(out)
}
