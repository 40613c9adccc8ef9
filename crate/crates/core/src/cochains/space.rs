use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::linalg::nullspace;
use crate::algebra::Mat2;
use crate::error::{Error, Result};
use crate::quotient::{EdgeOrbit, Projection, QuotientGraph};

/// An integer-valued alternating cochain on the edge orbits of a quotient graph,
/// stored on the representative orientation of each orbit up to the graph depth.
#[derive(Clone, Debug)]
pub struct HarmonicCochain {
    graph: Arc<QuotientGraph>,
    values: Vec<i64>,
}

impl PartialEq for HarmonicCochain {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &o.graph) && self.values == o.values
    }
}

impl Eq for HarmonicCochain {}

impl HarmonicCochain {
    pub fn from_values(graph: Arc<QuotientGraph>, values: Vec<i64>) -> Result<Self> {
        if values.len() != graph.num_edge_orbits() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} edge orbits",
                values.len(),
                graph.num_edge_orbits()
            )));
        }
        Ok(Self { graph, values })
    }

    pub fn zero(graph: Arc<QuotientGraph>) -> Self {
        let n = graph.num_edge_orbits();
        Self {
            graph,
            values: vec![0; n],
        }
    }

    pub fn graph(&self) -> &Arc<QuotientGraph> {
        &self.graph
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value on an edge orbit in its stored orientation; zero past the depth.
    pub fn value(&self, e: EdgeOrbit) -> i64 {
        if e.layer >= self.graph.depth() {
            return 0;
        }
        self.values[self.graph.edge_index(e)]
    }

    pub fn at(&self, p: Projection) -> i64 {
        p.sign * self.value(p.edge)
    }

    /// Value on the tree edge `g·e₀` at infinity.
    pub fn eval(&self, g: &Mat2) -> Result<i64> {
        Ok(self.at(self.graph.project_matrix(g)?))
    }

    pub fn add(&self, o: &Self) -> Self {
        let values = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            graph: self.graph.clone(),
            values,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let values = self.values.iter().map(|a| a * k).collect();
        Self {
            graph: self.graph.clone(),
            values,
        }
    }

    pub fn content(&self) -> i64 {
        self.values
            .iter()
            .fold(0i64, |g, &v| num_integer::gcd(g, v))
    }

    /// `Σ stab(V)/stab(e)·φ(e)` over distinct incident orbits, toward each vertex orbit.
    pub fn harmonicity_residuals(&self) -> Vec<i64> {
        let g = &self.graph;
        let mut out = Vec::new();
        for k in 0..=g.depth() {
            let layer = g.vertex_layer(k);
            for (o, &x) in layer.reps.iter().enumerate() {
                let sv = layer.stab[o];
                let mut seen = BTreeMap::new();
                for (l, y, sign) in g.star(k, x) {
                    seen.entry(g.edge_orbit_of(l, y)).or_insert(sign);
                }
                let r = seen
                    .into_iter()
                    .map(|(e, sign)| {
                        let w = if e.layer < g.depth() {
                            sv / g.stabilizer_order(e)
                        } else {
                            0
                        };
                        w as i64 * sign * self.value(e)
                    })
                    .sum();
                out.push(r);
            }
        }
        out
    }

    /// Values keyed by edge orbit, for export.
    pub fn table(&self) -> Vec<CochainEntry> {
        self.graph
            .edge_orbits()
            .map(|e| CochainEntry {
                layer: e.layer,
                orbit: e.orbit,
                label: self
                    .graph
                    .table()
                    .point(self.graph.edge_layer(e.layer).reps[e.orbit])
                    .to_string(),
                stabilizer: self.graph.stabilizer_order(e),
                value: self.value(e),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CochainEntry {
    pub layer: usize,
    pub orbit: usize,
    pub label: String,
    pub stabilizer: u64,
    pub value: i64,
}

/// The cuspidal harmonic cochains of a quotient graph with a primitive integral basis.
#[derive(Clone, Debug)]
pub struct CuspidalSpace {
    graph: Arc<QuotientGraph>,
    basis: Vec<HarmonicCochain>,
    /// Each basis vector is the only one nonzero on its free column.
    free: Vec<usize>,
}

/// Rows of the harmonicity system: one per vertex orbit, summing the star of a lift.
fn harmonic_system(g: &QuotientGraph) -> Vec<Vec<BigInt>> {
    let n = g.num_edge_orbits();
    let mut rows = Vec::new();
    for k in 0..=g.depth() {
        for &x in &g.vertex_layer(k).reps {
            let mut row = vec![BigInt::zero(); n];
            for (l, y, sign) in g.star(k, x) {
                if l < g.depth() {
                    row[g.edge_index(g.edge_orbit_of(l, y))] += sign;
                }
            }
            rows.push(row);
        }
    }
    rows
}

pub fn cuspidal_basis(graph: Arc<QuotientGraph>) -> Result<CuspidalSpace> {
    let n = graph.num_edge_orbits();
    let (kernel, free) = nullspace(&harmonic_system(&graph), n);
    let mut basis = Vec::with_capacity(kernel.len());
    for v in kernel {
        let values = v
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::InvalidInput("basis entry overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = HarmonicCochain {
            graph: graph.clone(),
            values,
        };
        // Vanishing at φ_K = 0 is imposed; the two outermost stored layers must follow.
        for layer in graph.depth().saturating_sub(2)..graph.depth() {
            if (0..graph.edge_layer(layer).len())
                .any(|o| phi.value(EdgeOrbit { layer, orbit: o }) != 0)
            {
                return Err(Error::SupportLeak(layer as u32));
            }
        }
        basis.push(phi);
    }
    Ok(CuspidalSpace { graph, basis, free })
}

impl CuspidalSpace {
    pub fn graph(&self) -> &Arc<QuotientGraph> {
        &self.graph
    }

    pub fn basis(&self) -> &[HarmonicCochain] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a cochain in the basis, or an error if it lies outside the span.
    pub fn coordinates(&self, values: &[i64]) -> Result<Vec<BigRational>> {
        let coords: Vec<BigRational> = self
            .basis
            .iter()
            .zip(&self.free)
            .map(|(b, &f)| BigRational::new(values[f].into(), b.values[f].into()))
            .collect();
        for (i, &v) in values.iter().enumerate() {
            let s = self
                .basis
                .iter()
                .zip(&coords)
                .fold(BigRational::zero(), |acc, (b, c)| {
                    acc + c * BigRational::from_integer(b.values[i].into())
                });
            if s != BigRational::from_integer(v.into()) {
                return Err(Error::InvalidInput(
                    "cochain is not in the cuspidal span".into(),
                ));
            }
        }
        Ok(coords)
    }

    /// `Σ c_i b_i` for integer coefficients.
    pub fn combine(&self, coeffs: &[i64]) -> HarmonicCochain {
        let mut out = HarmonicCochain::zero(self.graph.clone());
        for (b, &c) in self.basis.iter().zip(coeffs) {
            out = out.add(&b.scale(c));
        }
        out
    }
}
