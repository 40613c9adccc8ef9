use std::fmt::Write as _;

use serde::Serialize;

use super::p1::P1Table;
use crate::algebra::Poly;
use crate::error::{Error, Result};

/// Which finite group acts on `P^1(A/m)` from the right.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LayerGroup {
    /// `GL_2(F_q)`, the stabilizer of the vertex `v₀`.
    Full,
    /// Constant upper-triangular matrices, the stabilizer of `e₀`.
    Borel,
    /// `(a b; 0 d)` with `a, d ∈ F_q^×` and `deg b <= k`.
    Upper(u32),
}

/// Orbits of the layer group on `P^1(A/m)`.
#[derive(Clone, Debug, Serialize)]
pub struct Layer {
    /// point index → orbit id
    pub orbit_of: Vec<usize>,
    /// orbit id → representative point (the smallest index in the orbit)
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    /// stabilizer orders modulo scalars
    pub stab: Vec<u64>,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn generators(q: u32, g: LayerGroup) -> Vec<[Poly; 4]> {
    let c = |v: u32| Poly::constant(q, v);
    let primitive = (1..q)
        .find(|&a| (1..q - 1).all(|e| crate::algebra::pow_mod(a, e as u64, q) != 1))
        .unwrap_or(1);
    let mut gens = vec![
        [c(primitive), c(0), c(0), c(1)],
        [c(1), c(0), c(0), c(primitive)],
    ];
    let top = match g {
        LayerGroup::Full | LayerGroup::Borel => 0,
        LayerGroup::Upper(k) => k as usize,
    };
    for j in 0..=top {
        gens.push([c(1), Poly::monomial(q, 1, j), c(0), c(1)]);
    }
    if g == LayerGroup::Full {
        gens.push([c(0), c(1), c(1), c(0)]);
    }
    gens
}

/// Count `h` in the layer group with `x·h = x`, divided by the scalars `q - 1`.
fn stabilizer_of(table: &P1Table, x: usize, g: LayerGroup) -> u64 {
    let q = table.level().modulus();
    let c = |v: u32| Poly::constant(q, v);
    let mut count = 0u64;
    match g {
        LayerGroup::Full => {
            for a in 0..q {
                for b in 0..q {
                    for e in 0..q {
                        for f in 0..q {
                            let det = (a as u64 * f as u64 + (q - b) as u64 * e as u64) % q as u64;
                            if det != 0 && table.act(x, [&c(a), &c(b), &c(e), &c(f)]) == x {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        LayerGroup::Borel | LayerGroup::Upper(_) => {
            let k = match g {
                LayerGroup::Upper(k) => k as usize,
                _ => 0,
            };
            let dm = table.level().deg().unwrap();
            // b only matters modulo m; residues of degree <= k occur uniformly.
            let (span, mult) = if k + 1 >= dm {
                (dm, (q as u64).pow((k + 1 - dm) as u32))
            } else {
                (k + 1, 1)
            };
            let zero = c(0);
            for b in Poly::all_below_degree(q, span) {
                for a in 1..q {
                    for d in 1..q {
                        if table.act(x, [&c(a), &b, &zero, &c(d)]) == x {
                            count += mult;
                        }
                    }
                }
            }
        }
    }
    count / (q as u64 - 1)
}

pub fn group_order(q: u32, g: LayerGroup) -> u64 {
    let q = q as u64;
    match g {
        LayerGroup::Full => (q * q - 1) * (q * q - q),
        LayerGroup::Borel => (q - 1) * (q - 1) * q,
        LayerGroup::Upper(k) => (q - 1) * (q - 1) * q.pow(k + 1),
    }
}

pub fn orbits(table: &P1Table, g: LayerGroup) -> Layer {
    let q = table.level().modulus();
    let n = table.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for h in generators(q, g) {
        let hr = [&h[0], &h[1], &h[2], &h[3]];
        for i in 0..n {
            let j = table.act(i, hr);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut orbit_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if orbit_of[r] == usize::MAX {
            orbit_of[r] = reps.len();
            reps.push(r);
            sizes.push(0);
        }
        orbit_of[i] = orbit_of[r];
        sizes[orbit_of[i]] += 1;
    }
    let stab = reps.iter().map(|&r| stabilizer_of(table, r, g)).collect();
    Layer {
        orbit_of,
        reps,
        sizes,
        stab,
    }
}

/// The layered quotient `Γ₀(m)\T_∞`, truncated at vertex layer `depth`.
///
/// Vertex layer `k` is the set of orbits of `diag(T^k, 1)·v₀`; edge layer `k` holds
/// the orbits of `e_{-k} = diag(T^k, 1)·e₀`, joining vertex layer `k + 1` (origin) to
/// vertex layer `k` (terminus).
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub(crate) table: P1Table,
    pub(crate) depth: usize,
    pub(crate) core_depth: usize,
    pub(crate) vertices: Vec<Layer>,
    pub(crate) edges: Vec<Layer>,
    pub(crate) edge_offsets: Vec<usize>,
}

/// Identifies one edge orbit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct EdgeOrbit {
    pub layer: usize,
    pub orbit: usize,
}

pub(crate) fn vertex_group(k: usize) -> LayerGroup {
    if k == 0 {
        LayerGroup::Full
    } else {
        LayerGroup::Upper(k as u32)
    }
}

pub(crate) fn edge_group(k: usize) -> LayerGroup {
    if k == 0 {
        LayerGroup::Borel
    } else {
        LayerGroup::Upper(k as u32)
    }
}

/// Build the quotient to vertex layer `depth >= deg m + 2`, asserting stabilization.
pub fn build_quotient(m: &Poly, depth: usize) -> Result<QuotientGraph> {
    let table = P1Table::new(m)?;
    let dm = table.level().deg().unwrap();
    if depth < dm + 2 {
        return Err(Error::InvalidInput(format!(
            "depth {depth} below deg m + 2 = {}",
            dm + 2
        )));
    }
    let vertices: Vec<Layer> = (0..=depth)
        .map(|k| orbits(&table, vertex_group(k)))
        .collect();
    let edges: Vec<Layer> = (0..depth).map(|k| orbits(&table, edge_group(k))).collect();
    let mut edge_offsets = vec![0];
    for l in &edges {
        edge_offsets.push(edge_offsets.last().unwrap() + l.len());
    }
    let g = QuotientGraph {
        table,
        depth,
        core_depth: dm,
        vertices,
        edges,
        edge_offsets,
    };
    g.check_stabilized()?;
    Ok(g)
}

impl QuotientGraph {
    pub fn q(&self) -> u32 {
        self.table.level().modulus()
    }

    pub fn level(&self) -> &Poly {
        self.table.level()
    }

    pub fn table(&self) -> &P1Table {
        &self.table
    }

    /// Number of vertex layers minus one.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn core_depth(&self) -> usize {
        self.core_depth
    }

    pub fn vertex_layer(&self, k: usize) -> &Layer {
        &self.vertices[k]
    }

    pub fn edge_layer(&self, k: usize) -> &Layer {
        &self.edges[k]
    }

    pub fn num_edge_orbits(&self) -> usize {
        *self.edge_offsets.last().unwrap()
    }

    pub fn num_vertex_orbits(&self) -> usize {
        self.vertices.iter().map(|l| l.len()).sum()
    }

    /// Flat index of an edge orbit, for vectors of cochain values.
    pub fn edge_index(&self, e: EdgeOrbit) -> usize {
        self.edge_offsets[e.layer] + e.orbit
    }

    pub fn edge_at(&self, idx: usize) -> EdgeOrbit {
        let layer = self.edge_offsets.partition_point(|&o| o <= idx) - 1;
        EdgeOrbit {
            layer,
            orbit: idx - self.edge_offsets[layer],
        }
    }

    pub fn edge_orbits(&self) -> impl Iterator<Item = EdgeOrbit> + '_ {
        (0..self.num_edge_orbits()).map(|i| self.edge_at(i))
    }

    /// Orbit id of the point `x` in edge layer `k`; layers past the depth use the stable partition.
    pub fn edge_orbit_of(&self, k: usize, x: usize) -> EdgeOrbit {
        let layer = k.min(self.depth - 1);
        EdgeOrbit {
            layer: k,
            orbit: self.edges[layer].orbit_of[x],
        }
    }

    /// Stabilizer order in `Γ₀(m)` modulo scalars of an edge orbit.
    pub fn stabilizer_order(&self, e: EdgeOrbit) -> u64 {
        self.edges[e.layer].stab[e.orbit]
    }

    pub fn vertex_stabilizer_order(&self, k: usize, orbit: usize) -> u64 {
        self.vertices[k].stab[orbit]
    }

    /// Cusps: the orbits of the stable layer.
    pub fn cusps(&self) -> usize {
        self.vertices[self.depth].len()
    }

    fn check_stabilized(&self) -> Result<()> {
        let q = self.q() as u64;
        let stable = |a: &Layer, b: &Layer| {
            a.orbit_of == b.orbit_of && a.stab.iter().zip(&b.stab).all(|(x, y)| x * q == *y)
        };
        for k in self.core_depth..self.depth {
            let edges_ok = k + 1 >= self.depth || stable(&self.edges[k], &self.edges[k + 1]);
            if !stable(&self.vertices[k], &self.vertices[k + 1]) || !edges_ok {
                return Err(Error::NotStabilized {
                    depth: self.depth as u32,
                    reason: format!("layers {k} and {} differ", k + 1),
                });
            }
        }
        Ok(())
    }

    /// The `q + 1` edges pointing into the vertex `(k, x)`, as (edge layer, point, sign).
    /// Sign `+1`: the edge `e_{-k}` itself; `-1`: reversed edges from layer `k - 1`.
    pub fn star(&self, k: usize, x: usize) -> Vec<(usize, usize, i64)> {
        let q = self.q();
        let c = |v: u32| Poly::constant(q, v);
        let mut out = Vec::with_capacity(q as usize + 1);
        if k == 0 {
            for t in 0..q {
                out.push((0, self.table.act(x, [&c(1), &c(0), &c(t), &c(1)]), 1));
            }
            out.push((0, self.table.act(x, [&c(0), &c(1), &c(1), &c(0)]), 1));
        } else {
            out.push((k, x, 1));
            for t in 0..q {
                let b = Poly::monomial(q, t, k);
                out.push((k - 1, self.table.act(x, [&c(1), &b, &c(0), &c(1)]), -1));
            }
        }
        out
    }

    /// `Σ stab(V)/stab(e)` over the distinct edge orbits incident to each vertex orbit.
    pub fn star_sums(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for k in 0..self.depth {
            for (o, &x) in self.vertices[k].reps.iter().enumerate() {
                let sv = self.vertices[k].stab[o];
                let mut seen = std::collections::BTreeSet::new();
                let mut sum = 0u64;
                for (layer, y, _) in self.star(k, x) {
                    let e = self.edge_orbit_of(layer, y);
                    if seen.insert(e) {
                        let se = self.stabilizer_order(e);
                        sum += sv / se;
                        debug_assert_eq!(sv % se, 0);
                    }
                }
                out.push((k, o, sum));
            }
        }
        out
    }

    /// Vertex orbit ids of the two ends of an edge orbit: (origin at layer k+1, terminus at layer k).
    pub fn endpoints(&self, e: EdgeOrbit) -> ((usize, usize), (usize, usize)) {
        let x = self.edges[e.layer].reps[e.orbit];
        (
            (e.layer + 1, self.vertices[e.layer + 1].orbit_of[x]),
            (e.layer, self.vertices[e.layer].orbit_of[x]),
        )
    }

    /// `E - V + 1` of the truncated graph.
    pub fn cycle_rank(&self) -> i64 {
        self.num_edge_orbits() as i64 - self.num_vertex_orbits() as i64 + 1
    }

    /// Graphviz rendering; layers past the core collapse into one node per cusp.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let k0 = self.core_depth;
        let _ = writeln!(s, "graph quotient {{");
        let _ = writeln!(
            s,
            "  label=\"Gamma0({}) over F_{}; star sum {} at every vertex\";",
            self.level(),
            self.q(),
            self.q() + 1
        );
        for k in 0..=k0 {
            for o in 0..self.vertices[k].len() {
                let _ = writeln!(
                    s,
                    "  \"{k}:{o}\" [label=\"{k}:{o}\\nstab {}\"];",
                    self.vertices[k].stab[o]
                );
            }
        }
        for (i, &x) in self.vertices[k0].reps.iter().enumerate() {
            let _ = writeln!(
                s,
                "  \"cusp:{i}\" [shape=box, label=\"cusp {i}\\nray from {k0}:{}\"];",
                self.vertices[k0].orbit_of[x]
            );
        }
        for k in 0..k0 {
            for o in 0..self.edges[k].len() {
                let e = EdgeOrbit { layer: k, orbit: o };
                let ((k1, a), (k2, b)) = self.endpoints(e);
                let _ = writeln!(
                    s,
                    "  \"{k1}:{a}\" -- \"{k2}:{b}\" [label=\"{}\"];",
                    self.stabilizer_order(e)
                );
            }
        }
        for (i, &x) in self.vertices[k0].reps.iter().enumerate() {
            let _ = writeln!(
                s,
                "  \"cusp:{i}\" -- \"{k0}:{}\" [style=dashed];",
                self.vertices[k0].orbit_of[x]
            );
        }
        s.push_str("}\n");
        s
    }
}
