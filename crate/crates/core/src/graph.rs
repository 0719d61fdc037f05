//! Principal and dual principal graphs from double cosets of `G = HKN`.
//!
//! Odd vertices are the double cosets `A n B` (`A = H`, `B = K` for the
//! principal graph, swapped for the dual). For every odd vertex and every
//! `b ∈ B` the double coset `D = A(nb)A` with `p = |D|/|A|` single cosets
//! contributes one edge to each of the `|A|/p` even vertices (dimension `p`)
//! of its cluster.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::phase::PhaseArray;
use crate::quotient::{GElem, Normalization, QuotientGroup};
use crate::word::{Twist, TwistedPerm};

/// A group in which double cosets can be enumerated.
pub trait CosetModel {
    type El: Clone + Ord + Hash;

    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn label(&self, a: &Self::El) -> String;
}

impl CosetModel for QuotientGroup {
    type El = GElem;

    fn mul(&self, a: &GElem, b: &GElem) -> GElem {
        QuotientGroup::mul(self, *a, *b)
    }

    fn label(&self, a: &GElem) -> String {
        self.elem_label(*a)
    }
}

/// `G` realized directly by normalized coordinate automorphisms; works for
/// infinite `N`.
#[derive(Clone, Debug)]
pub struct ConcreteQuotient {
    twist: Twist,
}

impl ConcreteQuotient {
    pub fn new(twist: Twist) -> Self {
        ConcreteQuotient { twist }
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn from_h(&self, h: usize) -> TwistedPerm {
        self.twist.h_image(h).standardized()
    }

    pub fn from_k(&self, k: usize) -> TwistedPerm {
        self.twist.k_image(k).standardized()
    }

    pub fn from_n(&self, array: &PhaseArray) -> TwistedPerm {
        TwistedPerm {
            shift: (0, 0),
            array: array.standardized(),
        }
    }

    /// Elements of `N` within word length `radius` of the identity in the
    /// standardized commutator generators and their inverses, with their
    /// distances.
    pub fn n_ball(&self, radius: usize) -> Vec<(PhaseArray, usize)> {
        let mut gens: Vec<PhaseArray> = Vec::new();
        for g in crate::word::commutator_generators(&self.twist) {
            let s = g.array.standardized();
            if !s.is_identity() {
                gens.push(s.conj());
                gens.push(s);
            }
        }
        let one = PhaseArray::ones(self.twist.h().order(), self.twist.k().order());
        let mut dist: HashMap<PhaseArray, usize> = HashMap::from([(one.clone(), 0)]);
        let mut order = vec![one.clone()];
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == radius {
                continue;
            }
            for g in &gens {
                let y = (&x * g).standardized();
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        order.into_iter().map(|a| {
            let d = dist[&a];
            (a, d)
        }).collect()
    }
}

impl CosetModel for ConcreteQuotient {
    type El = TwistedPerm;

    fn mul(&self, a: &TwistedPerm, b: &TwistedPerm) -> TwistedPerm {
        Normalization::Standard.apply_perm(&self.twist.compose(a, b))
    }

    fn label(&self, a: &TwistedPerm) -> String {
        let entries: Vec<String> = a.array.entries().iter().map(|p| p.to_string()).collect();
        format!(
            "h{}k{} [{}]",
            self.twist.h().elem_label(a.shift.0),
            self.twist.k().elem_label(a.shift.1),
            entries.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddVertex {
    pub label: String,
    /// Set on truncated graphs for vertices whose neighborhood may be cut.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub label: String,
    /// Number of elements in the double coset.
    pub coset_size: usize,
    pub dim: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenVertex {
    pub cluster: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub odd: usize,
    pub even: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    pub odd: Vec<OddVertex>,
    pub even: Vec<EvenVertex>,
    pub clusters: Vec<Cluster>,
    pub edges: Vec<Edge>,
    /// Index of the starred even vertex (first vertex of the trivial cluster).
    pub distinguished: usize,
    /// `|A|·|B|`: the weighted degree of every complete odd vertex.
    pub degree: usize,
    pub truncated: bool,
    pub annotation: Option<String>,
}

fn double_coset<M: CosetModel>(model: &M, left: &[M::El], g: &M::El, right: &[M::El]) -> BTreeSet<M::El> {
    let mut out = BTreeSet::new();
    for a in left {
        let ag = model.mul(a, g);
        for b in right {
            out.insert(model.mul(&ag, b));
        }
    }
    out
}

/// Generic construction. `odd_reps` lists representatives of odd vertices
/// with a boundary flag; duplicates (same double coset) are merged.
pub fn build_graph<M: CosetModel>(
    model: &M,
    a_side: &[M::El],
    b_side: &[M::El],
    odd_reps: &[(M::El, bool)],
    identity: &M::El,
) -> Result<BipartiteGraph> {
    let a_order = a_side.len();
    // odd vertices keyed by the least element of A n B
    let mut odd: BTreeMap<M::El, (M::El, bool)> = BTreeMap::new();
    for (n, boundary) in odd_reps {
        let key = double_coset(model, a_side, n, b_side).into_iter().next().unwrap();
        let entry = odd.entry(key).or_insert_with(|| (n.clone(), *boundary));
        entry.1 |= *boundary;
    }
    // clusters keyed by the least element of A g A
    let mut clusters: BTreeMap<M::El, usize> = BTreeMap::new();
    let mut incidence: Vec<BTreeMap<M::El, usize>> = Vec::new();
    for (n, _) in odd.values() {
        let mut counts: BTreeMap<M::El, usize> = BTreeMap::new();
        for b in b_side {
            let d = double_coset(model, a_side, &model.mul(n, b), a_side);
            let size = d.len();
            let key = d.into_iter().next().unwrap();
            *counts.entry(key.clone()).or_default() += 1;
            if size % a_order != 0 || a_order % (size / a_order) != 0 {
                return Err(Error::NonIntegerCluster {
                    cosets: size / a_order,
                    order: a_order,
                });
            }
            clusters.insert(key, size);
        }
        incidence.push(counts);
    }
    let trivial = double_coset(model, a_side, identity, a_side).into_iter().next().unwrap();

    let mut cluster_list = Vec::new();
    let mut even = Vec::new();
    let mut cluster_index: HashMap<M::El, usize> = HashMap::new();
    let mut distinguished = None;
    for (key, size) in &clusters {
        let dim = size / a_order;
        let count = a_order / dim;
        let first = even.len();
        for _ in 0..count {
            even.push(EvenVertex {
                cluster: cluster_list.len(),
                dim,
            });
        }
        if *key == trivial {
            distinguished = Some(first);
        }
        cluster_index.insert(key.clone(), cluster_list.len());
        cluster_list.push(Cluster {
            label: model.label(key),
            coset_size: *size,
            dim,
            vertices: (first..first + count).collect(),
        });
    }
    let mut edges = Vec::new();
    for (o, counts) in incidence.iter().enumerate() {
        for (key, &m) in counts {
            for &v in &cluster_list[cluster_index[key]].vertices {
                edges.push(Edge {
                    odd: o,
                    even: v,
                    multiplicity: m,
                });
            }
        }
    }
    edges.sort_by_key(|e| (e.odd, e.even));
    let graph = BipartiteGraph {
        odd: odd
            .iter()
            .map(|(key, (_, boundary))| OddVertex {
                label: model.label(key),
                boundary: *boundary,
            })
            .collect(),
        even,
        clusters: cluster_list,
        edges,
        distinguished: distinguished
            .ok_or_else(|| Error::Internal("trivial double coset not reached".into()))?,
        degree: a_order * b_side.len(),
        truncated: odd_reps.iter().any(|(_, b)| *b),
        annotation: None,
    };
    graph.check_degree_sums()?;
    Ok(graph)
}

fn side_elements(g: &QuotientGroup, dual: bool) -> (Vec<GElem>, Vec<GElem>) {
    let hs: Vec<GElem> = (0..g.h_order()).map(|h| g.from_h(h)).collect();
    let ks: Vec<GElem> = (0..g.k_order()).map(|k| g.from_k(k)).collect();
    if dual {
        (ks, hs)
    } else {
        (hs, ks)
    }
}

fn finite_graph(g: &QuotientGroup, dual: bool) -> Result<BipartiteGraph> {
    if !g.is_locally_free() {
        return Err(Error::NotLocallyFree);
    }
    let (a, b) = side_elements(g, dual);
    let reps: Vec<(GElem, bool)> = (0..g.n_order()).map(|n| (g.from_n(n), false)).collect();
    let graph = build_graph(g, &a, &b, &reps, &0)?;
    let total: usize = graph.clusters.iter().map(|c| c.coset_size).sum();
    if total != g.order() {
        return Err(Error::Internal(format!(
            "double cosets cover {total} of {} elements",
            g.order()
        )));
    }
    Ok(graph)
}

pub fn principal_graph(g: &QuotientGroup) -> Result<BipartiteGraph> {
    finite_graph(g, false)
}

pub fn dual_graph(g: &QuotientGroup) -> Result<BipartiteGraph> {
    finite_graph(g, true)
}

/// Principal (or dual) graph restricted to odd vertices `HnK` with `n` in
/// the word-length ball of the given radius; vertices on the sphere are
/// marked as boundary.
pub fn truncated_graph(twist: &Twist, radius: usize, dual: bool) -> Result<BipartiteGraph> {
    let model = ConcreteQuotient::new(twist.clone());
    let hs: Vec<TwistedPerm> = (0..twist.h().order()).map(|h| model.from_h(h)).collect();
    let ks: Vec<TwistedPerm> = (0..twist.k().order()).map(|k| model.from_k(k)).collect();
    let (a, b) = if dual { (ks, hs) } else { (hs, ks) };
    let reps: Vec<(TwistedPerm, bool)> = model
        .n_ball(radius)
        .into_iter()
        .map(|(arr, d)| (model.from_n(&arr), d == radius))
        .collect();
    let identity = model.from_n(&PhaseArray::ones(twist.h().order(), twist.k().order()));
    let mut graph = build_graph(&model, &a, &b, &reps, &identity)?;
    graph.truncated = true;
    Ok(graph)
}

impl BipartiteGraph {
    pub fn odd_count(&self) -> usize {
        self.odd.len()
    }

    pub fn even_count(&self) -> usize {
        self.even.len()
    }

    pub fn with_annotation(mut self, annotation: impl Into<String>) -> Self {
        self.annotation = Some(annotation.into());
        self
    }

    /// `(even, multiplicity)` pairs adjacent to an odd vertex.
    pub fn odd_neighbors(&self, o: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| e.odd == o)
            .map(|e| (e.even, e.multiplicity))
            .collect()
    }

    pub fn even_neighbors(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| e.even == v)
            .map(|e| (e.odd, e.multiplicity))
            .collect()
    }

    /// `Σ multiplicity·dim` over the even neighbors of `o`.
    pub fn weighted_degree(&self, o: usize) -> usize {
        self.odd_neighbors(o)
            .iter()
            .map(|&(v, m)| m * self.even[v].dim)
            .sum()
    }

    fn check_degree_sums(&self) -> Result<()> {
        for o in 0..self.odd.len() {
            let d = self.weighted_degree(o);
            if d != self.degree {
                return Err(Error::Internal(format!(
                    "odd vertex {o} has weighted degree {d}, expected {}",
                    self.degree
                )));
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let total = self.odd.len() + self.even.len();
        if total == 0 {
            return true;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        let off = self.odd.len();
        for e in &self.edges {
            adj[e.odd].push(off + e.even);
            adj[off + e.even].push(e.odd);
        }
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !std::mem::replace(&mut seen[y], true) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Weighted closed walks of length `2·level + 2` at the distinguished
    /// vertex: `((A·Aᵀ)^{level+1})[*, *]` with `A` the even×odd
    /// multiplicity matrix.
    pub fn predicted_commutant_dim(&self, level: usize) -> u64 {
        let n_even = self.even.len();
        let mut vec = vec![0u64; n_even];
        vec[self.distinguished] = 1;
        for _ in 0..=level {
            let mut odd_vals = vec![0u64; self.odd.len()];
            for e in &self.edges {
                odd_vals[e.odd] += e.multiplicity as u64 * vec[e.even];
            }
            let mut next = vec![0u64; n_even];
            for e in &self.edges {
                next[e.even] += e.multiplicity as u64 * odd_vals[e.odd];
            }
            vec = next;
        }
        vec[self.distinguished]
    }

    /// Deterministic DOT text; odd vertices filled, the distinguished vertex
    /// starred, boundary vertices dashed, one edge line per unit of
    /// multiplicity.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        for (i, v) in self.odd.iter().enumerate() {
            let style = if v.boundary { "filled,dashed" } else { "filled" };
            let _ = writeln!(
                out,
                "  o{i:04} [label=\"{}\", shape=circle, style=\"{style}\"];",
                v.label
            );
        }
        for (i, v) in self.even.iter().enumerate() {
            let star = if i == self.distinguished { ", xlabel=\"*\"" } else { "" };
            let _ = writeln!(
                out,
                "  e{i:04} [label=\"{}\", shape=circle{star}];",
                v.dim
            );
        }
        for e in &self.edges {
            for _ in 0..e.multiplicity {
                let _ = writeln!(out, "  o{:04} -> e{:04} [dir=none];", e.odd, e.even);
            }
        }
        out.push_str("}\n");
        out
    }

    /// Label-independent hash by color refinement, with even dimensions,
    /// boundary flags and the distinguished vertex as initial colors.
    pub fn canonical_hash(&self) -> String {
        let off = self.odd.len();
        let total = off + self.even.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
        for e in &self.edges {
            adj[e.odd].push((off + e.even, e.multiplicity));
            adj[off + e.even].push((e.odd, e.multiplicity));
        }
        let mut colors: Vec<String> = (0..total)
            .map(|v| {
                if v < off {
                    format!("o{}", self.odd[v].boundary)
                } else {
                    let i = v - off;
                    format!("e{}{}", self.even[i].dim, i == self.distinguished)
                }
            })
            .collect();
        let mut classes = colors.iter().collect::<HashSet<_>>().len();
        loop {
            let next: Vec<String> = (0..total)
                .map(|v| {
                    let mut nb: Vec<String> = adj[v]
                        .iter()
                        .map(|&(u, m)| format!("{}x{m}", colors[u]))
                        .collect();
                    nb.sort();
                    let digest = Sha256::digest(format!("{}|{}", colors[v], nb.join(",")));
                    hex(&digest[..12])
                })
                .collect();
            let next_classes = next.iter().collect::<HashSet<_>>().len();
            colors = next;
            if next_classes == classes {
                break;
            }
            classes = next_classes;
        }
        colors.sort();
        hex(&Sha256::digest(colors.join(";")))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}


#[cfg(test)]
mod example_tests {
    use super::*;
    use crate::group::FinGroup;
    use crate::quotient::DEFAULT_GROUP_BOUND;

    fn last_entry(h: &str, k: &str, last: &str) -> Twist {
        let h: FinGroup = h.parse().unwrap();
        let k: FinGroup = k.parse().unwrap();
        let n = h.order() * k.order();
        let mut lits = vec!["0"; n];
        lits[n - 1] = last;
        Twist::from_literals(h, k, &lits).unwrap()
    }

    #[test]
    fn hadamard_16_7_graph() {
        let t = last_entry("Z2xZ2", "Z2xZ2", "1/2");
        let q = QuotientGroup::build(&t, Normalization::Standard, DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(q.order(), 256);
        let pg = principal_graph(&q).unwrap();
        assert_eq!(pg.odd_count(), 16);
        assert_eq!(pg.even_count(), 76);
        let dim1 = pg.clusters.iter().filter(|c| c.dim == 1).count();
        assert_eq!(dim1, 16);
        assert_eq!(pg.predicted_commutant_dim(1), 7);
        assert!(pg.edges.iter().all(|e| e.multiplicity == 1));
        assert!(pg.is_connected());
    }

    #[test]
    fn symmetric_group_graph() {
        let t = last_entry("Z2", "S3", "1/4");
        let q = QuotientGroup::build(&t, Normalization::Standard, DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(q.order(), 192);
        let pg = principal_graph(&q).unwrap();
        assert_eq!(pg.odd_count(), 16);
        assert_eq!(pg.even_count(), 72);
        for o in 0..pg.odd_count() {
            assert_eq!(pg.odd_neighbors(o).len(), 7);
            assert_eq!(pg.weighted_degree(o), 12);
        }
        let dg = dual_graph(&q).unwrap();
        assert_eq!(dg.degree, 12);
    }
}
