//! The group `G = H ∗ K / Int = HKN` generated by the outer automorphisms of
//! the twisted tensor product, and its extension `G̃` by the inner subgroup
//! `S`.
//!
//! Elements are triples `(h, k, n)` standing for the product `h·k·n` with
//! `n` in the abelian normal subgroup. Multiplication is
//! `(h₁,k₁,n₁)(h₂,k₂,n₂) = (h₁h₂, k₁k₂, c(k₁,h₂)^{k₂}·n₁^{h₂k₂}·n₂)` with
//! `c(k,h) = k⁻¹h⁻¹kh` and `n^g = g⁻¹ng`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{invariant_factors, Elem};
use crate::phase::{Phase, PhaseArray};
use crate::snf::{subgroup_structure, AbelianStructure};
use crate::word::{commutator_generators, enumerate_subgroup, Side, Twist, TwistedPerm, Word};

/// Which automorphisms are factored out of the coordinate arrays.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Column functions only (trivial automorphisms): arrays represent `Ñ`.
    Column,
    /// Row and column functions (trivial and inner): arrays represent `N`.
    Standard,
}

impl Normalization {
    pub fn apply(self, a: &PhaseArray) -> PhaseArray {
        match self {
            Normalization::Column => a.column_normalized(),
            Normalization::Standard => a.standardized(),
        }
    }

    pub fn apply_perm(self, p: &TwistedPerm) -> TwistedPerm {
        TwistedPerm {
            shift: p.shift,
            array: self.apply(&p.array),
        }
    }
}

/// Element index into a [`QuotientGroup`].
pub type GElem = usize;

/// Default cap on the order of an assembled group.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// Largest normal-subgroup order for which a full multiplication table of
/// the subgroup is stored.
const N_TABLE_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
pub struct QuotientGroup {
    twist: Twist,
    mode: Normalization,
    structure: AbelianStructure,
    n_elems: Vec<PhaseArray>,
    n_index: HashMap<PhaseArray, u32>,
    n_mul: Vec<u32>,
    n_inv: Vec<u32>,
    /// `[(h·|K| + k)·|N| + n] = n^{(h,k)}`
    conj: Vec<u32>,
    /// `[k·|H| + h] = c(k, h)`
    comm: Vec<u32>,
}

impl QuotientGroup {
    /// `G` (with [`Normalization::Standard`]) or `G̃` (with
    /// [`Normalization::Column`]) for a twist with finite commutator image.
    pub fn build(twist: &Twist, mode: Normalization, bound: usize) -> Result<Self> {
        let gens: Vec<PhaseArray> = commutator_generators(twist)
            .into_iter()
            .map(|g| mode.apply(&g.array))
            .collect();
        let flat: Vec<Vec<Phase>> = gens.iter().map(|a| a.entries().to_vec()).collect();
        let structure = subgroup_structure(&flat);
        let Some(n_order) = structure.order() else {
            return Err(Error::InfiniteGroup(format!(
                "the commutator image is {structure}"
            )));
        };
        let order = (twist.h().order() * twist.k().order()).saturating_mul(usize::try_from(n_order).unwrap_or(usize::MAX));
        if order > bound || n_order > N_TABLE_LIMIT as u64 {
            return Err(Error::SizeBound {
                what: "quotient group",
                size: order,
                bound: bound.min(N_TABLE_LIMIT * twist.h().order() * twist.k().order()),
            });
        }
        let mut n_elems = enumerate_subgroup(&gens, n_order as usize + 1)?;
        if n_elems.is_empty() {
            n_elems.push(PhaseArray::ones(twist.h().order(), twist.k().order()));
        }
        if n_elems.len() != n_order as usize {
            return Err(Error::Internal(format!(
                "enumerated {} elements, Smith form predicts {n_order}",
                n_elems.len()
            )));
        }
        let n_index: HashMap<PhaseArray, u32> = n_elems
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        let lookup = |a: &PhaseArray| -> Result<u32> {
            n_index
                .get(&mode.apply(a))
                .copied()
                .ok_or_else(|| Error::Internal("array outside the commutator image".into()))
        };
        let nn = n_elems.len();
        let mut n_mul = Vec::with_capacity(nn * nn);
        for a in &n_elems {
            for b in &n_elems {
                n_mul.push(lookup(&(a * b))?);
            }
        }
        let n_inv = n_elems.iter().map(|a| lookup(&a.conj())).collect::<Result<_>>()?;
        let (hn, kn) = (twist.h().order(), twist.k().order());
        let mut conj = Vec::with_capacity(hn * kn * nn);
        for h in 0..hn {
            for k in 0..kn {
                let inv = twist.inv_shift((h, k));
                for a in &n_elems {
                    conj.push(lookup(&twist.shift(inv, a))?);
                }
            }
        }
        let mut comm = Vec::with_capacity(hn * kn);
        for k in 0..kn {
            for h in 0..hn {
                let (hg, kg) = (twist.h(), twist.k());
                let w = Word::new(
                    [
                        crate::word::Letter::k(kg.inv(k)),
                        crate::word::Letter::h(hg.inv(h)),
                        crate::word::Letter::k(k),
                        crate::word::Letter::h(h),
                    ],
                    hg,
                    kg,
                );
                let p = twist.evaluate(&w);
                debug_assert_eq!(p.shift, (0, 0));
                comm.push(lookup(&p.array)?);
            }
        }
        Ok(QuotientGroup {
            twist: twist.clone(),
            mode,
            structure,
            n_elems,
            n_index,
            n_mul,
            n_inv,
            conj,
            comm,
        })
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }

    /// Structure of the normal subgroup (`N` or `Ñ`).
    pub fn n_structure(&self) -> &AbelianStructure {
        &self.structure
    }

    pub fn n_order(&self) -> usize {
        self.n_elems.len()
    }

    pub fn h_order(&self) -> usize {
        self.twist.h().order()
    }

    pub fn k_order(&self) -> usize {
        self.twist.k().order()
    }

    pub fn order(&self) -> usize {
        self.h_order() * self.k_order() * self.n_order()
    }

    pub fn elements(&self) -> std::ops::Range<GElem> {
        0..self.order()
    }

    pub fn compose_index(&self, h: Elem, k: Elem, n: usize) -> GElem {
        (h * self.k_order() + k) * self.n_order() + n
    }

    pub fn parts(&self, g: GElem) -> (Elem, Elem, usize) {
        let nn = self.n_order();
        let hk = g / nn;
        (hk / self.k_order(), hk % self.k_order(), g % nn)
    }

    pub fn identity(&self) -> GElem {
        0
    }

    pub fn from_h(&self, h: Elem) -> GElem {
        self.compose_index(h, 0, 0)
    }

    pub fn from_k(&self, k: Elem) -> GElem {
        self.compose_index(0, k, 0)
    }

    pub fn from_n(&self, n: usize) -> GElem {
        self.compose_index(0, 0, n)
    }

    pub fn n_array(&self, n: usize) -> &PhaseArray {
        &self.n_elems[n]
    }

    pub fn n_lookup(&self, a: &PhaseArray) -> Option<usize> {
        self.n_index.get(&self.mode.apply(a)).map(|&i| i as usize)
    }

    pub fn n_mul(&self, a: usize, b: usize) -> usize {
        self.n_mul[a * self.n_order() + b] as usize
    }

    pub fn n_inv(&self, a: usize) -> usize {
        self.n_inv[a] as usize
    }

    /// `n^{(h,k)} = (hk)⁻¹·n·(hk)`
    pub fn n_conj(&self, n: usize, h: Elem, k: Elem) -> usize {
        self.conj[(h * self.k_order() + k) * self.n_order() + n] as usize
    }

    /// `c(k, h) = k⁻¹h⁻¹kh`
    pub fn commutator(&self, k: Elem, h: Elem) -> usize {
        self.comm[k * self.h_order() + h] as usize
    }

    pub fn mul(&self, a: GElem, b: GElem) -> GElem {
        let (h1, k1, n1) = self.parts(a);
        let (h2, k2, n2) = self.parts(b);
        let c = self.n_conj(self.commutator(k1, h2), 0, k2);
        let moved = self.n_conj(n1, h2, k2);
        let n = self.n_mul(self.n_mul(c, moved), n2);
        self.compose_index(self.twist.h().mul(h1, h2), self.twist.k().mul(k1, k2), n)
    }

    pub fn inv(&self, a: GElem) -> GElem {
        let (h, k, n) = self.parts(a);
        let (hi, ki) = (self.twist.h().inv(h), self.twist.k().inv(k));
        // (h,k,n)(h⁻¹,k⁻¹,m) = (1,1, c(k,h⁻¹)^{k⁻¹}·n^{h⁻¹k⁻¹}·m)
        let c = self.n_conj(self.commutator(k, hi), 0, ki);
        let rest = self.n_mul(c, self.n_conj(n, hi, ki));
        self.compose_index(hi, ki, self.n_inv(rest))
    }

    pub fn pow(&self, a: GElem, e: usize) -> GElem {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn elem_order(&self, a: GElem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Images of the generators of `H` and `K`; together they generate.
    pub fn generators(&self) -> Vec<GElem> {
        let mut gens: Vec<GElem> = self.twist.h().generators().into_iter().map(|h| self.from_h(h)).collect();
        gens.extend(self.twist.k().generators().into_iter().map(|k| self.from_k(k)));
        gens
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The element as a normalized coordinate automorphism.
    pub fn to_perm(&self, g: GElem) -> TwistedPerm {
        let (h, k, n) = self.parts(g);
        let t = &self.twist;
        let hk = t.compose(&t.h_image(h), &t.k_image(k));
        let nn = TwistedPerm {
            shift: (0, 0),
            array: self.n_elems[n].clone(),
        };
        self.mode.apply_perm(&t.compose(&hk, &nn))
    }

    pub fn elem_label(&self, g: GElem) -> String {
        let (h, k, n) = self.parts(g);
        format!(
            "h{}k{}n{}",
            self.twist.h().elem_label(h),
            self.twist.k().elem_label(k),
            n
        )
    }

    /// `hgk = g ⇒ h = k = 1`.
    pub fn is_locally_free(&self) -> bool {
        let hs: Vec<GElem> = (1..self.h_order()).map(|h| self.from_h(h)).collect();
        let ks: Vec<GElem> = (0..self.k_order()).map(|k| self.from_k(k)).collect();
        for g in self.elements() {
            for &k in &ks {
                let gk = self.mul(g, k);
                if k != 0 && gk == g {
                    return false;
                }
                if hs.iter().any(|&h| self.mul(h, gk) == g) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest subgroup containing `gens`, as a membership mask.
    pub fn subgroup_mask(&self, gens: &[GElem]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }
}

/// `G̃` together with its inner subgroup `S`.
#[derive(Clone, Debug)]
pub struct ExtendedGroup {
    group: QuotientGroup,
    /// Indices (into the normal subgroup) of the row-function arrays.
    inner: Vec<usize>,
    is_inner: Vec<bool>,
}

impl ExtendedGroup {
    pub fn build(twist: &Twist, bound: usize) -> Result<Self> {
        let group = QuotientGroup::build(twist, Normalization::Column, bound)?;
        let is_inner: Vec<bool> = (0..group.n_order())
            .map(|n| group.n_array(n).is_row_function())
            .collect();
        let inner = (0..group.n_order()).filter(|&n| is_inner[n]).collect();
        let ext = ExtendedGroup {
            group,
            inner,
            is_inner,
        };
        ext.check_inner_multiplicative()?;
        Ok(ext)
    }

    pub fn group(&self) -> &QuotientGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Normal-subgroup indices of the inner elements, identity first.
    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    pub fn inner_order(&self) -> usize {
        self.inner.len()
    }

    pub fn inner_structure(&self) -> AbelianStructure {
        let gens: Vec<Vec<Phase>> = self.inner.iter().skip(1).map(|&s| self.implementing_vector(s)).collect();
        subgroup_structure(&gens)
    }

    pub fn is_inner(&self, n: usize) -> bool {
        self.is_inner[n]
    }

    /// `g ∈ G̃` lies in `S`.
    pub fn element_is_inner(&self, g: GElem) -> bool {
        let (h, k, n) = self.group.parts(g);
        h == 0 && k == 0 && self.is_inner[n]
    }

    /// `u_s` over `H` with `u_s(1) = 1`.
    pub fn implementing_vector(&self, s: usize) -> Vec<Phase> {
        let a = self.group.n_array(s);
        (0..a.rows()).map(|r| a.get(r, 0).clone()).collect()
    }

    /// `u_s·u_{s'} = u_{ss'}` under the normalization `u(1) = 1`.
    fn check_inner_multiplicative(&self) -> Result<()> {
        for &a in &self.inner {
            for &b in &self.inner {
                let ab = self.group.n_mul(a, b);
                let ua = self.implementing_vector(a);
                let ub = self.implementing_vector(b);
                let prod: Vec<Phase> = ua.iter().zip(&ub).map(|(x, y)| x * y).collect();
                if !self.is_inner[ab] || prod != self.implementing_vector(ab) {
                    return Err(Error::Internal("implementing vectors are not multiplicative".into()));
                }
            }
        }
        Ok(())
    }

    /// `λ(g, s)`: the constant with `g(u_{g⁻¹sg}) = λ·u_s`.
    pub fn lambda(&self, g: GElem, s: usize) -> Result<Phase> {
        let grp = &self.group;
        let conj = grp.mul(grp.mul(grp.inv(g), grp.from_n(s)), g);
        let (ch, ck, cn) = grp.parts(conj);
        if ch != 0 || ck != 0 || !self.is_inner[cn] {
            return Err(Error::Internal("S is not normal".into()));
        }
        let (h, k, _) = grp.parts(g);
        let t = grp.twist();
        let moved = t.shift((h, k), grp.n_array(cn));
        let ratio = &moved * &grp.n_array(s).conj();
        let value = ratio.get(0, 0).clone();
        if ratio.entries().iter().any(|p| *p != value) {
            return Err(Error::NonConstantRatio(format!(
                "element {} and inner element {s}",
                grp.elem_label(g)
            )));
        }
        // coordinate form: the conjugated vector read at the shifted identity
        let u = self.implementing_vector(cn);
        let at = match t.orientation() {
            crate::word::Orientation::Left => t.h().inv(h),
            crate::word::Orientation::Right => h,
        };
        if u[at] != value {
            return Err(Error::NonConstantRatio(format!(
                "coordinate formula disagrees for {}",
                grp.elem_label(g)
            )));
        }
        Ok(value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaEntry {
    pub side: Side,
    pub generator: Elem,
    /// Index of the inner element in the normal subgroup of `G̃`.
    pub inner: usize,
    pub value: Phase,
}

/// `λ` restricted to `(H ∪ K) × S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CharInvariant {
    pub entries: Vec<LambdaEntry>,
}

impl CharInvariant {
    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|e| e.value.is_one())
    }

    pub fn get(&self, side: Side, generator: Elem, inner: usize) -> Option<&Phase> {
        self.entries
            .iter()
            .find(|e| e.side == side && e.generator == generator && e.inner == inner)
            .map(|e| &e.value)
    }
}

pub fn char_invariant(ext: &ExtendedGroup) -> Result<CharInvariant> {
    let grp = ext.group();
    let mut entries = Vec::new();
    if ext.inner_order() <= 1 {
        return Ok(CharInvariant { entries });
    }
    let sides = [
        (Side::H, grp.h_order()),
        (Side::K, grp.k_order()),
    ];
    for (side, order) in sides {
        for x in 1..order {
            let g = match side {
                Side::H => grp.from_h(x),
                Side::K => grp.from_k(x),
            };
            for &s in ext.inner().iter().skip(1) {
                entries.push(LambdaEntry {
                    side,
                    generator: x,
                    inner: s,
                    value: ext.lambda(g, s)?,
                });
            }
        }
    }
    Ok(CharInvariant { entries })
}

/// Outcome of scanning cyclic subgroups for a 3-cocycle obstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CocycleTest {
    /// `⟨g⟩` has inner part generated by `g^power`, and `λ(g, g^power) ≠ 1`.
    Witness {
        element: String,
        cyclic_order: usize,
        power: usize,
        lambda: Phase,
    },
    Inconclusive,
}

impl CocycleTest {
    pub fn is_witness(&self) -> bool {
        matches!(self, CocycleTest::Witness { .. })
    }
}

pub fn cyclic_cocycle_test(ext: &ExtendedGroup) -> Result<CocycleTest> {
    if ext.inner_order() <= 1 {
        return Ok(CocycleTest::Inconclusive);
    }
    let grp = ext.group();
    let mut candidates: Vec<GElem> = Vec::new();
    for h in 1..grp.h_order() {
        for k in 1..grp.k_order() {
            candidates.push(grp.mul(grp.from_h(h), grp.from_k(k)));
        }
    }
    candidates.extend(grp.elements());
    for g in candidates {
        let mut x = g;
        let mut power = 1;
        while !ext.element_is_inner(x) {
            x = grp.mul(x, g);
            power += 1;
        }
        if x == 0 {
            continue;
        }
        let (_, _, s) = grp.parts(x);
        let lambda = ext.lambda(g, s)?;
        if !lambda.is_one() {
            return Ok(CocycleTest::Witness {
                element: grp.elem_label(g),
                cyclic_order: grp.elem_order(g),
                power,
                lambda,
            });
        }
    }
    Ok(CocycleTest::Inconclusive)
}

/// Cap on candidate maps tried by [`invariants_equivalent`].
pub const PERTURBATION_LIMIT: usize = 1 << 20;

/// Whether some pair of automorphisms of `H` and `K`, with each generator
/// image perturbed by an inner element, extends to an isomorphism of the
/// `G̃`s carrying `S` onto `S` and `λ` onto `λ`.
pub fn invariants_equivalent(a: &ExtendedGroup, b: &ExtendedGroup, bound: usize) -> Result<bool> {
    let (ga, gb) = (a.group(), b.group());
    let (ta, tb) = (ga.twist(), gb.twist());
    if ta.h() != tb.h() || ta.k() != tb.k() || ga.order() != gb.order() || a.inner_order() != b.inner_order() {
        return Ok(false);
    }
    let aut_h = ta.h().automorphisms(bound)?;
    let aut_k = ta.k().automorphisms(bound)?;
    let hgens = ta.h().generators();
    let kgens = ta.k().generators();
    let mut gens: Vec<GElem> = hgens.iter().map(|&h| ga.from_h(h)).collect();
    gens.extend(kgens.iter().map(|&k| ga.from_k(k)));
    let inner: Vec<GElem> = b.inner().iter().map(|&s| gb.from_n(s)).collect();
    let perturbations = (inner.len() as u64)
        .checked_pow(gens.len() as u32)
        .map(|p| p.saturating_mul((aut_h.len() * aut_k.len()) as u64));
    match perturbations {
        Some(p) if p <= PERTURBATION_LIMIT as u64 => {}
        p => {
            return Err(Error::SizeBound {
                what: "search over perturbed generator images",
                size: p.map_or(usize::MAX, |p| usize::try_from(p).unwrap_or(usize::MAX)),
                bound: PERTURBATION_LIMIT,
            })
        }
    }
    for phi in &aut_h {
        for psi in &aut_k {
            let mut base: Vec<GElem> = hgens.iter().map(|&h| gb.from_h(phi[h])).collect();
            base.extend(kgens.iter().map(|&k| gb.from_k(psi[k])));
            for choice in 0..inner.len().pow(gens.len() as u32) {
                let mut c = choice;
                let images: Vec<GElem> = base
                    .iter()
                    .map(|&x| {
                        let s = inner[c % inner.len()];
                        c /= inner.len();
                        gb.mul(x, s)
                    })
                    .collect();
                let Some(map) = extend_map(ga, gb, &gens, &images) else {
                    continue;
                };
                if carries_invariants(a, b, &map)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Extends a generator assignment along the Cayley graph; `None` if it is
/// inconsistent or not bijective.
fn extend_map(src: &QuotientGroup, dst: &QuotientGroup, gens: &[GElem], images: &[GElem]) -> Option<Vec<GElem>> {
    let mut map: Vec<Option<GElem>> = vec![None; src.order()];
    map[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].unwrap();
        for (&g, &img) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let fy = dst.mul(fx, img);
            match map[y] {
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
                Some(v) if v != fy => return None,
                _ => {}
            }
        }
    }
    let map: Vec<GElem> = map.into_iter().collect::<Option<_>>()?;
    let mut seen = vec![false; dst.order()];
    map.iter()
        .all(|&y| !std::mem::replace(&mut seen[y], true))
        .then_some(map)
}

fn carries_invariants(a: &ExtendedGroup, b: &ExtendedGroup, map: &[GElem]) -> Result<bool> {
    let (ga, gb) = (a.group(), b.group());
    for &s in a.inner() {
        let image = map[ga.from_n(s)];
        if !b.element_is_inner(image) {
            return Ok(false);
        }
        let (_, _, s2) = gb.parts(image);
        // images are read off the map: `from_h` is a homomorphism only modulo Ñ
        let moved = (1..ga.h_order())
            .map(|h| ga.from_h(h))
            .chain((1..ga.k_order()).map(|k| ga.from_k(k)));
        for g in moved {
            if a.lambda(g, s)? != b.lambda(map[g], s2)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coarse isomorphism type of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupDescriptor {
    /// Invariant factors; empty for the trivial group.
    Abelian(Vec<u64>),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    Other { order: usize, abelianization: Vec<u64> },
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            GroupDescriptor::Abelian(v) => write!(f, "Abelian({})", join(v)),
            GroupDescriptor::Dihedral(m) => write!(f, "Dihedral({m})"),
            GroupDescriptor::Other { order, abelianization } => {
                write!(f, "Other(order {order}, abelianization ({}))", join(abelianization))
            }
        }
    }
}

/// Invariant factors of an abelian group from the orders of its elements.
fn invariants_from_orders(orders: &[usize]) -> Vec<u64> {
    let total = orders.len();
    let mut primes = Vec::new();
    let mut m = total;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    let mut powers = Vec::new();
    for p in primes {
        // exps[j] = log_p #{x : x^{p^j} = 1}
        let mut exps = vec![0u32];
        let mut pj = 1usize;
        loop {
            pj *= p;
            let count = orders.iter().filter(|&&o| pj % o == 0).count();
            let e = (count as f64).log(p as f64).round() as u32;
            if e == *exps.last().unwrap() {
                break;
            }
            exps.push(e);
        }
        // number of cyclic factors of exponent ≥ j is exps[j] - exps[j-1]
        let at_least: Vec<u32> = exps.windows(2).map(|w| w[1] - w[0]).collect();
        for j in 0..at_least.len() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..at_least[j] - next {
                powers.push((p as u64).pow(j as u32 + 1));
            }
        }
    }
    invariant_factors(&powers)
}

pub fn identify_group(g: &QuotientGroup) -> GroupDescriptor {
    let order = g.order();
    let orders: Vec<usize> = g.elements().map(|x| g.elem_order(x)).collect();
    if g.is_abelian() {
        return GroupDescriptor::Abelian(invariants_from_orders(&orders));
    }
    if order % 2 == 0 {
        let m = order / 2;
        if let Some(r) = g.elements().find(|&x| orders[x] == m) {
            let rot = g.subgroup_mask(&[r]);
            let rinv = g.inv(r);
            let dihedral = g
                .elements()
                .any(|s| !rot[s] && orders[s] == 2 && g.mul(g.mul(s, r), s) == rinv);
            if dihedral {
                return GroupDescriptor::Dihedral(m);
            }
        }
    }
    GroupDescriptor::Other {
        order,
        abelianization: abelianization(g),
    }
}

/// Invariant factors of `G / [G, G]`.
pub fn abelianization(g: &QuotientGroup) -> Vec<u64> {
    let gens = g.generators();
    let mut seeds: Vec<GElem> = Vec::new();
    for &a in &gens {
        for &b in &gens {
            seeds.push(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
        }
    }
    // normal closure: close under products and conjugation by generators
    let mut mask = g.subgroup_mask(&seeds);
    loop {
        let members: Vec<GElem> = g.elements().filter(|&x| mask[x]).collect();
        let mut grew = false;
        for &x in &members {
            for &a in &gens {
                let y = g.mul(g.mul(g.inv(a), x), a);
                if !mask[y] {
                    seeds.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
        mask = g.subgroup_mask(&seeds);
    }
    let derived = mask.iter().filter(|&&m| m).count();
    let mut coset_orders = Vec::new();
    for x in g.elements() {
        let mut y = x;
        let mut k = 1;
        while !mask[y] {
            y = g.mul(y, x);
            k += 1;
        }
        coset_orders.push(k);
    }
    // each coset contributes |[G,G]| copies of its order
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for o in coset_orders {
        *counts.entry(o).or_default() += 1;
    }
    let per_coset: Vec<usize> = counts
        .into_iter()
        .flat_map(|(o, c)| std::iter::repeat(o).take(c / derived))
        .collect();
    invariants_from_orders(&per_coset)
}

/// Structure of `N` via the commutator generators in standard form (works
/// for infinite images too).
pub fn normal_subgroup_structure(twist: &Twist) -> AbelianStructure {
    let gens: Vec<Vec<Phase>> = commutator_generators(twist)
        .iter()
        .map(|g| g.array.standardized().entries().to_vec())
        .collect();
    subgroup_structure(&gens)
}
