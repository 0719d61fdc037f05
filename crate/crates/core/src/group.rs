//! Small finite groups: abelian groups in invariant-factor form and groups
//! given by a Cayley table.
//!
//! Elements are always indices `0..order`, with `0` the identity.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::{parse_err, Error, Result};
use crate::phase::Phase;

/// Group element as an index into the group's element list.
pub type Elem = usize;

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// Invariant factors `n_1 | n_2 | …`; index is mixed radix with the first
    /// coordinate least significant.
    Abelian(Vec<u64>),
    /// Cayley table group, optionally with a display name such as `S3`.
    Table(Option<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    kind: Kind,
    table: Vec<Vec<Elem>>,
    inverse: Vec<Elem>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors (ascending, each dividing the next) of `⊕ Z_{n_i}`.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in orders {
        for (p, e) in prime_powers(n) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in exps.into_iter().enumerate() {
            factors[len - 1 - slot] *= p.pow(e);
        }
    }
    factors
}

impl FinGroup {
    pub fn trivial() -> Self {
        Self::abelian(&[])
    }

    pub fn cyclic(n: u64) -> Self {
        Self::abelian(&[n])
    }

    /// `Z_{n_1} ⊕ … ⊕ Z_{n_r}`, normalized to invariant factors.
    pub fn abelian(orders: &[u64]) -> Self {
        let factors = invariant_factors(orders);
        let order: usize = factors.iter().product::<u64>() as usize;
        let coords = |mut i: usize| {
            factors
                .iter()
                .map(|&n| {
                    let c = i as u64 % n;
                    i /= n as usize;
                    c
                })
                .collect::<Vec<_>>()
        };
        let index = |c: &[u64]| {
            c.iter()
                .zip(&factors)
                .rev()
                .fold(0usize, |acc, (&ci, &n)| acc * n as usize + ci as usize)
        };
        let all: Vec<Vec<u64>> = (0..order).map(coords).collect();
        let table = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| {
                        let c: Vec<u64> = all[a]
                            .iter()
                            .zip(&all[b])
                            .zip(&factors)
                            .map(|((x, y), n)| (x + y) % n)
                            .collect();
                        index(&c)
                    })
                    .collect()
            })
            .collect::<Vec<Vec<Elem>>>();
        let inverse = (0..order)
            .map(|a| {
                let c: Vec<u64> = all[a]
                    .iter()
                    .zip(&factors)
                    .map(|(x, n)| (n - x) % n)
                    .collect();
                index(&c)
            })
            .collect();
        FinGroup {
            kind: Kind::Abelian(factors),
            table,
            inverse,
        }
    }

    /// Symmetric group on `n ≤ 5` points; elements are permutations in
    /// lexicographic order and `(a·b)(i) = a(b(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n > 5 {
            return Err(Error::SizeBound {
                what: "symmetric group degree",
                size: n,
                bound: 5,
            });
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        let lookup: BTreeMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| lookup[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let mut g = Self::from_table(table)?;
        g.kind = Kind::Table(Some(format!("S{n}")));
        Ok(g)
    }

    /// Validates a Cayley table (Latin square, associativity) and relabels it
    /// so that the identity has index 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidTable("table is not square".into()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidTable("rows are not permutations".into()));
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[c]], true) {
                    return Err(Error::InvalidTable("columns are not permutations".into()));
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let swap = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let relabeled: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| swap(table[swap(a)][swap(b)])).collect())
            .collect();
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| relabeled[a][b] == 0).unwrap())
            .collect();
        Ok(FinGroup {
            kind: Kind::Table(None),
            table: relabeled,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a][b]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn pow(&self, a: Elem, n: i64) -> Elem {
        let base = if n < 0 { self.inv(a) } else { a };
        (0..n.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn elem_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            Kind::Abelian(_) => true,
            Kind::Table(_) => self
                .elements()
                .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a))),
        }
    }

    /// Invariant factors when the group was constructed as abelian.
    pub fn factors(&self) -> Option<&[u64]> {
        match &self.kind {
            Kind::Abelian(f) => Some(f),
            Kind::Table(_) => None,
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.kind, Kind::Table(_))
    }

    /// Coordinates of an element: the tuple over the invariant factors for an
    /// abelian group, the bare index for a table group.
    pub fn coords(&self, a: Elem) -> Vec<u64> {
        match &self.kind {
            Kind::Abelian(f) => {
                let mut i = a as u64;
                f.iter()
                    .map(|&n| {
                        let c = i % n;
                        i /= n;
                        c
                    })
                    .collect()
            }
            Kind::Table(_) => vec![a as u64],
        }
    }

    /// Inverse of [`coords`](Self::coords); abelian coordinates are reduced
    /// modulo their factor.
    pub fn from_coords(&self, c: &[i64]) -> Result<Elem> {
        let literal = || format!("{c:?}");
        match &self.kind {
            Kind::Abelian(f) => {
                if c.len() != f.len() {
                    return Err(parse_err(
                        "element",
                        &literal(),
                        format!("expected {} coordinates", f.len()),
                    ));
                }
                Ok(c.iter().zip(f).rev().fold(0usize, |acc, (&ci, &n)| {
                    acc * n as usize + ci.rem_euclid(n as i64) as usize
                }))
            }
            Kind::Table(_) => match c {
                [i] if *i >= 0 && (*i as usize) < self.order() => Ok(*i as usize),
                _ => Err(parse_err("element", &literal(), "expected a table index")),
            },
        }
    }

    pub fn elem_label(&self, a: Elem) -> String {
        let c: Vec<String> = self.coords(a).iter().map(u64::to_string).collect();
        format!("[{}]", c.join(","))
    }

    /// A generating set: unit vectors for abelian groups, a greedy choice
    /// (largest element order first) for table groups.
    pub fn generators(&self) -> Vec<Elem> {
        if let Kind::Abelian(f) = &self.kind {
            let mut stride = 1usize;
            return f
                .iter()
                .map(|&n| {
                    let g = stride;
                    stride *= n as usize;
                    g
                })
                .collect();
        }
        let mut by_order: Vec<Elem> = self.elements().skip(1).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.elem_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![0];
        for a in by_order {
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// Character table `ρ_g(x) = Σ g_i x_i / n_i`, indexed `[g][x]`.
    pub fn characters(&self) -> Result<Vec<Vec<Phase>>> {
        let Kind::Abelian(f) = &self.kind else {
            return Err(Error::NonAbelian);
        };
        let coords: Vec<Vec<u64>> = self.elements().map(|a| self.coords(a)).collect();
        Ok(coords
            .iter()
            .map(|g| {
                coords
                    .iter()
                    .map(|x| {
                        let turn = g
                            .iter()
                            .zip(x)
                            .zip(f)
                            .map(|((gi, xi), &n)| Rational64::new((gi * xi) as i64, n as i64))
                            .sum();
                        Phase::from_turn(turn)
                    })
                    .collect()
            })
            .collect())
    }

    /// All automorphisms as image tables `φ[x]`, by brute force over images
    /// of the generators. The identity automorphism comes first.
    pub fn automorphisms(&self, bound: usize) -> Result<Vec<Vec<Elem>>> {
        if self.order() > bound {
            return Err(Error::SizeBound {
                what: "automorphism search group",
                size: self.order(),
                bound,
            });
        }
        let gens = self.generators();
        let candidates: Vec<Vec<Elem>> = gens
            .iter()
            .map(|&g| {
                let o = self.elem_order(g);
                self.elements().filter(|&x| self.elem_order(x) == o).collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        'outer: loop {
            let images: Vec<Elem> = choice
                .iter()
                .zip(&candidates)
                .map(|(&c, cand)| cand[c])
                .collect();
            if let Some(phi) = self.extend_homomorphism(self, &gens, &images) {
                if is_bijection(&phi) {
                    out.push(phi);
                }
            }
            for slot in 0..choice.len() {
                choice[slot] += 1;
                if choice[slot] < candidates[slot].len() {
                    continue 'outer;
                }
                choice[slot] = 0;
            }
            break;
        }
        out.sort();
        Ok(out)
    }

    /// Extends `gens[i] ↦ images[i]` to a homomorphism into `target`, or
    /// `None` if the assignment is inconsistent.
    pub fn extend_homomorphism(
        &self,
        target: &FinGroup,
        gens: &[Elem],
        images: &[Elem],
    ) -> Option<Vec<Elem>> {
        let n = self.order();
        let mut phi: Vec<Option<Elem>> = vec![None; n];
        phi[0] = Some(0);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let fx = phi[x].unwrap();
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(fx, img);
                match phi[y] {
                    None => {
                        phi[y] = Some(fy);
                        queue.push_back(y);
                    }
                    Some(v) if v != fy => return None,
                    _ => {}
                }
            }
        }
        phi.into_iter().collect()
    }
}

fn is_bijection(phi: &[Elem]) -> bool {
    let mut seen = vec![false; phi.len()];
    phi.iter()
        .all(|&y| y < phi.len() && !std::mem::replace(&mut seen[y], true))
}

impl fmt::Display for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Abelian(fs) if fs.is_empty() => write!(f, "Z1"),
            Kind::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(|n| format!("Z{n}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            Kind::Table(Some(name)) => write!(f, "{name}"),
            Kind::Table(None) => {
                let rows: Vec<String> = self
                    .table
                    .iter()
                    .map(|r| {
                        let r: Vec<String> = r.iter().map(usize::to_string).collect();
                        format!("[{}]", r.join(","))
                    })
                    .collect();
                write!(f, "[{}]", rows.join(","))
            }
        }
    }
}

impl FromStr for FinGroup {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if s.starts_with('[') {
            let table: Vec<Vec<usize>> = serde_json::from_str(s)
                .map_err(|e| parse_err("group", input, e.to_string()))?;
            return FinGroup::from_table(table);
        }
        if let Some(n) = s.strip_prefix('S') {
            let n: usize = n
                .parse()
                .map_err(|_| parse_err("group", input, "bad symmetric group degree"))?;
            return FinGroup::symmetric(n);
        }
        let orders = s
            .split(['x', '+'])
            .map(|part| {
                part.trim()
                    .strip_prefix('Z')
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| parse_err("group", input, format!("bad factor {part:?}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(FinGroup::abelian(&orders))
    }
}
