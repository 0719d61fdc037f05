//! Independent oracles and seeded generators shared by the property suites
//! and the acceptance runner.

#![allow(dead_code)]

use htwist_core::graph::principal_graph;
use htwist_core::quotient::{normal_subgroup_structure, Normalization, QuotientGroup};
use htwist_core::snf::{smith_normal_form, IntMatrix};
use htwist_core::word::{Letter, Side};
use htwist_core::{FinGroup, Phase, PhaseArray, Twist, TwistedPerm, Word};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

pub const ABELIAN_POOL: &[&str] = &["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6"];

pub fn group(rng: &mut StdRng, pool: &[&str]) -> FinGroup {
    pool[rng.gen_range(0..pool.len())].parse().unwrap()
}

pub fn rational_phase(rng: &mut StdRng, max_den: i64) -> Phase {
    let den = rng.gen_range(1..=max_den);
    Phase::new(rng.gen_range(0..den), den)
}

pub fn rational_twist(rng: &mut StdRng, h: FinGroup, k: FinGroup, max_den: i64) -> Twist {
    let entries = (0..h.order() * k.order()).map(|_| rational_phase(rng, max_den)).collect();
    let values = PhaseArray::new(h.order(), k.order(), entries).unwrap();
    Twist::new(h, k, values).unwrap()
}

fn c(p: &Phase) -> Complex64 {
    let t = *p.turn().numer() as f64 / *p.turn().denom() as f64;
    Complex64::from_polar(1.0, std::f64::consts::TAU * t)
}

/// `M·M* = n·1` in floating point, with unimodular entries.
pub fn numerically_hadamard(angles: &PhaseArray) -> Result<(), String> {
    let n = angles.rows();
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = (0..n).map(|l| c(angles.get(i, l)) * c(angles.get(j, l)).conj()).sum();
            let want = if i == j { n as f64 } else { 0.0 };
            if (s - want).norm() > 1e-9 {
                return Err(format!("rows {i}, {j} have inner product {s}"));
            }
        }
    }
    Ok(())
}

pub fn random_word(rng: &mut StdRng, h: &FinGroup, k: &FinGroup, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Letter::h(rng.gen_range(0..h.order()))
            } else {
                Letter::k(rng.gen_range(0..k.order()))
            }
        })
        .collect();
    Word::new(letters, h, k)
}

/// `Y ↦ A·ρ_σ(Y)`.
fn apply(twist: &Twist, p: &TwistedPerm, y: &PhaseArray) -> PhaseArray {
    &p.array * &twist.shift(p.shift, y)
}

/// Evaluation of `w1·w2` agrees with composing the evaluations, both as
/// twisted permutations and as operators applied letter by letter to `y`.
pub fn homomorphism_holds(twist: &Twist, w1: &Word, w2: &Word, y: &PhaseArray) -> Result<(), String> {
    let (h, k) = (twist.h(), twist.k());
    let joined = twist.evaluate(&w1.concat(w2, h, k));
    let composed = twist.compose(&twist.evaluate(w1), &twist.evaluate(w2));
    if joined != composed {
        return Err("evaluate(w1·w2) differs from the composition".into());
    }
    let mut z = y.clone();
    for l in w1.letters().iter().chain(w2.letters()).rev() {
        let img = match l.side {
            Side::H => twist.h_image(l.elem),
            Side::K => twist.k_image(l.elem),
        };
        z = apply(twist, &img, &z);
    }
    if apply(twist, &joined, y) != z {
        return Err("operator action differs from letter-by-letter application".into());
    }
    Ok(())
}

/// Outcome of the degree-sum check on one twist.
pub enum DegreeCheck {
    Checked,
    Skipped,
}

/// For a finite, locally free twist with `|G| ≤ bound`: every odd vertex has
/// weighted degree `|H|·|K|` and the clusters partition `G`.
pub fn degree_sum_rule(twist: &Twist, bound: usize) -> Result<DegreeCheck, String> {
    if !normal_subgroup_structure(twist).is_finite() {
        return Ok(DegreeCheck::Skipped);
    }
    let Ok(g) = QuotientGroup::build(twist, Normalization::Standard, bound) else {
        return Ok(DegreeCheck::Skipped);
    };
    let Ok(graph) = principal_graph(&g) else {
        return Ok(DegreeCheck::Skipped);
    };
    let want = twist.h().order() * twist.k().order();
    let mut sums = vec![0usize; graph.odd.len()];
    for e in &graph.edges {
        sums[e.odd] += e.multiplicity * graph.even[e.even].dim;
    }
    if let Some(i) = sums.iter().position(|&s| s != want) {
        return Err(format!("odd vertex {i} has weighted degree {}, expected {want}", sums[i]));
    }
    let covered: usize = graph.clusters.iter().map(|c| c.coset_size).sum();
    if covered != g.order() {
        return Err(format!("clusters cover {covered} of {} elements", g.order()));
    }
    Ok(DegreeCheck::Checked)
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `U·M·V = S`, unimodular `U` and `V`, the divisibility chain, and the
/// determinantal divisors: `s_1⋯s_k = gcd of the k×k minors`.
pub fn smith_form_correct(m: &IntMatrix) -> Result<(), String> {
    let f = smith_normal_form(m);
    if &f.u * m * &f.v != f.s {
        return Err("U·M·V differs from S".into());
    }
    for (name, x) in [("U", &f.u), ("V", &f.v)] {
        let rows: Vec<Vec<i128>> = (0..x.nrows()).map(|r| x.row(r).iter().copied().collect()).collect();
        if det(&rows).abs() != 1 {
            return Err(format!("{name} is not unimodular"));
        }
    }
    for r in 0..f.s.nrows() {
        for c in 0..f.s.ncols() {
            if r != c && f.s[(r, c)] != 0 {
                return Err("S is not diagonal".into());
            }
        }
    }
    let d = f.diagonal();
    if d.iter().any(|&x| x < 0) {
        return Err("negative invariant factor".into());
    }
    for w in d.windows(2) {
        if w[0] == 0 && w[1] != 0 || w[0] != 0 && w[1] % w[0] != 0 {
            return Err(format!("divisibility chain broken: {d:?}"));
        }
    }
    let mut prod = 1i128;
    for k in 1..=d.len() {
        prod *= d[k - 1];
        let mut g = 0i128;
        for rows in subsets(m.nrows(), k) {
            for cols in subsets(m.ncols(), k) {
                let minor: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|&c| m[(r, c)]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g != prod {
            return Err(format!("determinantal divisor {k} is {g}, product of factors {prod}"));
        }
    }
    Ok(())
}

pub fn random_int_matrix(rng: &mut StdRng, max_dim: usize, max_abs: i128) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    IntMatrix::from_fn(r, c, |_, _| rng.gen_range(-max_abs..=max_abs))
}
