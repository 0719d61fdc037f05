//! Smith normal form over the integers and the structure of finitely
//! generated subgroups of `(Q/Z ⊕ Q^m)^d`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::group::invariant_factors;
use crate::phase::{Phase, Symbol};

pub type IntMatrix = DMatrix<i128>;

/// `(U, S, V)` with `U·M·V = S`, `U` and `V` unimodular and `S` diagonal with
/// nonnegative entries `s_1 | s_2 | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i128> {
        let k = self.s.nrows().min(self.s.ncols());
        (0..k).map(|i| self.s[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        m.swap_rows(a, b);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        m.swap_columns(a, b);
    }
}

/// row[dst] -= q·row[src]
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i128) {
    for c in 0..m.ncols() {
        let v = m[(src, c)];
        m[(dst, c)] -= q * v;
    }
}

/// col[dst] -= q·col[src]
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i128) {
    for r in 0..m.nrows() {
        let v = m[(r, src)];
        m[(r, dst)] -= q * v;
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows, rows);
    let mut v = IntMatrix::identity(cols, cols);

    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| s[(r, c)] != 0)
            .min_by_key(|&(r, c)| s[(r, c)].abs())
        else {
            break;
        };
        swap_rows(&mut s, t, pr);
        swap_rows(&mut u, t, pr);
        swap_cols(&mut s, t, pc);
        swap_cols(&mut v, t, pc);

        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if s[(r, t)] != 0 {
                    let q = Integer::div_floor(&s[(r, t)], &s[(t, t)]);
                    row_axpy(&mut s, r, t, q);
                    row_axpy(&mut u, r, t, q);
                    if s[(r, t)] != 0 {
                        swap_rows(&mut s, t, r);
                        swap_rows(&mut u, t, r);
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if s[(t, c)] != 0 {
                    let q = Integer::div_floor(&s[(t, c)], &s[(t, t)]);
                    col_axpy(&mut s, c, t, q);
                    col_axpy(&mut v, c, t, q);
                    if s[(t, c)] != 0 {
                        swap_cols(&mut s, t, c);
                        swap_cols(&mut v, t, c);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let pivot = s[(t, t)];
            let offender = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| s[(r, c)] % pivot != 0));
            match offender {
                Some(r) => {
                    row_axpy(&mut s, t, r, -1);
                    row_axpy(&mut u, t, r, -1);
                }
                None => break,
            }
        }
        if s[(t, t)] < 0 {
            for c in 0..cols {
                s[(t, c)] = -s[(t, c)];
            }
            for c in 0..rows {
                u[(t, c)] = -u[(t, c)];
            }
        }
    }
    SmithForm { u, s, v }
}

/// Finitely generated abelian group `Z_{d_1} ⊕ … ⊕ Z_{d_s} ⊕ Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianStructure {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianStructure {
    pub fn trivial() -> Self {
        AbelianStructure {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// `None` for infinite groups; saturates at `u64::MAX`.
    pub fn order(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(1u64, |acc, &d| acc.saturating_mul(d)))
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Integer left kernel of `m`: rows `x` with `x·m = 0`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let rows = m.nrows();
    snf.u.rows(rank, rows - rank).into_owned()
}

/// Structure of the relation-free quotient `Z^r / L` where `L` is spanned by
/// the rows of `relations` (r columns).
pub fn cokernel(relations: &IntMatrix) -> AbelianStructure {
    let snf = smith_normal_form(relations);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    AbelianStructure {
        torsion: diag
            .iter()
            .filter(|&&d| d > 1)
            .map(|&d| d as u64)
            .collect(),
        free_rank: relations.ncols() - rank,
    }
}

/// Diagonalizes `m` over `Z/modulus` by unimodular row and column
/// operations and returns the nonzero diagonal residues.
fn diagonal_mod(m: &IntMatrix, modulus: i128) -> Vec<i128> {
    let (rows, cols) = m.shape();
    let mut s = m.map(|x| x.rem_euclid(modulus));
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| s[(r, c)] != 0)
            .min_by_key(|&(r, c)| s[(r, c)])
        else {
            break;
        };
        swap_rows(&mut s, t, pr);
        swap_cols(&mut s, t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if s[(r, t)] != 0 {
                    let q = s[(r, t)] / s[(t, t)];
                    row_axpy(&mut s, r, t, q);
                    for c in t..cols {
                        s[(r, c)] = s[(r, c)].rem_euclid(modulus);
                    }
                    if s[(r, t)] != 0 {
                        swap_rows(&mut s, t, r);
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if s[(t, c)] != 0 {
                    let q = s[(t, c)] / s[(t, t)];
                    col_axpy(&mut s, c, t, q);
                    for r in t..rows {
                        s[(r, c)] = s[(r, c)].rem_euclid(modulus);
                    }
                    if s[(t, c)] != 0 {
                        swap_cols(&mut s, t, c);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(s[(t, t)]);
    }
    diag
}

/// Structure of the subgroup of `(Z/modulus)^d` generated by the rows of `m`.
pub fn subgroup_of_cyclic_power(m: &IntMatrix, modulus: i128) -> Vec<u64> {
    let orders: Vec<u64> = diagonal_mod(m, modulus)
        .into_iter()
        .map(|g| (modulus / g.gcd(&modulus)) as u64)
        .collect();
    invariant_factors(&orders)
}

/// Structure of the subgroup of `(Q/Z ⊕ Q^m)^d` generated by vectors of
/// phases (rational parts in `Q/Z`, symbol coefficients in `Q^m`).
///
/// The free rank is the rank of the symbol part; the torsion is the
/// subgroup of `(Q/Z)^d` generated by the rational parts of the integer
/// combinations that kill every symbol.
pub fn subgroup_structure(generators: &[Vec<Phase>]) -> AbelianStructure {
    let r = generators.len();
    let d = generators.first().map_or(0, Vec::len);
    if r == 0 || d == 0 {
        return AbelianStructure::trivial();
    }
    let symbols: Vec<Symbol> = generators
        .iter()
        .flatten()
        .flat_map(|p| p.irr_coeffs().keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let denom = generators
        .iter()
        .flatten()
        .fold(1i128, |acc, p| acc.lcm(&(*p.turn().denom() as i128)));
    let rational = IntMatrix::from_fn(r, d, |i, j| {
        let t = generators[i][j].turn();
        *t.numer() as i128 * (denom / *t.denom() as i128)
    });

    let (relations, free_rank) = if symbols.is_empty() {
        (IntMatrix::identity(r, r), 0)
    } else {
        let irr_denom = generators
            .iter()
            .flatten()
            .flat_map(|p| p.irr_coeffs().values())
            .fold(1i128, |acc, c| acc.lcm(&(*c.denom() as i128)));
        let m = symbols.len();
        let irr = IntMatrix::from_fn(r, d * m, |i, col| {
            let (j, si) = (col / m, col % m);
            generators[i][j]
                .irr_coeffs()
                .get(&symbols[si])
                .map_or(0, |c| *c.numer() as i128 * (irr_denom / *c.denom() as i128))
        });
        let kernel = left_kernel(&irr);
        let rank = r - kernel.nrows();
        (kernel, rank)
    };
    let torsion = if relations.nrows() == 0 {
        Vec::new()
    } else {
        let combos = (&relations * &rational).map(|x| x.rem_euclid(denom));
        subgroup_of_cyclic_power(&combos, denom)
    };
    AbelianStructure { torsion, free_rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, v: &[i128]) -> IntMatrix {
        IntMatrix::from_row_slice(rows, cols, v)
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(&f.u * m * &f.v, f.s);
        let diag = f.diagonal();
        for w in diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "{diag:?}");
            } else {
                assert!(w[1] == 0);
            }
        }
        f
    }

    #[test]
    fn small_examples() {
        assert_eq!(check(&IntMatrix::identity(2, 2)).s, IntMatrix::identity(2, 2));
        assert_eq!(check(&mat(2, 2, &[2, 0, 0, 4])).diagonal(), vec![2, 4]);
        assert_eq!(check(&mat(2, 2, &[4, 0, 0, 6])).diagonal(), vec![2, 12]);
        assert_eq!(check(&mat(2, 3, &[2, 4, 4, -6, 6, 12])).diagonal(), vec![2, 6]);
        assert_eq!(check(&mat(2, 2, &[0, 0, 0, 0])).diagonal(), vec![0, 0]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = mat(3, 2, &[1, 2, 2, 4, 3, 6]);
        let k = left_kernel(&m);
        assert_eq!(k.nrows(), 2);
        assert!((&k * &m).iter().all(|&x| x == 0));
    }

    fn ph(n: i64, d: i64) -> Phase {
        Phase::new(n, d)
    }

    #[test]
    fn subgroup_examples() {
        let s = subgroup_structure(&[vec![ph(1, 2), ph(0, 1)], vec![ph(0, 1), ph(1, 2)]]);
        assert_eq!(s, AbelianStructure { torsion: vec![2, 2], free_rank: 0 });

        let s = subgroup_structure(&[vec![ph(1, 3), ph(0, 1)], vec![ph(1, 5), ph(1, 5)]]);
        assert_eq!(s.torsion, vec![15]);

        let s = subgroup_structure(&[vec![ph(1, 2)], vec![ph(1, 2)]]);
        assert_eq!(s.torsion, vec![2]);

        let t: Phase = "1/3*t1".parse().unwrap();
        let s = subgroup_structure(&[vec![t.clone(), ph(1, 2)]]);
        assert_eq!(s, AbelianStructure { torsion: vec![], free_rank: 1 });

        let u: Phase = "1/4 + 1/3*t1".parse().unwrap();
        let s = subgroup_structure(&[vec![t.clone()], vec![u]]);
        assert_eq!(s, AbelianStructure { torsion: vec![4], free_rank: 1 });
    }

    #[test]
    fn display() {
        let s = AbelianStructure { torsion: vec![5, 15], free_rank: 0 };
        assert_eq!(s.to_string(), "Z5+Z15");
        assert_eq!(AbelianStructure { torsion: vec![], free_rank: 2 }.to_string(), "Z^2");
        assert_eq!(AbelianStructure::trivial().to_string(), "0");
    }
}
