//! Complex Hadamard matrices with exact phase entries.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{parse_err, Error, Result};
use crate::group::FinGroup;
use crate::phase::{sum_vanishes, Phase, PhaseArray, SymbolBinding};

/// Numerical tolerance for unitarity when entries carry irrational symbols.
pub const IRRATIONAL_TOLERANCE: f64 = 1e-9;

/// An `n × n` matrix with entries `n^{-1/2}·e^{2πi·angle}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HadamardMatrix {
    angles: PhaseArray,
}

impl HadamardMatrix {
    /// Validates unitarity.
    pub fn new(angles: PhaseArray) -> Result<Self> {
        if angles.rows() != angles.cols() {
            return Err(Error::SizeMismatch {
                expected: angles.rows(),
                found: angles.cols(),
            });
        }
        if !is_hadamard(&angles) {
            return Err(Error::NotHadamard);
        }
        Ok(HadamardMatrix { angles })
    }

    pub fn size(&self) -> usize {
        self.angles.rows()
    }

    pub fn angles(&self) -> &PhaseArray {
        &self.angles
    }

    pub fn angle(&self, i: usize, j: usize) -> &Phase {
        self.angles.get(i, j)
    }

    pub fn is_rational(&self) -> bool {
        self.angles.entries().iter().all(Phase::is_rational)
    }

    /// Conjugate transpose, again a Hadamard matrix.
    pub fn adjoint(&self) -> Self {
        let n = self.size();
        HadamardMatrix {
            angles: PhaseArray::from_fn(n, n, |i, j| self.angle(j, i).conj()),
        }
    }

    /// The unitary complex matrix, normalized by `n^{-1/2}`.
    pub fn to_unitary(&self, binding: &SymbolBinding) -> DMatrix<Complex64> {
        let n = self.size();
        let scale = 1.0 / (n as f64).sqrt();
        DMatrix::from_fn(n, n, |i, j| self.angle(i, j).to_complex(binding) * scale)
    }

    /// Equivalent matrix with first row and first column all ones.
    pub fn dephased(&self) -> Self {
        HadamardMatrix {
            angles: self.angles.standardized(),
        }
    }

    pub fn permuted(&self, row_src: &[usize], col_src: &[usize]) -> Self {
        HadamardMatrix {
            angles: self.angles.reindexed(row_src, col_src),
        }
    }
}

impl fmt::Display for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.angles)
    }
}

/// Exact row-orthogonality test for rational angles; numerical (with the
/// default symbol binding) when a row difference keeps an irrational symbol.
pub fn is_hadamard(angles: &PhaseArray) -> bool {
    let n = angles.rows();
    if n != angles.cols() || n == 0 {
        return false;
    }
    let binding = SymbolBinding::default();
    for i in 0..n {
        for j in i + 1..n {
            let diffs: Vec<Phase> = (0..n)
                .map(|k| angles.get(i, k) * &angles.get(j, k).conj())
                .collect();
            let zero = match sum_vanishes(&diffs) {
                Some(z) => z,
                None => {
                    let s: Complex64 = diffs.iter().map(|p| p.to_complex(&binding)).sum();
                    s.norm() < IRRATIONAL_TOLERANCE * n as f64
                }
            };
            if !zero {
                return false;
            }
        }
    }
    true
}

/// Character table of an abelian group as a Hadamard matrix: entry `(i, j)`
/// is `ρ_j(i)`.
pub fn fourier_matrix(group: &FinGroup) -> Result<HadamardMatrix> {
    let chars = group.characters()?;
    let n = group.order();
    Ok(HadamardMatrix {
        angles: PhaseArray::from_fn(n, n, |i, j| chars[j][i].clone()),
    })
}

/// Conjugate transpose of [`fourier_matrix`].
pub fn fourier_conjugate(group: &FinGroup) -> Result<HadamardMatrix> {
    Ok(fourier_matrix(group)?.adjoint())
}

/// `(1 ⊗ H2)·T·(H1 ⊗ 1)`: entry `((i, j), (k, l))` at row `i·n2 + j`, column
/// `k·n2 + l` is `H1[i,k]·H2[j,l]·T[i,l]`.
pub fn twisted_tensor(
    h1: &HadamardMatrix,
    h2: &HadamardMatrix,
    twist: &PhaseArray,
) -> Result<HadamardMatrix> {
    let (n1, n2) = (h1.size(), h2.size());
    if twist.rows() != n1 || twist.cols() != n2 {
        return Err(Error::SizeMismatch {
            expected: n1 * n2,
            found: twist.rows() * twist.cols(),
        });
    }
    let n = n1 * n2;
    let angles = PhaseArray::from_fn(n, n, |row, col| {
        let (i, j) = (row / n2, row % n2);
        let (k, l) = (col / n2, col % n2);
        &(h1.angle(i, k) * h2.angle(j, l)) * twist.get(i, l)
    });
    Ok(HadamardMatrix { angles })
}

/// Plain tensor product `H1 ⊗ H2`.
pub fn tensor(h1: &HadamardMatrix, h2: &HadamardMatrix) -> HadamardMatrix {
    twisted_tensor(h1, h2, &PhaseArray::ones(h1.size(), h2.size()))
        .expect("all-ones twist has matching size")
}

pub const DEFAULT_EQUIVALENCE_BOUND: usize = 8;

/// Decides whether `b` arises from `a` by row/column permutations and
/// row/column phase multiplications. Exhaustive; limited to `n ≤ bound`.
pub fn hadamard_equivalent(a: &HadamardMatrix, b: &HadamardMatrix, bound: usize) -> Result<bool> {
    let n = a.size();
    if b.size() != n {
        return Ok(false);
    }
    if n > bound {
        return Err(Error::SizeBound {
            what: "equivalence search matrix",
            size: n,
            bound,
        });
    }
    let target = column_multiset(b.dephased().angles(), &(0..n).collect::<Vec<_>>());
    let swap_front = |x: usize| {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(0, x);
        v
    };
    for r in 0..n {
        for c in 0..n {
            let base = a.permuted(&swap_front(r), &swap_front(c)).dephased();
            let mut rows: Vec<usize> = (0..n).collect();
            if search_rows(base.angles(), &mut rows, 1, &target) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn column_multiset(m: &PhaseArray, rows: &[usize]) -> Vec<Vec<Phase>> {
    let mut cols: Vec<Vec<Phase>> = (0..m.cols())
        .map(|c| rows.iter().map(|&r| m.get(r, c).clone()).collect())
        .collect();
    cols.sort();
    cols
}

/// Permutes rows `pos..` of `rows` (row 0 stays fixed) looking for a row
/// order whose column multiset equals `target`. Prefixes are pruned by
/// comparing truncated column multisets.
fn search_rows(m: &PhaseArray, rows: &mut Vec<usize>, pos: usize, target: &[Vec<Phase>]) -> bool {
    let prefix_ok = {
        let mut want: Vec<Vec<Phase>> = target.iter().map(|c| c[..pos].to_vec()).collect();
        want.sort();
        column_multiset(m, &rows[..pos]) == want
    };
    if !prefix_ok {
        return false;
    }
    if pos == rows.len() {
        return true;
    }
    for i in pos..rows.len() {
        rows.swap(pos, i);
        if search_rows(m, rows, pos + 1, target) {
            return true;
        }
        rows.swap(pos, i);
    }
    false
}

/// Parses a real Hadamard matrix written as lines of `+` and `-`.
pub fn parse_real_hadamard(text: &str) -> Result<HadamardMatrix> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let n = lines.len();
    let mut entries = Vec::with_capacity(n * n);
    for line in &lines {
        if line.chars().count() != n {
            return Err(parse_err("real Hadamard matrix", text, "matrix is not square"));
        }
        for ch in line.chars() {
            entries.push(match ch {
                '+' => Phase::one(),
                '-' => Phase::new(1, 2),
                other => {
                    return Err(parse_err(
                        "real Hadamard matrix",
                        text,
                        format!("invalid character {other:?}"),
                    ))
                }
            });
        }
    }
    HadamardMatrix::new(PhaseArray::new(n, n, entries)?)
}

/// Parses one row per line of comma-separated phase literals.
pub fn parse_complex_hadamard(text: &str) -> Result<HadamardMatrix> {
    let rows: Vec<Vec<Phase>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::parse).collect::<Result<Vec<Phase>>>())
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(parse_err("complex Hadamard matrix", text, "matrix is not square"));
    }
    HadamardMatrix::new(PhaseArray::new(n, n, rows.concat())?)
}
