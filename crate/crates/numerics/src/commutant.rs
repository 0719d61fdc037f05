//! Relative commutants of Hadamard subfactors by Ocneanu compactness.
//!
//! For the commuting square `ℂ ⊂ Δ`, `UΔU* ⊂ M_n` one algebra of the pair
//! `{Δ, UΔU*}` seeds the vertical tower `Δ ⊂ M_n ⊂ …` and the other is
//! iterated alongside it; `N'∩M_k` is the commutant of the first inside
//! the `(k+1)`-th algebra of the second chain.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use htwist_core::{HadamardMatrix, SymbolBinding};

use crate::algebra::{commutator, CMat, ConcreteAlgebra, CONSTRUCTION_TOL};
use crate::error::{NumericsError, Result};
use crate::tower::TowerLevel;

/// Relative threshold below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-7;
/// Singular values within this factor of `RANK_TOL` are ambiguous.
pub const GUARD_BAND: f64 = 10.0;

/// Which algebra's commutant is taken.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TowerOrientation {
    /// Commutant of `Δ` inside the chain grown from `UΔU*`.
    DiagonalFirst,
    /// Commutant of `UΔU*` inside the chain grown from `Δ`.
    FourierFirst,
}

/// Largest deviation of `u` from a unitary with all entries of modulus
/// `n^{-1/2}`; zero exactly when the square `ℂ ⊂ Δ, UΔU* ⊂ M_n` commutes.
pub fn commuting_square_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    if n == 0 || u.ncols() != n {
        return f64::INFINITY;
    }
    let unitary = (u.adjoint() * u - CMat::identity(n, n)).camax();
    let flat = u.iter().map(|z| (z.norm_sqr() - 1.0 / n as f64).abs()).fold(0.0, f64::max);
    unitary.max(flat * n as f64)
}

/// `E_Δ(p) ∈ ℂ` for every minimal projection `p` of `UΔU*`.
pub fn commuting_square_holds(u: &CMat) -> bool {
    let n = u.nrows();
    if u.ncols() != n || (u.adjoint() * u - CMat::identity(n, n)).camax() > CONSTRUCTION_TOL {
        return false;
    }
    (0..n).all(|i| {
        let v = u.column(i);
        let p = &v * v.adjoint();
        let target = 1.0 / n as f64;
        (0..n).all(|c| (p[(c, c)].re - target).abs() <= CONSTRUCTION_TOL)
    })
}

fn gate(u: &CMat) -> Result<()> {
    if commuting_square_defect(u) > CONSTRUCTION_TOL {
        return Err(NumericsError::NotHadamard);
    }
    Ok(())
}

/// Null space of `m` (columns of the returned matrix), with the rank decided
/// relative to the largest singular value.
fn null_space(m: &CMat) -> Result<CMat> {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let max = svd.singular_values.max();
    if max == 0.0 {
        return Ok(CMat::identity(cols, cols));
    }
    let mut null = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let rel = s / max;
        if rel < RANK_TOL / GUARD_BAND {
            null.push(v_t.row(i).adjoint());
        } else if rel < RANK_TOL * GUARD_BAND {
            return Err(NumericsError::Precision {
                value: rel,
                tol: RANK_TOL,
            });
        }
    }
    Ok(CMat::from_columns(&null))
}

fn flatten(x: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(x.as_slice())
}

/// `{x ∈ A : x·t = t·x}` as a list of matrices.
fn commutant_in(a: &ConcreteAlgebra, t: &CMat) -> Result<Vec<CMat>> {
    let cols: Vec<DVector<Complex64>> = a.basis().iter().map(|b| flatten(&commutator(t, b))).collect();
    let null = null_space(&CMat::from_columns(&cols))?;
    Ok(null
        .column_iter()
        .map(|c| a.combine(c.as_slice()))
        .collect())
}

fn generic_diagonal(n: usize) -> CMat {
    CMat::from_diagonal(&DVector::from_fn(n, |i, _| Complex64::new((i + 1) as f64, 0.0)))
}

/// Commutant basis through the explicit tower.
fn tower_commutant(u: &CMat, level: usize, orientation: TowerOrientation) -> Result<Vec<CMat>> {
    let n = u.nrows();
    let diag = ConcreteAlgebra::diagonal(n);
    let fourier = diag.conjugated(u);
    let (mut small, mut chain, mut target) = match orientation {
        TowerOrientation::DiagonalFirst => (diag, fourier, generic_diagonal(n)),
        TowerOrientation::FourierFirst => {
            let t = u * generic_diagonal(n) * u.adjoint();
            (fourier, diag, t)
        }
    };
    let mut big = ConcreteAlgebra::full(n);
    for step in 0..level {
        let tower = TowerLevel::new(&small, &big)?;
        chain = tower.extend(&chain)?;
        target = tower.rep(&target);
        if step + 1 < level {
            small = tower.rep_algebra(&big);
            big = tower.b2()?;
        }
    }
    commutant_in(&chain, &target)
}

/// Level-one commutant from the closed form of `⟨UΔU*, e⟩`.
///
/// With `v_i` the columns of `U`, the elements `p_i·e·p_j` act on
/// `L²(M_n)` as `Σ_c conj(v_i(c))·v_j(c)·(v_i v_j*) ⊗ E_cc`; commuting with
/// `Δ ⊗ 1` forces each block to be diagonal.
fn level_one_blocks(u: &CMat) -> Result<Vec<Vec<CMat>>> {
    let n = u.nrows();
    let coeff = |c: usize, i: usize, j: usize, r: usize, s: usize| {
        u[(c, i)].conj() * u[(c, j)] * u[(r, i)] * u[(s, j)].conj()
    };
    let rows = n * n * (n - 1);
    let mut m = CMat::zeros(rows.max(1), n * n);
    let mut row = 0;
    for c in 0..n {
        for r in 0..n {
            for s in 0..n {
                if r == s {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        m[(row, i * n + j)] = coeff(c, i, j, r, s);
                    }
                }
                row += 1;
            }
        }
    }
    let null = null_space(&m)?;
    Ok(null
        .column_iter()
        .map(|x| {
            (0..n)
                .map(|c| {
                    CMat::from_fn(n, n, |r, s| {
                        (0..n * n).map(|k| x[k] * coeff(c, k / n, k % n, r, s)).sum()
                    })
                })
                .collect()
        })
        .collect())
}

/// The orientation fixed by requiring level 0 to give 1 on `F_{ℤ₂}` and
/// level 1 to give `n` on `F_{ℤ_n}` for `n ∈ {2, 3, 4}`.
pub fn tower_orientation() -> Result<TowerOrientation> {
    static CHOSEN: OnceLock<Option<TowerOrientation>> = OnceLock::new();
    let chosen = CHOSEN.get_or_init(|| {
        [TowerOrientation::DiagonalFirst, TowerOrientation::FourierFirst]
            .into_iter()
            .find(|&o| passes_ladder(o).unwrap_or(false))
    });
    chosen.ok_or(NumericsError::Orientation)
}

fn fourier_unitary(n: usize) -> CMat {
    let scale = (n as f64).sqrt();
    CMat::from_fn(n, n, |i, j| {
        Complex64::from_polar(1.0 / scale, 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
    })
}

fn passes_ladder(orientation: TowerOrientation) -> Result<bool> {
    if tower_commutant(&fourier_unitary(2), 0, orientation)?.len() != 1 {
        return Ok(false);
    }
    for n in 2..=4 {
        if tower_commutant(&fourier_unitary(n), 1, orientation)?.len() != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Selects the closed-form path at level one and the explicit tower
/// otherwise.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Tower,
}

/// `dim N'∩M_level` for the subfactor of the unitary `u = n^{-1/2}·H`.
pub fn relative_commutant_dim_unitary(u: &CMat, level: usize, method: Method) -> Result<usize> {
    Ok(commutant_basis(u, level, method)?.len())
}

enum Basis {
    Blocks(Vec<Vec<CMat>>),
    Matrices(Vec<CMat>),
}

impl Basis {
    fn len(&self) -> usize {
        match self {
            Basis::Blocks(b) => b.len(),
            Basis::Matrices(m) => m.len(),
        }
    }
}

fn commutant_basis(u: &CMat, level: usize, method: Method) -> Result<Basis> {
    gate(u)?;
    if level > 2 {
        return Err(NumericsError::UnsupportedLevel(level));
    }
    let orientation = tower_orientation()?;
    if level == 1 && method == Method::Auto && orientation == TowerOrientation::DiagonalFirst {
        return Ok(Basis::Blocks(level_one_blocks(u)?));
    }
    Ok(Basis::Matrices(tower_commutant(u, level, orientation)?))
}

pub fn relative_commutant_dim(h: &HadamardMatrix, level: usize) -> Result<usize> {
    relative_commutant_dim_unitary(&h.to_unitary(&SymbolBinding::default()), level, Method::Auto)
}

/// Whether `N'∩M_level` is commutative, by pairwise commutators of a basis.
pub fn commutant_is_abelian_unitary(u: &CMat, level: usize, method: Method) -> Result<bool> {
    let tol = RANK_TOL;
    Ok(match commutant_basis(u, level, method)? {
        Basis::Matrices(m) => m
            .iter()
            .enumerate()
            .all(|(i, a)| m[i + 1..].iter().all(|b| commutator(a, b).camax() <= tol * (1.0 + a.camax() * b.camax()))),
        Basis::Blocks(blocks) => blocks.iter().enumerate().all(|(i, a)| {
            blocks[i + 1..].iter().all(|b| {
                a.iter()
                    .zip(b)
                    .all(|(x, y)| commutator(x, y).camax() <= tol * (1.0 + x.camax() * y.camax()))
            })
        }),
    })
}

pub fn commutant_is_abelian(h: &HadamardMatrix, level: usize) -> Result<bool> {
    commutant_is_abelian_unitary(&h.to_unitary(&SymbolBinding::default()), level, Method::Auto)
}

/// Dense matrix of a real `±1` sign pattern scaled to a unitary.
pub fn unitary_from_signs(signs: &DMatrix<i8>) -> CMat {
    let scale = (signs.nrows() as f64).sqrt();
    signs.map(|s| Complex64::new(s as f64 / scale, 0.0))
}
