//! Words in the free product `H ∗ K` evaluated on the coordinate algebra
//! `l∞(H) ⊗ l∞(K)`.
//!
//! The image of a word is a [`TwistedPerm`]: a shift `σ = (h, k)` of the index
//! set together with a phase array. Composition is
//! `(A₁, σ₁)∘(A₂, σ₂) = (A₁·σ₁(A₂), σ₁σ₂)`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::group::{Elem, FinGroup};
use crate::hadamard::{fourier_conjugate, fourier_matrix, twisted_tensor, HadamardMatrix};
use crate::phase::{Phase, PhaseArray};
use crate::snf::{subgroup_structure, AbelianStructure};

/// How `H` shifts the first index of an array.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `Y(x, ·) ↦ Y(h⁻¹x, ·)`
    Left,
    /// `Y(x, ·) ↦ Y(xh, ·)`
    Right,
}

/// A phase array over `H × K` together with the two groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    h: FinGroup,
    k: FinGroup,
    values: PhaseArray,
    orientation: Orientation,
}

impl Twist {
    /// Orientation defaults to [`Orientation::Right`] when `H` is a table
    /// group and to [`Orientation::Left`] otherwise.
    pub fn new(h: FinGroup, k: FinGroup, values: PhaseArray) -> Result<Self> {
        if values.rows() != h.order() || values.cols() != k.order() {
            return Err(Error::SizeMismatch {
                expected: h.order() * k.order(),
                found: values.rows() * values.cols(),
            });
        }
        let orientation = if h.is_table() {
            Orientation::Right
        } else {
            Orientation::Left
        };
        Ok(Twist {
            h,
            k,
            values,
            orientation,
        })
    }

    /// Row-major (over `H`, then `K`) phase literals.
    pub fn from_literals(h: FinGroup, k: FinGroup, literals: &[&str]) -> Result<Self> {
        let entries = literals
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Phase>>>()?;
        let values = PhaseArray::new(h.order(), k.order(), entries)?;
        Twist::new(h, k, values)
    }

    pub fn ones(h: FinGroup, k: FinGroup) -> Self {
        let values = PhaseArray::ones(h.order(), k.order());
        Twist::new(h, k, values).expect("sizes agree")
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn h(&self) -> &FinGroup {
        &self.h
    }

    pub fn k(&self) -> &FinGroup {
        &self.k
    }

    pub fn values(&self) -> &PhaseArray {
        &self.values
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_rational(&self) -> bool {
        self.values.entries().iter().all(Phase::is_rational)
    }

    /// `(1 ⊗ H_K)·T·(H_H* ⊗ 1)` for abelian `H` and `K`.
    pub fn matrix(&self) -> Result<HadamardMatrix> {
        twisted_tensor(
            &fourier_conjugate(&self.h)?,
            &fourier_matrix(&self.k)?,
            &self.values,
        )
    }

    /// Shift action `ρ_σ` of `σ = (h, k)` on arrays over `H × K`.
    pub fn shift(&self, (h, k): (Elem, Elem), y: &PhaseArray) -> PhaseArray {
        let kinv = self.k.inv(k);
        let col_src: Vec<Elem> = self.k.elements().map(|c| self.k.mul(kinv, c)).collect();
        let row_src: Vec<Elem> = match self.orientation {
            Orientation::Left => {
                let hinv = self.h.inv(h);
                self.h.elements().map(|r| self.h.mul(hinv, r)).collect()
            }
            Orientation::Right => self.h.elements().map(|r| self.h.mul(r, h)).collect(),
        };
        y.reindexed(&row_src, &col_src)
    }

    pub fn mul_shift(&self, a: (Elem, Elem), b: (Elem, Elem)) -> (Elem, Elem) {
        (self.h.mul(a.0, b.0), self.k.mul(a.1, b.1))
    }

    pub fn inv_shift(&self, a: (Elem, Elem)) -> (Elem, Elem) {
        (self.h.inv(a.0), self.k.inv(a.1))
    }

    pub fn identity(&self) -> TwistedPerm {
        TwistedPerm {
            shift: (0, 0),
            array: PhaseArray::ones(self.h.order(), self.k.order()),
        }
    }

    /// Image of the letter `h`: `(T·ρ_h(T̄), (h, 1))`.
    pub fn h_image(&self, h: Elem) -> TwistedPerm {
        let moved = self.shift((h, 0), &self.values.conj());
        TwistedPerm {
            shift: (h, 0),
            array: &self.values * &moved,
        }
    }

    /// Image of the letter `k`: `(1, (1, k))`.
    pub fn k_image(&self, k: Elem) -> TwistedPerm {
        TwistedPerm {
            shift: (0, k),
            array: PhaseArray::ones(self.h.order(), self.k.order()),
        }
    }

    pub fn compose(&self, a: &TwistedPerm, b: &TwistedPerm) -> TwistedPerm {
        TwistedPerm {
            shift: self.mul_shift(a.shift, b.shift),
            array: &a.array * &self.shift(a.shift, &b.array),
        }
    }

    pub fn inverse(&self, a: &TwistedPerm) -> TwistedPerm {
        let inv = self.inv_shift(a.shift);
        TwistedPerm {
            shift: inv,
            array: self.shift(inv, &a.array.conj()),
        }
    }

    pub fn evaluate(&self, word: &Word) -> TwistedPerm {
        word.letters.iter().fold(self.identity(), |acc, l| {
            let img = match l.side {
                Side::H => self.h_image(l.elem),
                Side::K => self.k_image(l.elem),
            };
            self.compose(&acc, &img)
        })
    }

    /// `T·ρ_h(T̄)·ρ_k(T̄)·ρ_{hk}(T)`, the array of `h k h⁻¹ k⁻¹`.
    pub fn commutator_array(&self, h: Elem, k: Elem) -> PhaseArray {
        let t = &self.values;
        let tc = t.conj();
        let a = t * &self.shift((h, 0), &tc);
        let b = &self.shift((0, k), &tc) * &self.shift((h, k), t);
        &a * &b
    }

    pub fn parse_word(&self, literal: &str) -> Result<Word> {
        Word::parse(literal, &self.h, &self.k)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    H,
    K,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub side: Side,
    pub elem: Elem,
}

impl Letter {
    pub fn h(elem: Elem) -> Self {
        Letter { side: Side::H, elem }
    }

    pub fn k(elem: Elem) -> Self {
        Letter { side: Side::K, elem }
    }
}

/// A reduced word: no identity letters, no two adjacent letters from the
/// same factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn new(letters: impl IntoIterator<Item = Letter>, h: &FinGroup, k: &FinGroup) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            let mut l = l;
            if let Some(last) = out.last() {
                if last.side == l.side {
                    let g = if l.side == Side::H { h } else { k };
                    l.elem = g.mul(last.elem, l.elem);
                    out.pop();
                }
            }
            if l.elem != 0 {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// `h k h⁻¹ k⁻¹`.
    pub fn commutator(h: Elem, k: Elem, hg: &FinGroup, kg: &FinGroup) -> Self {
        Word::new(
            [
                Letter::h(h),
                Letter::k(k),
                Letter::h(hg.inv(h)),
                Letter::k(kg.inv(k)),
            ],
            hg,
            kg,
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word, h: &FinGroup, k: &FinGroup) -> Self {
        Word::new(self.letters.iter().chain(&other.letters).copied(), h, k)
    }

    pub fn inverse(&self, h: &FinGroup, k: &FinGroup) -> Self {
        let inv = self.letters.iter().rev().map(|l| Letter {
            side: l.side,
            elem: if l.side == Side::H { h.inv(l.elem) } else { k.inv(l.elem) },
        });
        Word::new(inv, h, k)
    }

    pub fn pow(&self, n: u32, h: &FinGroup, k: &FinGroup) -> Self {
        (0..n).fold(Word::empty(), |acc, _| acc.concat(self, h, k))
    }

    /// Parses `"h[1] k[1,0]^-1 …"`. Bracket contents are element coordinates
    /// (see [`FinGroup::coords`]); `1` or an empty string is the empty word.
    pub fn parse(literal: &str, h: &FinGroup, k: &FinGroup) -> Result<Self> {
        let mut letters = Vec::new();
        for token in literal.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (side, group) = match token.chars().next() {
                Some('h') => (Side::H, h),
                Some('k') => (Side::K, k),
                _ => return Err(parse_err("word", literal, format!("bad letter {token:?}"))),
            };
            let open = token.find('[');
            let close = token.find(']');
            let (Some(open), Some(close)) = (open, close) else {
                return Err(parse_err("word", literal, format!("missing brackets in {token:?}")));
            };
            if open != 1 || close < open {
                return Err(parse_err("word", literal, format!("malformed letter {token:?}")));
            }
            let coords = token[open + 1..close]
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<i64>, _>>()
                .map_err(|_| parse_err("word", literal, format!("bad coordinates in {token:?}")))?;
            let elem = group.from_coords(&coords)?;
            let rest = &token[close + 1..];
            let exp: i64 = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| parse_err("word", literal, format!("bad exponent in {token:?}")))?
            };
            letters.push(Letter {
                side,
                elem: group.pow(elem, exp),
            });
        }
        Ok(Word::new(letters, h, k))
    }

    pub fn display(&self, h: &FinGroup, k: &FinGroup) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l.side {
                Side::H => format!("h{}", h.elem_label(l.elem)),
                Side::K => format!("k{}", k.elem_label(l.elem)),
            })
            .collect();
        parts.join(" ")
    }
}

/// Restriction of a word's automorphism to `l∞(H) ⊗ l∞(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedPerm {
    pub shift: (Elem, Elem),
    pub array: PhaseArray,
}

impl TwistedPerm {
    pub fn is_identity(&self) -> bool {
        self.shift == (0, 0) && self.array.is_identity()
    }

    /// Same automorphism with a column-normalized array.
    pub fn column_normalized(&self) -> Self {
        TwistedPerm {
            shift: self.shift,
            array: self.array.column_normalized(),
        }
    }

    /// Same class modulo inner automorphisms, array in standard form.
    pub fn standardized(&self) -> Self {
        TwistedPerm {
            shift: self.shift,
            array: self.array.standardized(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismClass {
    Trivial,
    /// Implemented by `Ad u` with `u` a phase vector over `H`, `u(1) = 1`.
    Inner(Vec<Phase>),
    Outer,
}

pub fn classify_automorphism(p: &TwistedPerm) -> AutomorphismClass {
    if p.shift != (0, 0) {
        return AutomorphismClass::Outer;
    }
    if p.array.is_column_function() {
        return AutomorphismClass::Trivial;
    }
    if p.array.is_product_form() {
        let a = &p.array;
        let base = a.get(0, 0).conj();
        return AutomorphismClass::Inner((0..a.rows()).map(|r| a.get(r, 0) * &base).collect());
    }
    AutomorphismClass::Outer
}

/// Column-normalized array of the commutator `h k h⁻¹ k⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorGenerator {
    pub h: Elem,
    pub k: Elem,
    pub array: PhaseArray,
}

pub fn commutator_generators(twist: &Twist) -> Vec<CommutatorGenerator> {
    let mut out = Vec::new();
    for h in twist.h().elements().skip(1) {
        for k in twist.k().elements().skip(1) {
            let word = Word::commutator(h, k, twist.h(), twist.k());
            out.push(CommutatorGenerator {
                h,
                k,
                array: twist.evaluate(&word).array.column_normalized(),
            });
        }
    }
    out
}

/// Default cap on the number of enumerated elements of the commutator image.
pub const DEFAULT_ENUMERATION_BOUND: usize = 1_000_000;

/// Structure of the image of the commutator subgroup `N₁ ⊂ H ∗ K`.
#[derive(Clone, Debug)]
pub struct CommGroupData {
    pub generators: Vec<CommutatorGenerator>,
    /// The image modulo trivial automorphisms (column functions).
    pub ntilde: AbelianStructure,
    /// The image modulo inner automorphisms: `N = Ñ / S`.
    pub n: AbelianStructure,
    /// Inner subgroup `S ⊂ Ñ` with implementing vectors `u_s` over `H`
    /// (`u_s(1) = 1`); only available when `Ñ` is finite.
    pub inner: Option<Vec<Vec<Phase>>>,
}

impl CommGroupData {
    pub fn is_finite(&self) -> bool {
        self.n.is_finite()
    }

    pub fn inner_structure(&self) -> Option<AbelianStructure> {
        let inner = self.inner.as_ref()?;
        let gens: Vec<Vec<Phase>> = inner
            .iter()
            .filter(|u| u.iter().any(|p| !p.is_one()))
            .cloned()
            .collect();
        Some(subgroup_structure(&gens))
    }
}

fn flatten(arrays: impl Iterator<Item = PhaseArray>) -> Vec<Vec<Phase>> {
    arrays.map(|a| a.entries().to_vec()).collect()
}

/// Closure of `gens` under pointwise multiplication; the identity first.
pub fn enumerate_subgroup(gens: &[PhaseArray], bound: usize) -> Result<Vec<PhaseArray>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let one = PhaseArray::ones(first.rows(), first.cols());
    let mut seen: HashSet<PhaseArray> = HashSet::from([one.clone()]);
    let mut out = vec![one];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = &out[i] * g;
            if seen.insert(y.clone()) {
                if out.len() >= bound {
                    return Err(Error::SizeBound {
                        what: "commutator image",
                        size: out.len() + 1,
                        bound,
                    });
                }
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

pub fn commutator_group(twist: &Twist, bound: usize) -> Result<CommGroupData> {
    let generators = commutator_generators(twist);
    let ntilde = subgroup_structure(&flatten(generators.iter().map(|g| g.array.clone())));
    let n = subgroup_structure(&flatten(generators.iter().map(|g| g.array.standardized())));
    let inner = match ntilde.order() {
        Some(order) if (order as usize) <= bound => {
            let arrays: Vec<PhaseArray> = generators.iter().map(|g| g.array.clone()).collect();
            let elements = enumerate_subgroup(&arrays, bound)?;
            let mut inner: Vec<Vec<Phase>> = elements
                .iter()
                .filter(|a| a.is_row_function())
                .map(|a| (0..a.rows()).map(|r| a.get(r, 0).clone()).collect())
                .collect();
            inner.sort();
            Some(inner)
        }
        Some(order) => {
            return Err(Error::SizeBound {
                what: "commutator image",
                size: order as usize,
                bound,
            })
        }
        None => None,
    };
    Ok(CommGroupData {
        generators,
        ntilde,
        n,
        inner,
    })
}

impl fmt::Display for TwistedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shift ({}, {})", self.shift.0, self.shift.1)?;
        write!(f, "{}", self.array)
    }
}
