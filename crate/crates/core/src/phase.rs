//! Exact unit-modulus scalars.
//!
//! A [`Phase`] stores the angle of `e^{2πi·θ}` additively as a fraction of a
//! full turn. Besides the rational part (kept reduced in `[0, 1)`), a phase may
//! carry rational multiples of formal irrational symbols `t1, t2, …`. Symbols
//! are treated as rationally independent of each other and of `1`, so a phase
//! with a symbol never has finite order and equality stays exact.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{parse_err, Error, Result};

/// Identifier of a formal irrational angle `tN`.
pub type Symbol = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    turn: Rational64,
    irr: BTreeMap<Symbol, Rational64>,
}

/// Multiplicative order of a phase.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PhaseOrder {
    Finite(u64),
    Infinite,
}

fn wrap(r: Rational64) -> Rational64 {
    r - r.floor()
}

impl Phase {
    /// `e^{2πi·num/den}`.
    ///
    /// Panics if `den == 0`; use the `FromStr` impl for untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_turn(Rational64::new(num, den))
    }

    pub fn from_turn(turn: Rational64) -> Self {
        Phase {
            turn: wrap(turn),
            irr: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_turn(Rational64::zero())
    }

    /// The phase `e^{2πi·coeff·t_symbol}`.
    pub fn symbol(symbol: Symbol, coeff: Rational64) -> Self {
        let mut irr = BTreeMap::new();
        if !coeff.is_zero() {
            irr.insert(symbol, coeff);
        }
        Phase {
            turn: Rational64::zero(),
            irr,
        }
    }

    /// Rational part of the angle, reduced into `[0, 1)`.
    pub fn turn(&self) -> Rational64 {
        self.turn
    }

    pub fn irr_coeffs(&self) -> &BTreeMap<Symbol, Rational64> {
        &self.irr
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.turn.is_zero() && self.irr.is_empty()
    }

    pub fn conj(&self) -> Self {
        Phase {
            turn: wrap(-self.turn),
            irr: self.irr.iter().map(|(&s, &c)| (s, -c)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Phase::one();
        }
        Phase {
            turn: wrap(self.turn * Rational64::from_integer(n)),
            irr: self
                .irr
                .iter()
                .map(|(&s, &c)| (s, c * Rational64::from_integer(n)))
                .collect(),
        }
    }

    pub fn order(&self) -> PhaseOrder {
        if !self.irr.is_empty() {
            return PhaseOrder::Infinite;
        }
        PhaseOrder::Finite(*self.turn.denom() as u64)
    }

    /// Floating-point value with symbols bound to `binding`.
    pub fn to_complex(&self, binding: &SymbolBinding) -> Complex64 {
        let mut angle = self.turn.to_f64().unwrap_or(0.0);
        for (&s, c) in &self.irr {
            angle += c.to_f64().unwrap_or(0.0) * binding.value(s);
        }
        Complex64::from_polar(1.0, TAU * angle)
    }

    /// Least common multiple of all denominators (rational part and symbol
    /// coefficients).
    pub fn common_denominator(&self) -> i64 {
        self.irr
            .values()
            .fold(*self.turn.denom(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::one()
    }
}

impl Mul for &Phase {
    type Output = Phase;

    fn mul(self, rhs: &Phase) -> Phase {
        let mut irr = self.irr.clone();
        for (&s, &c) in &rhs.irr {
            let e = irr.entry(s).or_insert_with(Rational64::zero);
            *e += c;
            if e.is_zero() {
                irr.remove(&s);
            }
        }
        Phase {
            turn: wrap(self.turn + rhs.turn),
            irr,
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        &self * &rhs
    }
}

impl MulAssign<&Phase> for Phase {
    fn mul_assign(&mut self, rhs: &Phase) {
        *self = &*self * rhs;
    }
}

/// `phase_mul` in free-function form.
pub fn phase_mul(a: &Phase, b: &Phase) -> Phase {
    a * b
}

fn fmt_ratio(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.turn.is_zero() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", fmt_ratio(&self.turn))?;
        }
        for (s, c) in &self.irr {
            if c.is_negative() {
                write!(f, " - {}*t{}", fmt_ratio(&-*c), s)?;
            } else {
                write!(f, " + {}*t{}", fmt_ratio(c), s)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

fn parse_ratio(input: &str, term: &str) -> Result<Rational64> {
    let (n, d) = match term.split_once('/') {
        Some((n, d)) => (n, d),
        None => (term, "1"),
    };
    let n: i64 = n
        .parse()
        .map_err(|_| parse_err("phase", input, format!("bad numerator {n:?}")))?;
    let d: i64 = d
        .parse()
        .map_err(|_| parse_err("phase", input, format!("bad denominator {d:?}")))?;
    if d == 0 {
        return Err(parse_err("phase", input, "zero denominator"));
    }
    Ok(Rational64::new(n, d))
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_err("phase", input, "empty literal"));
        }
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);

        let mut phase = Phase::one();
        for term in &terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term.as_str()),
            };
            if body.is_empty() {
                return Err(parse_err("phase", input, "dangling sign"));
            }
            let part = if let Some(pos) = body.find('t') {
                let (coeff, sym) = body.split_at(pos);
                let coeff = match coeff.strip_suffix('*') {
                    Some(c) => parse_ratio(input, c)?,
                    None if coeff.is_empty() => Rational64::one(),
                    None => return Err(parse_err("phase", input, "expected '*' before symbol")),
                };
                let sym: Symbol = sym[1..]
                    .parse()
                    .map_err(|_| parse_err("phase", input, format!("bad symbol {sym:?}")))?;
                Phase::symbol(sym, coeff)
            } else {
                Phase::from_turn(parse_ratio(input, body)?)
            };
            phase *= &if negative { part.conj() } else { part };
        }
        Ok(phase)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Numerical values substituted for irrational symbols when a float is
/// needed.
#[derive(Clone, Debug, Default)]
pub struct SymbolBinding {
    values: BTreeMap<Symbol, f64>,
}

impl SymbolBinding {
    pub fn with(mut self, symbol: Symbol, value: f64) -> Self {
        self.values.insert(symbol, value);
        self
    }

    /// Unbound symbols default to the fractional part of `sqrt(p_N)`, `p_N`
    /// the N-th prime.
    pub fn value(&self, symbol: Symbol) -> f64 {
        if let Some(v) = self.values.get(&symbol) {
            return *v;
        }
        let p = nth_prime(symbol.max(1) as usize) as f64;
        p.sqrt().fract()
    }
}

fn nth_prime(n: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 1u64;
    while count < n {
        candidate += 1;
        if (2..).take_while(|d| d * d <= candidate).all(|d| candidate % d != 0) {
            count += 1;
        }
    }
    candidate
}

fn cyclotomic(n: usize) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            poly = poly_div_exact(&poly, &cyclotomic(d));
        }
    }
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd] / lead;
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Decides exactly whether a sum of rational phases vanishes, by reducing the
/// sum modulo the cyclotomic polynomial of the common denominator.
///
/// Returns `None` if any phase carries an irrational symbol.
pub fn sum_vanishes(phases: &[Phase]) -> Option<bool> {
    if phases.iter().any(|p| !p.is_rational()) {
        return None;
    }
    if phases.is_empty() {
        return Some(true);
    }
    let l = phases
        .iter()
        .fold(1i64, |acc, p| acc.lcm(p.turn.denom())) as usize;
    let mut coeffs = vec![0i64; l];
    for p in phases {
        let m = (p.turn * Rational64::from_integer(l as i64)).to_integer() as usize;
        coeffs[m % l] += 1;
    }
    let phi = cyclotomic(l);
    let deg = phi.len() - 1;
    for top in (deg..l).rev() {
        let c = coeffs[top];
        if c != 0 {
            for (j, &pj) in phi.iter().enumerate() {
                coeffs[top - deg + j] -= c * pj;
            }
        }
    }
    Some(coeffs.iter().all(|&c| c == 0))
}

/// Finite array of phases indexed by `(row, column)` group-element indices.
///
/// Multiplication is pointwise; these arrays are elements of an abelian
/// algebra, not matrices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PhaseArray {
    rows: usize,
    cols: usize,
    entries: Vec<Phase>,
}

impl PhaseArray {
    pub fn new(rows: usize, cols: usize, entries: Vec<Phase>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(PhaseArray {
            rows,
            cols,
            entries,
        })
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        PhaseArray {
            rows,
            cols,
            entries: vec![Phase::one(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Phase) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        PhaseArray {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Phase {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Phase] {
        &self.entries
    }

    pub fn conj(&self) -> Self {
        PhaseArray {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Phase::conj).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        PhaseArray {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.pow(n)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(Phase::is_one)
    }

    /// Result `(x, y) ↦ self(row_src[x], col_src[y])`.
    pub fn reindexed(&self, row_src: &[usize], col_src: &[usize]) -> Self {
        PhaseArray::from_fn(self.rows, self.cols, |r, c| {
            self.get(row_src[r], col_src[c]).clone()
        })
    }

    /// Multiplies every row `r` by `f[r]`.
    pub fn scale_rows(&self, f: &[Phase]) -> Self {
        PhaseArray::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * &f[r])
    }

    /// Multiplies every column `c` by `g[c]`.
    pub fn scale_cols(&self, g: &[Phase]) -> Self {
        PhaseArray::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * &g[c])
    }

    /// `A(h,k)·A(0,0) = A(h,0)·A(0,k)` everywhere, i.e. `A = f(h)·g(k)`.
    pub fn is_product_form(&self) -> bool {
        let corner = self.get(0, 0);
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| self.get(r, c) * corner == self.get(r, 0) * self.get(0, c))
        })
    }

    /// Every row equals row 0: the array depends on the column only.
    pub fn is_column_function(&self) -> bool {
        (1..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == self.get(0, c)))
    }

    /// Every column equals column 0: the array depends on the row only.
    pub fn is_row_function(&self) -> bool {
        (0..self.rows).all(|r| (1..self.cols).all(|c| self.get(r, c) == self.get(r, 0)))
    }

    /// Divides each column by its row-0 entry.
    pub fn column_normalized(&self) -> Self {
        let g: Vec<Phase> = (0..self.cols).map(|c| self.get(0, c).conj()).collect();
        self.scale_cols(&g)
    }

    /// Unique representative modulo row and column functions: row 0 and
    /// column 0 are all ones.
    pub fn standardized(&self) -> Self {
        let cn = self.column_normalized();
        let f: Vec<Phase> = (0..self.rows).map(|r| cn.get(r, 0).conj()).collect();
        cn.scale_rows(&f)
    }
}

impl Mul for &PhaseArray {
    type Output = PhaseArray;

    fn mul(self, rhs: &PhaseArray) -> PhaseArray {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PhaseArray {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

impl fmt::Display for PhaseArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn is_product_form(a: &PhaseArray) -> bool {
    a.is_product_form()
}

pub fn is_column_function(a: &PhaseArray) -> bool {
    a.is_column_function()
}
