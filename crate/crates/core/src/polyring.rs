//! Sparse multivariate polynomials over ℚ whose variables are indexed by
//! OI-morphisms, together with polynomial matrices and exact determinants.
//!
//! A polynomial always belongs to a fixed width `w`: its variables are pairs
//! `(factor, π)` with `π` an OI-morphism into `[w]`.  Width transitions act on
//! polynomials by relabeling every variable's morphism (post-composition); this
//! is [`Polynomial::push_forward`].  All arithmetic is exact over
//! `num_rational::BigRational`; nothing in the crate ever rounds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::OiError;
use crate::oi_cat::{parse_u32_list, OIMorphism};

/// Exact rational scalar used everywhere.
pub type Rat = BigRational;

/// A variable of a polynomial OI-algebra at some width: the pair of a 1-based
/// tensor-factor index and an OI-morphism whose source is that factor's width
/// and whose target is the ambient width.
///
/// Variables order by `(factor, image lex)`; this is the canonical variable
/// order used in monomials and display.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableId {
    pub factor: usize,
    pub morphism: OIMorphism,
}

impl VariableId {
    pub fn new(factor: usize, morphism: OIMorphism) -> Self {
        VariableId { factor, morphism }
    }

    /// Relabels along `eps`.
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<VariableId, OiError> {
        Ok(VariableId { factor: self.factor, morphism: eps.compose(&self.morphism)? })
    }

    /// Parses `x[i;(i1,...,id)]`; the morphism target is the ambient width.
    pub fn parse(s: &str, width: u32) -> Result<Self, OiError> {
        let inner = s
            .trim()
            .strip_prefix("x[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| OiError::parse(format!("variable `{s}` not of form x[i;(…)]")))?;
        let (factor, img) = inner
            .split_once(';')
            .ok_or_else(|| OiError::parse(format!("variable `{s}` missing `;`")))?;
        let factor: usize =
            factor.trim().parse().map_err(|_| OiError::parse(format!("bad factor index in `{s}`")))?;
        if factor == 0 {
            return Err(OiError::parse("factor indices are 1-based"));
        }
        let img = img
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| OiError::parse(format!("variable `{s}` image not parenthesized")))?;
        let image = parse_u32_list(img)?;
        let source = image.len() as u32;
        Ok(VariableId { factor, morphism: OIMorphism::new(source, width, image)? })
    }
}

impl fmt::Display for VariableId {
    /// Text form `x[i;(i1,...,id)]`, e.g. `x[1;(2,4)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.morphism.image().iter().map(|v| v.to_string()).collect();
        write!(f, "x[{};({})]", self.factor, parts.join(","))
    }
}

/// A monomial: a sorted list of `(variable, exponent)` pairs with positive
/// exponents.  The empty monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(VariableId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn variable(v: VariableId) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs: sorts, merges repeats, drops
    /// zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VariableId, u32)>) -> Self {
        let mut pairs: Vec<(VariableId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        pairs.sort();
        let mut merged: Vec<(VariableId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VariableId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().cloned().chain(other.0.iter().cloned()))
    }

    /// Weighted degree under the given variable grading.
    pub fn degree(&self, grading: &dyn Fn(&VariableId) -> i64) -> i64 {
        self.0.iter().map(|(v, e)| grading(v) * *e as i64).sum()
    }

    pub fn push_forward(&self, eps: &OIMorphism) -> Result<Monomial, OiError> {
        let pairs: Result<Vec<_>, _> =
            self.0.iter().map(|(v, e)| v.push_forward(eps).map(|v| (v, *e))).collect();
        Ok(Monomial::from_pairs(pairs?))
    }

    /// Value at a point assigning a rational to every variable present.
    pub fn evaluate(&self, point: &BTreeMap<VariableId, Rat>) -> Result<Rat, OiError> {
        let mut acc = Rat::one();
        for (v, e) in &self.0 {
            let val = point
                .get(v)
                .ok_or_else(|| OiError::Evaluation(format!("point missing coordinate {v}")))?;
            for _ in 0..*e {
                acc *= val;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial at a fixed width: a finite sum of monomials with nonzero
/// rational coefficients, stored canonically in a `BTreeMap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    width: u32,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(width: u32) -> Self {
        Polynomial { width, terms: BTreeMap::new() }
    }

    pub fn one(width: u32) -> Self {
        Polynomial::constant(width, Rat::one())
    }

    pub fn constant(width: u32, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { width, terms }
    }

    pub fn variable(width: u32, v: VariableId) -> Result<Self, OiError> {
        if v.morphism.target() != width {
            return Err(OiError::WidthMismatch(format!(
                "variable {v} has target {} but ambient width is {width}",
                v.morphism.target()
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(v), Rat::one());
        Ok(Polynomial { width, terms })
    }

    pub fn from_terms(width: u32, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        use std::collections::btree_map::Entry;
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                Entry::Vacant(e) => {
                    e.insert(c);
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Polynomial { width, terms: map }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial `1`.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Checked addition; errors when widths differ.
    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, OiError> {
        if self.width != other.width {
            return Err(OiError::WidthMismatch(format!(
                "adding polynomials of widths {} and {}",
                self.width, other.width
            )));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(Polynomial { width: self.width, terms })
    }

    /// Checked multiplication; errors when widths differ.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, OiError> {
        if self.width != other.width {
            return Err(OiError::WidthMismatch(format!(
                "multiplying polynomials of widths {} and {}",
                self.width, other.width
            )));
        }
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                let entry = terms.entry(m.clone()).or_insert_with(Rat::zero);
                *entry += c;
                if entry.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        Ok(Polynomial { width: self.width, terms })
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.width);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Polynomial { width: self.width, terms }
    }

    /// Relabels every variable along `eps`; the result lives at `eps.target()`.
    /// Errors when `eps.source()` differs from this polynomial's width.
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<Polynomial, OiError> {
        if eps.source() != self.width {
            return Err(OiError::WidthMismatch(format!(
                "push-forward along {} applied to width-{} polynomial",
                eps, self.width
            )));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            // relabeling is injective on monomials, no merging can occur
            terms.insert(m.push_forward(eps)?, c.clone());
        }
        Ok(Polynomial { width: eps.target(), terms })
    }

    /// Exact value at a rational point.  Every variable occurring in the
    /// polynomial must have a coordinate.
    pub fn evaluate(&self, point: &BTreeMap<VariableId, Rat>) -> Result<Rat, OiError> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * m.evaluate(point)?;
        }
        Ok(acc)
    }

    /// Weighted degree: the maximum degree of a term, `None` for the zero
    /// polynomial.
    pub fn degree(&self, grading: &dyn Fn(&VariableId) -> i64) -> Option<i64> {
        self.terms.keys().map(|m| m.degree(grading)).max()
    }

    /// True when all terms share one weighted degree (vacuously for zero).
    pub fn is_homogeneous(&self, grading: &dyn Fn(&VariableId) -> i64) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree(grading));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Parses the canonical text form: terms joined by `+`/`-`, each term a
    /// `*`-separated product of rationals (`p` or `p/q`) and variables with
    /// optional `^exponent`.
    pub fn parse(s: &str, width: u32) -> Result<Polynomial, OiError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(OiError::parse("empty polynomial text"));
        }
        let mut acc = Polynomial::zero(width);
        for (sign, chunk) in split_top_level_signs(s)? {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(OiError::parse(format!("empty term in `{s}`")));
            }
            let mut coeff = if sign { -Rat::one() } else { Rat::one() };
            let mut mono = Monomial::one();
            for factor in split_term_factors(chunk) {
                let factor = factor.trim();
                if factor.starts_with('x') {
                    let (var_text, exp) = match factor.split_once('^') {
                        Some((v, e)) => {
                            let e: u32 = e
                                .trim()
                                .parse()
                                .map_err(|_| OiError::parse(format!("bad exponent in `{factor}`")))?;
                            (v, e)
                        }
                        None => (factor, 1),
                    };
                    let v = VariableId::parse(var_text, width)?;
                    mono = mono.mul(&Monomial::from_pairs([(v, exp)]));
                } else {
                    let c: Rat = factor
                        .parse()
                        .map_err(|_| OiError::parse(format!("bad coefficient `{factor}`")))?;
                    coeff *= c;
                }
            }
            acc = acc.try_add(&Polynomial::from_terms(width, [(mono, coeff)]))?;
        }
        Ok(acc)
    }
}

/// Splits off top-level `+`/`-` separated chunks; returns `(is_negative, text)`
/// per chunk.  Signs never occur inside variable brackets because all indices
/// are unsigned, so depth tracking over `[]()` suffices.
fn split_top_level_signs(s: &str) -> Result<Vec<(bool, String)>, OiError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false; // pending sign of the chunk being accumulated
    for ch in s.chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                current.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(OiError::parse(format!("unbalanced brackets in `{s}`")));
                }
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() {
                    // leading (or repeated) sign folds into the pending sign
                    if ch == '-' {
                        negative = !negative;
                    }
                    current.clear();
                } else {
                    out.push((negative, std::mem::take(&mut current)));
                    negative = ch == '-';
                }
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(OiError::parse(format!("unbalanced brackets in `{s}`")));
    }
    if current.trim().is_empty() {
        return Err(OiError::parse(format!("dangling sign in `{s}`")));
    }
    out.push((negative, current));
    Ok(out)
}

/// Splits a term on top-level `*`.
fn split_term_factors(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                current.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                current.push(ch);
            }
            '*' if depth == 0 => out.push(std::mem::take(&mut current)),
            _ => current.push(ch),
        }
    }
    out.push(current);
    out
}

impl fmt::Display for Polynomial {
    /// Canonical text form `c1*m1 + c2*m2 + …` in monomial order; unit
    /// coefficients are elided, negative coefficients render as `- c*m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition across widths")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(&rhs.neg()).expect("polynomial subtraction across widths")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication across widths")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { width: self.width, terms }
    }
}

/// A dense matrix of polynomials at one width, row-major.
///
/// Differentials of width-wise complexes are stored this way: rows index the
/// target basis, columns the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    width: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(width: u32, rows: usize, cols: usize) -> Self {
        PolyMatrix { width, rows, cols, entries: vec![Polynomial::zero(width); rows * cols] }
    }

    pub fn from_rows(width: u32, rows: Vec<Vec<Polynomial>>) -> Result<Self, OiError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in &rows {
            if r.len() != ncols {
                return Err(OiError::Evaluation("ragged matrix rows".into()));
            }
            for p in r {
                if p.width() != width {
                    return Err(OiError::WidthMismatch(format!(
                        "matrix entry width {} in width-{width} matrix",
                        p.width()
                    )));
                }
                entries.push(p.clone());
            }
        }
        Ok(PolyMatrix { width, rows: nrows, cols: ncols, entries })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        assert_eq!(p.width(), self.width, "entry width must match matrix width");
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// First nonzero entry as `(row, col)`, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .position(|p| !p.is_zero())
            .map(|i| (i / self.cols.max(1), i % self.cols.max(1)))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, OiError> {
        if self.width != other.width {
            return Err(OiError::WidthMismatch(format!(
                "multiplying matrices of widths {} and {}",
                self.width, other.width
            )));
        }
        if self.cols != other.rows {
            return Err(OiError::Evaluation(format!(
                "matrix shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.width, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(self.width);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Applies `eps` to every entry; the result lives at `eps.target()`.
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<PolyMatrix, OiError> {
        let entries: Result<Vec<_>, _> = self.entries.iter().map(|p| p.push_forward(eps)).collect();
        Ok(PolyMatrix { width: eps.target(), rows: self.rows, cols: self.cols, entries: entries? })
    }

    /// Submatrix on the given row and column indices (0-based, in order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        PolyMatrix { width: self.width, rows: rows.len(), cols: cols.len(), entries }
    }

    /// Exact evaluation of every entry at a rational point.
    pub fn evaluate(&self, point: &BTreeMap<VariableId, Rat>) -> Result<Vec<Vec<Rat>>, OiError> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                row.push(self.get(r, c).evaluate(point)?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Exact determinant of a square matrix by cofactor expansion, memoized on
    /// the set of unused columns.  Intended for the small minors that appear in
    /// splice maps (matrices up to ~8×8).
    pub fn determinant(&self) -> Result<Polynomial, OiError> {
        if self.rows != self.cols {
            return Err(OiError::Evaluation(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows > 16 {
            return Err(OiError::Limit("determinant limited to 16x16".into()));
        }
        let mut memo: std::collections::HashMap<u32, Polynomial> = std::collections::HashMap::new();
        let full: u32 = if self.rows == 32 { u32::MAX } else { (1u32 << self.rows) - 1 };
        Ok(self.det_rec(full, &mut memo))
    }

    /// Determinant of the block on rows `popcount(mask)..n` missing... rather:
    /// rows are consumed top-down, `mask` holds the still-available columns.
    fn det_rec(&self, mask: u32, memo: &mut std::collections::HashMap<u32, Polynomial>) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(self.width);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let n = self.rows;
        let row = n - mask.count_ones() as usize;
        let mut acc = Polynomial::zero(self.width);
        let mut sign_positive = true;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = self.get(row, c);
            if !entry.is_zero() {
                let minor = self.det_rec(mask & !(1 << c), memo);
                let prod = entry * &minor;
                acc = if sign_positive { &acc + &prod } else { &acc - &prod };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn var(factor: usize, image: Vec<u32>, width: u32) -> VariableId {
        let source = image.len() as u32;
        VariableId::new(factor, OIMorphism::new(source, width, image).unwrap())
    }

    fn pvar(factor: usize, image: Vec<u32>, width: u32) -> Polynomial {
        Polynomial::variable(width, var(factor, image, width)).unwrap()
    }

    #[test]
    fn arithmetic_cancels_exactly() {
        let x = pvar(1, vec![1], 3);
        let y = pvar(1, vec![2], 3);
        let p = &(&x + &y) * &(&x - &y);
        let q = &(&x * &x) - &(&y * &y);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
    }

    #[test]
    fn widths_must_match() {
        let x3 = pvar(1, vec![1], 3);
        let x4 = pvar(1, vec![1], 4);
        assert!(x3.try_add(&x4).is_err());
        assert!(x3.try_mul(&x4).is_err());
    }

    #[test]
    fn push_forward_relabels_variables() {
        // width 2 → width 4 along ε with image {2,4}
        let eps = OIMorphism::new(2, 4, vec![2, 4]).unwrap();
        let p = &pvar(1, vec![1], 2) * &pvar(1, vec![2], 2); // x[1;(1)]*x[1;(2)]
        let q = p.push_forward(&eps).unwrap();
        let expected = &pvar(1, vec![2], 4) * &pvar(1, vec![4], 4);
        assert_eq!(q, expected);
        assert_eq!(q.width(), 4);
    }

    #[test]
    fn push_forward_is_a_ring_map() {
        let eps = OIMorphism::new(3, 5, vec![1, 3, 4]).unwrap();
        let a = &(&pvar(1, vec![1], 3) + &pvar(1, vec![3], 3)) * &pvar(1, vec![2], 3);
        let b = &pvar(1, vec![2], 3) - &Polynomial::constant(3, rat(7, 3));
        let lhs = (&a * &b).push_forward(&eps).unwrap();
        let rhs = &a.push_forward(&eps).unwrap() * &b.push_forward(&eps).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_exact() {
        // constant 7/3 evaluates to 7/3 at any point
        let c = Polynomial::constant(2, rat(7, 3));
        assert_eq!(c.evaluate(&BTreeMap::new()).unwrap(), rat(7, 3));

        let x = var(1, vec![1], 2);
        let y = var(1, vec![2], 2);
        let p = &(&pvar(1, vec![1], 2) * &pvar(1, vec![2], 2)) + &Polynomial::one(2);
        let mut point = BTreeMap::new();
        point.insert(x, rat(1, 2));
        point.insert(y, rat(2, 3));
        assert_eq!(p.evaluate(&point).unwrap(), rat(4, 3));
    }

    #[test]
    fn evaluation_requires_all_coordinates() {
        let p = pvar(1, vec![2], 3);
        assert!(p.evaluate(&BTreeMap::new()).is_err());
    }

    #[test]
    fn degrees_and_homogeneity() {
        let g = |_: &VariableId| 1i64;
        let x = pvar(1, vec![1], 2);
        let y = pvar(1, vec![2], 2);
        let h = &(&x * &x) + &(&x * &y);
        assert_eq!(h.degree(&g), Some(2));
        assert!(h.is_homogeneous(&g));
        let inh = &h + &x;
        assert!(!inh.is_homogeneous(&g));
        assert!(Polynomial::zero(2).is_homogeneous(&g));
        assert_eq!(Polynomial::zero(2).degree(&g), None);
        // weighted grading
        let gw = |v: &VariableId| if v.factor == 1 { 2i64 } else { 3 };
        let z = pvar(2, vec![1], 2);
        let w = &(&x * &z) + &(&x * &(&x * &x)); // degrees 5 and 6
        assert!(!w.is_homogeneous(&gw));
        assert_eq!(w.degree(&gw), Some(6));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let x = pvar(1, vec![1], 3);
        let y = pvar(2, vec![2], 3);
        let p = &(&x * &(&x + &y)).scale(&rat(-3, 2)) + &Polynomial::constant(3, rat(1, 1));
        let text = p.to_string();
        let back = Polynomial::parse(&text, 3).unwrap();
        assert_eq!(back, p, "round trip failed for `{text}`");
        assert_eq!(Polynomial::parse("0", 3).unwrap(), Polynomial::zero(3));
        assert_eq!(
            Polynomial::parse("-x[1;(1)]^2 + 7/3", 3).unwrap(),
            &(&x * &x).scale(&rat(-1, 1)) + &Polynomial::constant(3, rat(7, 3))
        );
        // explicit c*m form with unit coefficient
        assert_eq!(Polynomial::parse("1*x[1;(1)]", 3).unwrap(), x);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(Polynomial::parse("x[1;(1,2)", 3).is_err());
        assert!(Polynomial::parse("x[1;(4)]", 3).is_err()); // escapes width
        assert!(Polynomial::parse("x[0;(1)]", 3).is_err()); // 0-based factor
        assert!(Polynomial::parse("", 3).is_err());
        assert!(Polynomial::parse("x[1;(1)]^", 3).is_err());
    }

    #[test]
    fn determinant_matches_cofactor_by_hand() {
        // generic 2x2: x11*x22 - x12*x21 with factor index as row
        let w = 2;
        let m = PolyMatrix::from_rows(
            w,
            vec![
                vec![pvar(1, vec![1], w), pvar(1, vec![2], w)],
                vec![pvar(2, vec![1], w), pvar(2, vec![2], w)],
            ],
        )
        .unwrap();
        let det = m.determinant().unwrap();
        let expected = &(&pvar(1, vec![1], w) * &pvar(2, vec![2], w))
            - &(&pvar(1, vec![2], w) * &pvar(2, vec![1], w));
        assert_eq!(det, expected);
    }

    #[test]
    fn determinant_of_singular_matrix_is_zero() {
        let w = 2;
        let x = pvar(1, vec![1], w);
        let y = pvar(1, vec![2], w);
        // rows proportional
        let m = PolyMatrix::from_rows(
            w,
            vec![vec![x.clone(), y.clone()], vec![x.scale(&rat(2, 1)), y.scale(&rat(2, 1))]],
        )
        .unwrap();
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn determinant_trivial_sizes() {
        let m0 = PolyMatrix::zero(3, 0, 0);
        assert_eq!(m0.determinant().unwrap(), Polynomial::one(3));
        let m1 = PolyMatrix::from_rows(3, vec![vec![pvar(1, vec![2], 3)]]).unwrap();
        assert_eq!(m1.determinant().unwrap(), pvar(1, vec![2], 3));
    }

    #[test]
    fn matrix_multiplication_shapes_and_values() {
        let w = 2;
        let x = pvar(1, vec![1], w);
        let y = pvar(1, vec![2], w);
        let a = PolyMatrix::from_rows(w, vec![vec![x.clone(), y.clone()]]).unwrap(); // 1x2
        let b = PolyMatrix::from_rows(w, vec![vec![(&y).neg()], vec![x.clone()]]).unwrap(); // 2x1
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.nrows(), 1);
        assert_eq!(prod.ncols(), 1);
        assert_eq!(*prod.get(0, 0), &(&x * &(&y).neg()) + &(&y * &x));
        assert!(prod.is_zero());
        assert!(a.mul(&a).is_err());
    }
}
