//! Exact symbolic algebra of Majorana monomials.
//!
//! A monomial `c_{i1} c_{i2} ... c_{in}` with `i1 < i2 < ... < in` is stored as a
//! [`SiteSet`] bitmask; an operator is a sparse map from site sets to complex
//! coefficients. Products are reduced with `{c_i, c_j} = 2 δ_ij`, so every
//! result is canonical and signs are exact integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::MajoranaError;

pub type Complex = Complex64;

/// Largest site index representable by a [`SiteSet`].
pub const MAX_SITES: usize = 64;

/// Ordered set of Majorana sites `1..=MAX_SITES`. The empty set is the identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SiteSet(u64);

impl SiteSet {
    pub const fn empty() -> Self {
        SiteSet(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        SiteSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Panics if `site` is outside `1..=MAX_SITES`.
    pub fn single(site: usize) -> Self {
        assert!(
            (1..=MAX_SITES).contains(&site),
            "site {site} outside 1..={MAX_SITES}"
        );
        SiteSet(1u64 << (site - 1))
    }

    /// Builds a set from distinct sites given in any order.
    ///
    /// Duplicates are an error here; use monomial multiplication when
    /// repeated generators should cancel.
    pub fn from_sites<I: IntoIterator<Item = usize>>(sites: I) -> Result<Self, MajoranaError> {
        let mut bits = 0u64;
        for s in sites {
            if !(1..=MAX_SITES).contains(&s) {
                return Err(MajoranaError::Parse(format!(
                    "site {s} outside 1..={MAX_SITES}"
                )));
            }
            let b = 1u64 << (s - 1);
            if bits & b != 0 {
                return Err(MajoranaError::Parse(format!("site {s} repeated")));
            }
            bits |= b;
        }
        Ok(SiteSet(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, site: usize) -> bool {
        (1..=MAX_SITES).contains(&site) && self.0 & (1u64 << (site - 1)) != 0
    }

    /// Largest site, or 0 for the identity.
    pub fn max_site(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Sites in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(tz + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True when every site is strictly below `cutoff`.
    pub fn below(self, cutoff: usize) -> bool {
        if cutoff == 0 {
            return self.is_empty();
        }
        if cutoff > MAX_SITES {
            return true;
        }
        let mask = (1u64 << (cutoff - 1)) - 1;
        self.0 & !mask == 0
    }

    pub fn is_subset(self, other: SiteSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Canonical product of two monomials: `(sign, sites)` with the sign given by
    /// the parity of cross inversions `a > b`, `a ∈ self`, `b ∈ rhs`.
    pub fn product(self, rhs: SiteSet) -> (bool, SiteSet) {
        let mut inversions = 0u32;
        let mut b = rhs.0;
        while b != 0 {
            let tz = b.trailing_zeros();
            b &= b - 1;
            let above = if tz >= 63 { 0 } else { self.0 >> (tz + 1) };
            inversions += above.count_ones();
        }
        (inversions % 2 == 1, SiteSet(self.0 ^ rhs.0))
    }

    /// Whether the two monomials commute (`true`) or anticommute (`false`).
    pub fn commutes_with(self, rhs: SiteSet) -> bool {
        let overlap = (self.0 & rhs.0).count_ones() as usize;
        (self.len() * rhs.len() - overlap).is_multiple_of(2)
    }
}

impl Ord for SiteSet {
    /// Orders by cardinality, then lexicographically by ascending site lists.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for SiteSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for s in self.iter() {
            write!(f, "c[{s}]")?;
        }
        Ok(())
    }
}

/// A single canonical monomial with its coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajoranaMonomial {
    pub sites: SiteSet,
    pub coefficient: Complex,
}

impl MajoranaMonomial {
    pub fn new(sites: SiteSet, coefficient: Complex) -> Self {
        MajoranaMonomial { sites, coefficient }
    }

    pub fn times(self, rhs: MajoranaMonomial) -> MajoranaMonomial {
        let (negative, sites) = self.sites.product(rhs.sites);
        let c = self.coefficient * rhs.coefficient;
        MajoranaMonomial {
            sites,
            coefficient: if negative { -c } else { c },
        }
    }
}

/// Fermion-parity grading of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// `i^k`.
pub fn i_pow(k: usize) -> Complex {
    match k % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    }
}

/// Phase `i^{n(n-1)/2}` that makes the monomial on `sites` Hermitian.
pub fn hermitian_phase(sites: SiteSet) -> Complex {
    let n = sites.len();
    i_pow(n * n.saturating_sub(1) / 2)
}

/// Sparse linear combination of canonical Majorana monomials.
#[derive(Clone, Default, PartialEq)]
pub struct MajoranaOperator {
    terms: BTreeMap<SiteSet, Complex>,
}

impl MajoranaOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Complex::new(1.0, 0.0))
    }

    pub fn scalar(value: Complex) -> Self {
        Self::monomial(SiteSet::empty(), value)
    }

    /// The generator `c_site`.
    pub fn generator(site: usize) -> Self {
        Self::monomial(SiteSet::single(site), Complex::new(1.0, 0.0))
    }

    pub fn monomial(sites: SiteSet, coefficient: Complex) -> Self {
        let mut op = Self::zero();
        op.add_term(sites, coefficient);
        op
    }

    /// Product `coeff * c_{s1} c_{s2} ...` of generators in the given order,
    /// reduced to canonical form.
    pub fn product_of(sites: &[usize], coefficient: Complex) -> Self {
        let mut acc = MajoranaMonomial::new(SiteSet::empty(), coefficient);
        for &s in sites {
            acc = acc.times(MajoranaMonomial::new(SiteSet::single(s), Complex::new(1.0, 0.0)));
        }
        Self::monomial(acc.sites, acc.coefficient)
    }

    pub fn from_terms<I: IntoIterator<Item = (SiteSet, Complex)>>(terms: I) -> Self {
        let mut op = Self::zero();
        for (s, c) in terms {
            op.add_term(s, c);
        }
        op
    }

    /// Accumulates `coefficient` onto `sites`, dropping the entry on exact zero.
    pub fn add_term(&mut self, sites: SiteSet, coefficient: Complex) {
        let entry = self.terms.entry(sites).or_insert(Complex::new(0.0, 0.0));
        *entry += coefficient;
        if *entry == Complex::new(0.0, 0.0) {
            self.terms.remove(&sites);
        }
    }

    /// Terms in canonical order (cardinality, then lexicographic sites).
    pub fn terms(&self) -> impl Iterator<Item = (SiteSet, Complex)> + '_ {
        self.terms.iter().map(|(s, c)| (*s, *c))
    }

    pub fn coefficient(&self, sites: SiteSet) -> Complex {
        self.terms.get(&sites).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest site touched by any term (0 for scalars and zero).
    pub fn max_site(&self) -> usize {
        self.terms.keys().map(|s| s.max_site()).max().unwrap_or(0)
    }

    /// Union of supports.
    pub fn support(&self) -> SiteSet {
        SiteSet(self.terms.keys().fold(0, |acc, s| acc | s.0))
    }

    pub fn scale(&self, factor: Complex) -> Self {
        if factor == Complex::new(0.0, 0.0) {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(s, c)| (s, c * factor)))
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex::new(factor, 0.0))
    }

    /// Drops terms with `|coeff| <= eps`. Intended for display; the algebra
    /// itself only ever prunes exact zeros.
    pub fn pruned(&self, eps: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > eps)
                .map(|(s, c)| (*s, *c))
                .collect(),
        }
    }

    /// Hermitian conjugate: conjugated coefficients, reversed monomials.
    pub fn dagger(&self) -> Self {
        Self::from_terms(self.terms().map(|(s, c)| {
            let n = s.len();
            let reversal_odd = (n * n.saturating_sub(1) / 2) % 2 == 1;
            let c = c.conj();
            (s, if reversal_odd { -c } else { c })
        }))
    }

    /// `Σ_S conj(a_S) b_S`, the normalized trace inner product.
    pub fn inner_product(&self, other: &MajoranaOperator) -> Complex {
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex::new(0.0, 0.0);
        for (s, c) in small.terms() {
            if let Some(d) = large.terms.get(&s) {
                acc += if flip { d.conj() * c } else { c.conj() * d };
            }
        }
        acc
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c.norm_sqr()).sqrt()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Truncation projector: keeps the terms supported strictly below `cutoff_site`.
    pub fn truncate_support(&self, cutoff_site: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.below(cutoff_site))
                .map(|(s, c)| (*s, *c))
                .collect(),
        }
    }

    /// Terms whose site count equals `degree`.
    pub fn degree_part(&self, degree: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.len() == degree)
                .map(|(s, c)| (*s, *c))
                .collect(),
        }
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for s in self.terms.keys() {
            if s.len() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Largest coefficient deviation between `self` and `self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.dagger()).max_abs_coefficient()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Replaces every generator `c_i` by `map(i)` and re-expands.
    pub fn substitute<F>(&self, mut map: F) -> Self
    where
        F: FnMut(usize) -> MajoranaOperator,
    {
        let mut cache: BTreeMap<usize, MajoranaOperator> = BTreeMap::new();
        let mut out = Self::zero();
        for (s, c) in self.terms() {
            let mut prod = Self::scalar(c);
            for site in s.iter() {
                let image = cache.entry(site).or_insert_with(|| map(site));
                prod = &prod * &*image;
            }
            out += &prod;
        }
        out
    }

    /// Scalar part (coefficient of the identity).
    pub fn scalar_part(&self) -> Complex {
        self.coefficient(SiteSet::empty())
    }

    /// Coefficients `α_S` with `self = Σ α_S · i^{n(n-1)/2} c_S`.
    pub fn hermitian_coefficients(&self) -> BTreeMap<SiteSet, Complex> {
        self.terms()
            .map(|(s, c)| (s, c * hermitian_phase(s).conj()))
            .collect()
    }

    /// Inverse of [`hermitian_coefficients`](Self::hermitian_coefficients).
    pub fn from_hermitian_coefficients<I: IntoIterator<Item = (SiteSet, Complex)>>(
        coefficients: I,
    ) -> Self {
        Self::from_terms(
            coefficients
                .into_iter()
                .map(|(s, a)| (s, a * hermitian_phase(s))),
        )
    }
}

impl fmt::Debug for MajoranaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn fmt_coefficient(c: Complex) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("({:?}{}{:?}i)", c.re, sign, c.im.abs())
}

impl fmt::Display for MajoranaOperator {
    /// `coeff * c[i]c[j]... + ...` in canonical term order; `0` for the zero operator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} * {}", fmt_coefficient(c), s)?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), MajoranaError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn error(&self, what: &str) -> MajoranaError {
        MajoranaError::Parse(format!("{what} at byte {} in `{}`", self.pos, self.src))
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, pred: F) -> &'a str {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, ch)| !pred(ch))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn float(&mut self) -> Result<f64, MajoranaError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with('-') || self.rest().starts_with('+') {
            self.pos += 1;
        }
        self.take_while(|ch| ch.is_ascii_digit() || ch == '.');
        if self.rest().starts_with('e') || self.rest().starts_with('E') {
            self.pos += 1;
            if self.rest().starts_with('-') || self.rest().starts_with('+') {
                self.pos += 1;
            }
            self.take_while(|ch| ch.is_ascii_digit());
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map_err(|_| self.error(&format!("bad number `{text}`")))
    }

    fn integer(&mut self) -> Result<usize, MajoranaError> {
        self.skip_ws();
        let digits = self.take_while(|ch| ch.is_ascii_digit());
        digits
            .parse::<usize>()
            .map_err(|_| self.error("expected site index"))
    }
}

impl FromStr for MajoranaOperator {
    type Err = MajoranaError;

    /// Parses the [`Display`](fmt::Display) format. Sites inside a term may be
    /// in any order or repeated; the product is reduced canonically.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { src: s, pos: 0 };
        cur.skip_ws();
        if cur.rest().trim() == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        loop {
            cur.expect("(")?;
            let re = cur.float()?;
            cur.skip_ws();
            let negative = if cur.eat("+") {
                false
            } else if cur.eat("-") {
                true
            } else {
                return Err(cur.error("expected sign of imaginary part"));
            };
            let im_abs = cur.float()?;
            cur.expect("i")?;
            cur.expect(")")?;
            cur.expect("*")?;
            let im = if negative { -im_abs } else { im_abs };
            let mut sites = Vec::new();
            if !cur.eat("1") {
                while cur.eat("c[") {
                    let site = cur.integer()?;
                    if !(1..=MAX_SITES).contains(&site) {
                        return Err(cur.error(&format!("site {site} outside 1..={MAX_SITES}")));
                    }
                    sites.push(site);
                    cur.expect("]")?;
                }
                if sites.is_empty() {
                    return Err(cur.error("expected `1` or `c[i]`"));
                }
            }
            out += &Self::product_of(&sites, Complex::new(re, im));
            cur.skip_ws();
            if cur.rest().is_empty() {
                break;
            }
            cur.expect("+")?;
        }
        Ok(out)
    }
}

/// Canonical product `a · b`.
pub fn multiply(a: &MajoranaOperator, b: &MajoranaOperator) -> MajoranaOperator {
    let mut out = MajoranaOperator::zero();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            let (negative, s) = sa.product(sb);
            let c = ca * cb;
            out.add_term(s, if negative { -c } else { c });
        }
    }
    out
}

/// `[a, b] = ab - ba`. Commuting monomial pairs are skipped, anticommuting
/// ones contribute twice their product.
pub fn commutator(a: &MajoranaOperator, b: &MajoranaOperator) -> MajoranaOperator {
    graded_product(a, b, false)
}

/// `{a, b} = ab + ba`.
pub fn anticommutator(a: &MajoranaOperator, b: &MajoranaOperator) -> MajoranaOperator {
    graded_product(a, b, true)
}

fn graded_product(a: &MajoranaOperator, b: &MajoranaOperator, anti: bool) -> MajoranaOperator {
    let mut out = MajoranaOperator::zero();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            // [x,y] survives only for anticommuting monomials, {x,y} only for commuting ones
            if sa.commutes_with(sb) != anti {
                continue;
            }
            let (negative, s) = sa.product(sb);
            let c = ca * cb * 2.0;
            out.add_term(s, if negative { -c } else { c });
        }
    }
    out
}

/// Odd-cardinality monomial with its Hermitian phase, `C = i^{n(n-1)/2} c_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermitianBasisElement {
    sites: SiteSet,
}

impl HermitianBasisElement {
    /// `None` unless `sites` has odd cardinality.
    pub fn new(sites: SiteSet) -> Option<Self> {
        (sites.len() % 2 == 1).then_some(HermitianBasisElement { sites })
    }

    pub fn sites(self) -> SiteSet {
        self.sites
    }

    pub fn phase(self) -> Complex {
        hermitian_phase(self.sites)
    }

    pub fn to_operator(self) -> MajoranaOperator {
        MajoranaOperator::monomial(self.sites, self.phase())
    }

    /// All odd-cardinality subsets of `{1, ..., sites}`, in canonical order.
    pub fn enumerate(sites: usize) -> Vec<HermitianBasisElement> {
        assert!(sites <= 30, "odd-monomial enumeration limited to 30 sites");
        let mut out: Vec<_> = (1u64..(1u64 << sites))
            .filter(|b| b.count_ones() % 2 == 1)
            .map(|b| HermitianBasisElement {
                sites: SiteSet::from_bits(b),
            })
            .collect();
        out.sort();
        out
    }
}

impl Add<&MajoranaOperator> for &MajoranaOperator {
    type Output = MajoranaOperator;
    fn add(self, rhs: &MajoranaOperator) -> MajoranaOperator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MajoranaOperator {
    type Output = MajoranaOperator;
    fn add(mut self, rhs: MajoranaOperator) -> MajoranaOperator {
        self += &rhs;
        self
    }
}

impl Sub<&MajoranaOperator> for &MajoranaOperator {
    type Output = MajoranaOperator;
    fn sub(self, rhs: &MajoranaOperator) -> MajoranaOperator {
        let mut out = self.clone();
        for (s, c) in rhs.terms() {
            out.add_term(s, -c);
        }
        out
    }
}

impl Sub for MajoranaOperator {
    type Output = MajoranaOperator;
    fn sub(self, rhs: MajoranaOperator) -> MajoranaOperator {
        &self - &rhs
    }
}

impl AddAssign<&MajoranaOperator> for MajoranaOperator {
    fn add_assign(&mut self, rhs: &MajoranaOperator) {
        for (s, c) in rhs.terms() {
            self.add_term(s, c);
        }
    }
}

impl Neg for &MajoranaOperator {
    type Output = MajoranaOperator;
    fn neg(self) -> MajoranaOperator {
        self.scale_real(-1.0)
    }
}

impl Mul<&MajoranaOperator> for &MajoranaOperator {
    type Output = MajoranaOperator;
    fn mul(self, rhs: &MajoranaOperator) -> MajoranaOperator {
        multiply(self, rhs)
    }
}

impl Mul for MajoranaOperator {
    type Output = MajoranaOperator;
    fn mul(self, rhs: MajoranaOperator) -> MajoranaOperator {
        multiply(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: usize) -> MajoranaOperator {
        MajoranaOperator::generator(i)
    }

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn mono(sites: &[usize], coeff: Complex) -> MajoranaOperator {
        MajoranaOperator::monomial(SiteSet::from_sites(sites.iter().copied()).unwrap(), coeff)
    }

    #[test]
    fn generator_squares_to_identity() {
        assert_eq!(&c(1) * &c(1), MajoranaOperator::identity());
    }

    #[test]
    fn transposition_sign() {
        assert_eq!(&c(2) * &c(1), mono(&[1, 2], re(-1.0)));
    }

    #[test]
    fn quartic_times_generator() {
        let v = mono(&[1, 2, 3, 4], re(1.0));
        assert_eq!(&v * &c(1), mono(&[2, 3, 4], re(-1.0)));
        assert_eq!(commutator(&v, &c(1)), mono(&[2, 3, 4], re(-2.0)));
    }

    #[test]
    fn pair_commutator() {
        let pair = mono(&[1, 2], re(1.0));
        assert_eq!(commutator(&pair, &c(1)), mono(&[2], re(-2.0)));
    }

    #[test]
    fn clifford_relations() {
        for i in 1..=6 {
            for j in 1..=6 {
                let expected = if i == j {
                    MajoranaOperator::scalar(re(2.0))
                } else {
                    MajoranaOperator::zero()
                };
                assert_eq!(anticommutator(&c(i), &c(j)), expected);
            }
        }
    }

    #[test]
    fn dagger_of_quadratic() {
        let op = mono(&[1, 2], Complex::new(0.0, 1.0));
        assert_eq!(op.dagger(), op);
        assert!(op.is_hermitian(0.0));
        let bare = mono(&[1, 2], re(1.0));
        assert_eq!(bare.dagger(), mono(&[1, 2], re(-1.0)));
    }

    #[test]
    fn hermitian_basis_is_hermitian_involution() {
        for e in HermitianBasisElement::enumerate(5) {
            let op = e.to_operator();
            assert_eq!(op.dagger(), op);
            assert_eq!(&op * &op, MajoranaOperator::identity());
        }
    }

    #[test]
    fn hermitian_basis_orthonormal_on_five_sites() {
        let basis = HermitianBasisElement::enumerate(5);
        assert_eq!(basis.len(), 16);
        for a in &basis {
            for b in &basis {
                let ip = a.to_operator().inner_product(&b.to_operator());
                let expected = if a == b { re(1.0) } else { re(0.0) };
                assert_eq!(ip, expected);
            }
        }
    }

    #[test]
    fn hermitian_coefficients_round_trip() {
        let op: MajoranaOperator = "(0.5+0.25i) * c[1] + (-1.0+2.0i) * c[1]c[2]c[3]".parse().unwrap();
        let back = MajoranaOperator::from_hermitian_coefficients(op.hermitian_coefficients());
        assert_eq!(back, op);
    }

    #[test]
    fn truncation_examples() {
        let op = &c(1) + &c(5);
        assert_eq!(op.truncate_support(3), c(1));
        assert_eq!(
            MajoranaOperator::identity().truncate_support(3),
            MajoranaOperator::identity()
        );
    }

    #[test]
    fn parity_classification() {
        assert_eq!(c(3).parity(), Parity::Odd);
        assert_eq!(mono(&[1, 2], re(1.0)).parity(), Parity::Even);
        assert_eq!((&c(1) + &mono(&[1, 2], re(1.0))).parity(), Parity::Mixed);
    }

    #[test]
    fn canonical_order_is_size_then_lexicographic() {
        let op: MajoranaOperator =
            "(1.0+0.0i) * c[2]c[3] + (1.0+0.0i) * c[5] + (1.0+0.0i) * c[1]c[4] + (1.0+0.0i) * 1"
                .parse()
                .unwrap();
        let order: Vec<Vec<usize>> = op.terms().map(|(s, _)| s.to_vec()).collect();
        assert_eq!(order, vec![vec![], vec![5], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn display_parse_round_trip() {
        let op = &mono(&[1, 3], Complex::new(0.1, -1e-20)) + &mono(&[2], Complex::new(-0.0, 3.5));
        let text = op.to_string();
        assert_eq!(text, "(0.0+3.5i) * c[2] + (0.1-1e-20i) * c[1]c[3]");
        let back: MajoranaOperator = text.parse().unwrap();
        assert_eq!(back, op);
        assert_eq!("0".parse::<MajoranaOperator>().unwrap(), MajoranaOperator::zero());
    }

    #[test]
    fn parse_reduces_unsorted_sites() {
        let op: MajoranaOperator = "(1.0+0.0i) * c[2]c[1]".parse().unwrap();
        assert_eq!(op, mono(&[1, 2], re(-1.0)));
        let op: MajoranaOperator = "(2.0+0.0i) * c[3]c[3]".parse().unwrap();
        assert_eq!(op, MajoranaOperator::scalar(re(2.0)));
    }

    #[test]
    fn parse_errors() {
        assert!("c[1]".parse::<MajoranaOperator>().is_err());
        assert!("(1.0+0.0i) * c[0]".parse::<MajoranaOperator>().is_err());
        assert!("(1.0+0.0i) *".parse::<MajoranaOperator>().is_err());
        assert!("(1.0 0.0i) * c[1]".parse::<MajoranaOperator>().is_err());
    }

    #[test]
    fn substitute_linear_map() {
        // c1 -> c2, c2 -> -c1 sends c1c2 to c2(-c1) = c1c2
        let op = mono(&[1, 2], re(1.0));
        let mapped = op.substitute(|i| match i {
            1 => c(2),
            2 => -&c(1),
            _ => c(i),
        });
        assert_eq!(mapped, op);
    }
}
