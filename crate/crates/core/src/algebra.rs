//! Free graded-commutative algebras over the rationals.
//!
//! A [`GeneratorTable`] fixes the generators and their degrees. [`Monomial`]s are
//! canonical words: factors strictly ascending by generator id, odd generators
//! appearing at most once. [`Element`]s are finite rational combinations of
//! monomials with no stored zero coefficients.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: usize,
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Ordered list of generators with dense ids `0..len`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorTable {
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(name, degree)` pairs, ids assigned in order.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, u32)]) -> Result<Self> {
        let mut table = Self::new();
        for (name, degree) in pairs {
            table.push(name.as_ref(), *degree)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, name: &str, degree: u32) -> Result<usize> {
        if degree == 0 {
            return Err(Error::ZeroDegreeGenerator(name.to_string()));
        }
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        let id = self.generators.len();
        self.generators.push(Generator {
            id,
            name: name.to_string(),
            degree,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&Generator> {
        self.generators.get(id)
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter()
    }

    /// Degree of generator `id`.
    ///
    /// Panics if `id` is not in the table; callers validate ids at the boundary.
    pub fn degree(&self, id: usize) -> u32 {
        self.generators[id].degree
    }

    pub fn is_odd(&self, id: usize) -> bool {
        self.degree(id) % 2 == 1
    }

    pub fn name(&self, id: usize) -> &str {
        &self.generators[id].name
    }

    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Number of generators of each degree.
    pub fn degree_counts(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.generators {
            *counts.entry(g.degree).or_insert(0) += 1;
        }
        counts
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id < self.generators.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(id))
        }
    }
}

/// A canonical monomial: `(generator id, exponent)` pairs, strictly ascending by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(id: usize) -> Self {
        Self { factors: vec![(id, 1)] }
    }

    /// Wraps factors that are already canonical. Debug builds check the invariant.
    pub(crate) fn from_canonical(factors: Vec<(usize, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e > 0));
        Self { factors }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self, table: &GeneratorTable) -> u32 {
        self.factors.iter().map(|&(id, e)| e * table.degree(id)).sum()
    }

    /// Total number of generator letters, counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, id: usize) -> u32 {
        self.factors.iter().find(|&&(g, _)| g == id).map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.exponent(id) > 0
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|&(id, _)| id)
    }

    fn check_ids(&self, table: &GeneratorTable) -> Result<()> {
        self.factors.iter().try_for_each(|&(id, _)| table.check_id(id))
    }
}

/// Sorts a word of `(generator, exponent)` letters into canonical order.
///
/// Returns `None` when the word vanishes (an odd generator occurs twice), otherwise
/// the Koszul sign (`true` for negative) and the canonical monomial. The sign is the
/// parity of inversions between odd letters, counted during a stable merge sort.
pub fn normalize_word(word: &[(usize, u32)], table: &GeneratorTable) -> Result<Option<(bool, Monomial)>> {
    let mut letters = Vec::with_capacity(word.len());
    for &(id, exp) in word {
        table.check_id(id)?;
        if exp == 0 {
            continue;
        }
        let odd = table.is_odd(id);
        if odd && exp > 1 {
            return Ok(None);
        }
        letters.push(Letter { id, exp, odd });
    }
    let inversions = merge_sort_count(&mut letters);
    let mut factors: Vec<(usize, u32)> = Vec::with_capacity(letters.len());
    for letter in letters {
        match factors.last_mut() {
            Some((id, exp)) if *id == letter.id => {
                if letter.odd {
                    return Ok(None);
                }
                *exp += letter.exp;
            }
            _ => factors.push((letter.id, letter.exp)),
        }
    }
    Ok(Some((inversions % 2 == 1, Monomial::from_canonical(factors))))
}

#[derive(Clone, Copy)]
struct Letter {
    id: usize,
    exp: u32,
    odd: bool,
}

/// Stable merge sort by id; returns the number of odd/odd inversions.
fn merge_sort_count(letters: &mut Vec<Letter>) -> u64 {
    if letters.len() <= 1 {
        return 0;
    }
    let mut right = letters.split_off(letters.len() / 2);
    let mut count = merge_sort_count(letters) + merge_sort_count(&mut right);
    let left = std::mem::take(letters);
    let mut odd_left_remaining = left.iter().filter(|l| l.odd).count() as u64;
    let (mut i, mut j) = (0, 0);
    letters.reserve(left.len() + right.len());
    while i < left.len() && j < right.len() {
        if left[i].id <= right[j].id {
            if left[i].odd {
                odd_left_remaining -= 1;
            }
            letters.push(left[i]);
            i += 1;
        } else {
            if right[j].odd {
                count += odd_left_remaining;
            }
            letters.push(right[j]);
            j += 1;
        }
    }
    letters.extend_from_slice(&left[i..]);
    letters.extend_from_slice(&right[j..]);
    count
}

/// Product of two canonical monomials with its sign, or `None` if it vanishes.
pub fn multiply_monomials(a: &Monomial, b: &Monomial, table: &GeneratorTable) -> Result<Option<(bool, Monomial)>> {
    if a.is_one() {
        return Ok(Some((false, b.clone())));
    }
    if b.is_one() {
        return Ok(Some((false, a.clone())));
    }
    let mut word = Vec::with_capacity(a.factors.len() + b.factors.len());
    word.extend_from_slice(&a.factors);
    word.extend_from_slice(&b.factors);
    normalize_word(&word, table)
}

/// A rational linear combination of canonical monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn generator(id: usize) -> Self {
        Self::term(Monomial::generator(id), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// The common degree of all terms, or `None` for zero or mixed-degree elements.
    pub fn degree(&self, table: &GeneratorTable) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.degree(table));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, table: &GeneratorTable, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree(table) == degree)
    }

    /// Whether any generator appears in this element.
    pub fn mentions(&self, id: usize) -> bool {
        self.terms.keys().any(|m| m.contains(id))
    }

    /// Generator ids used anywhere in the element, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.terms.keys().flat_map(|m| m.generators()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn check_ids(&self, table: &GeneratorTable) -> Result<()> {
        self.terms.keys().try_for_each(|m| m.check_ids(table))
    }

    /// Rewrites generator ids through `map`; the result is re-normalized with
    /// Koszul signs against `table` (the table of the new ids).
    pub fn relabel(&self, map: impl Fn(usize) -> usize, table: &GeneratorTable) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let word: Vec<(usize, u32)> = m.factors.iter().map(|&(id, e)| (map(id), e)).collect();
            if let Some((neg, mono)) = normalize_word(&word, table)? {
                out.add_term(mono, if neg { -c.clone() } else { c.clone() });
            }
        }
        Ok(out)
    }
}

impl Element {
    /// Renders the element in the expression grammar of model description files.
    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> ElementDisplay<'a> {
        ElementDisplay { element: self, table }
    }
}

pub struct ElementDisplay<'a> {
    element: &'a Element,
    table: &'a GeneratorTable,
}

impl std::fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.element.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.element.terms().collect();
        terms.sort_by_key(|(m, _)| (m.degree(self.table), (*m).clone()));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c < &Rational::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !magnitude.is_one() || m.is_one() {
                parts.push(magnitude.to_string());
            }
            for &(id, exp) in m.factors() {
                let name = self.table.name(id);
                if exp == 1 {
                    parts.push(name.to_string());
                } else {
                    parts.push(format!("{name}^{exp}"));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Self::from_monomial(m)
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= &rhs;
        self
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(mut self) -> Element {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        -self.clone()
    }
}

impl FromIterator<(Monomial, Rational)> for Element {
    fn from_iter<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// Bilinear, graded-commutative product.
pub fn multiply(a: &Element, b: &Element, table: &GeneratorTable) -> Result<Element> {
    a.check_ids(table)?;
    b.check_ids(table)?;
    let mut out = Element::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((neg, m)) = multiply_monomials(ma, mb, table)? {
                let c = ca * cb;
                out.add_term(m, if neg { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Product of a sequence of elements, left to right.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a Element>, table: &GeneratorTable) -> Result<Element> {
    let mut acc = Element::one();
    for f in factors {
        acc = multiply(&acc, f, table)?;
    }
    Ok(acc)
}

pub fn power(e: &Element, exp: u32, table: &GeneratorTable) -> Result<Element> {
    let mut acc = Element::one();
    for _ in 0..exp {
        acc = multiply(&acc, e, table)?;
    }
    Ok(acc)
}

/// All canonical monomials of total degree `n`, sorted.
pub fn monomial_basis(table: &GeneratorTable, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    basis_rec(table, 0, n, &mut current, &mut out);
    out.sort();
    out
}

fn basis_rec(
    table: &GeneratorTable,
    next: usize,
    remaining: u32,
    current: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::from_canonical(current.clone()));
        return;
    }
    for id in next..table.len() {
        let deg = table.degree(id);
        if deg > remaining {
            continue;
        }
        let max_exp = if deg % 2 == 1 { 1 } else { remaining / deg };
        for exp in 1..=max_exp {
            current.push((id, exp));
            basis_rec(table, id + 1, remaining - exp * deg, current, out);
            current.pop();
        }
    }
}

/// Splits an element by the degree of its monomials.
pub fn decompose_homogeneous(e: &Element, table: &GeneratorTable) -> BTreeMap<u32, Element> {
    let mut parts: BTreeMap<u32, Element> = BTreeMap::new();
    for (m, c) in e.terms() {
        parts.entry(m.degree(table)).or_default().add_term(m.clone(), c.clone());
    }
    parts
}
