//! Commutative differential graded algebras: free algebras with a differential on
//! generators, finitely presented quotients, morphisms and minimality.

mod minimality;
mod morphism;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::algebra::{
    decompose_homogeneous, monomial_basis, multiply, multiply_monomials, Element, GeneratorTable, Monomial,
};
use crate::cohomology::CohomologyGroup;
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace};
use crate::Rational;

pub use minimality::{check_minimality, layered_order, MinimalityVerdict, OrderObstruction};
pub use morphism::{validate_morphism, Morphism};
pub use validate::{validate, Issue, Note, ValidationReport};

/// Free graded-commutative algebra with a differential prescribed on generators.
///
/// A generator without an entry is reported as missing by [`validate`] and acts as
/// a cocycle everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCdga {
    table: GeneratorTable,
    differential: BTreeMap<usize, Element>,
}

impl FreeCdga {
    /// Free algebra with no differentials assigned yet.
    pub fn new(table: GeneratorTable) -> Self {
        Self {
            table,
            differential: BTreeMap::new(),
        }
    }

    /// Free algebra with `differentials[i]` assigned to generator `i`.
    pub fn with_differentials(table: GeneratorTable, differentials: Vec<Element>) -> Result<Self> {
        if differentials.len() != table.len() {
            return Err(Error::Internal(format!(
                "{} differentials given for {} generators",
                differentials.len(),
                table.len()
            )));
        }
        let mut free = Self::new(table);
        for (id, d) in differentials.into_iter().enumerate() {
            free.set_differential(id, d)?;
        }
        Ok(free)
    }

    /// All generators closed.
    pub fn closed(table: GeneratorTable) -> Self {
        let n = table.len();
        Self::with_differentials(table, vec![Element::zero(); n]).expect("lengths match")
    }

    pub fn set_differential(&mut self, id: usize, d: Element) -> Result<()> {
        self.table.check_id(id)?;
        d.check_ids(&self.table)?;
        self.differential.insert(id, d);
        Ok(())
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn differential_of(&self, id: usize) -> Option<&Element> {
        self.differential.get(&id)
    }

    /// Differential of a generator, zero when unassigned.
    pub fn d_generator(&self, id: usize) -> Element {
        self.differential.get(&id).cloned().unwrap_or_default()
    }

    /// Adjoins a new generator; returns the extended algebra and the new id.
    pub fn adjoin(&self, name: &str, degree: u32, d: Element) -> Result<(Self, usize)> {
        let mut out = self.clone();
        let id = out.table.push(name, degree)?;
        out.set_differential(id, d)?;
        Ok((out, id))
    }

    /// Leibniz extension of the generator differential, without any quotient.
    pub fn differential(&self, e: &Element) -> Result<Element> {
        e.check_ids(&self.table)?;
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            let factors = m.factors();
            let mut prefix_degree = 0u32;
            for (idx, &(g, exp)) in factors.iter().enumerate() {
                let dg = self.d_generator(g);
                if !dg.is_zero() {
                    // d(g^e) = e·g^(e-1)·dg for even g; odd g has e = 1
                    let left = Monomial::from_canonical(factors[..idx].to_vec());
                    let right = Monomial::from_canonical(factors[idx + 1..].to_vec());
                    let mut inner = if exp > 1 {
                        Element::from_monomial(Monomial::from_canonical(vec![(g, exp - 1)]))
                    } else {
                        Element::one()
                    };
                    inner = multiply(&inner, &dg, &self.table)?;
                    let mut coeff = c * Rational::from_integer(exp.into());
                    if prefix_degree % 2 == 1 {
                        coeff = -coeff;
                    }
                    let left = Element::from_monomial(left);
                    let right = Element::from_monomial(right);
                    let t = multiply(&multiply(&left, &inner, &self.table)?, &right, &self.table)?;
                    out += &t.scale(&coeff);
                }
                prefix_degree += exp * self.table.degree(g);
            }
        }
        Ok(out)
    }

    pub fn into_presented(self) -> PresentedCdga {
        PresentedCdga::free(self)
    }

    /// Whether some differential has a term linear in the generators.
    pub fn has_linear_part(&self) -> bool {
        self.differential
            .values()
            .any(|d| d.monomials().any(|m| m.word_length() == 1))
    }
}

/// Per-degree data for a presented algebra: the free monomial basis, the ideal's
/// span in that degree, and the quotient basis (monomials that are not RREF pivots
/// of the ideal).
#[derive(Debug)]
pub struct DegreeSpace {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal: Subspace,
    basis: Vec<usize>,
}

impl DegreeSpace {
    fn build(free: &FreeCdga, relations: &[(u32, Element)], degree: u32) -> Result<Self> {
        let table = free.table();
        let monomials = monomial_basis(table, degree);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for (rdeg, r) in relations {
            if *rdeg > degree {
                continue;
            }
            for m in monomial_basis(table, degree - rdeg) {
                let mut row = vec![Rational::zero(); monomials.len()];
                for (rm, c) in r.terms() {
                    if let Some((neg, prod)) = multiply_monomials(&m, rm, table)? {
                        let i = index[&prod];
                        if neg {
                            row[i] -= c;
                        } else {
                            row[i] += c;
                        }
                    }
                }
                rows.push(row);
            }
        }
        let ideal = Subspace::spanned_by(&rows, monomials.len());
        let mut is_pivot = vec![false; monomials.len()];
        for &p in ideal.pivots() {
            is_pivot[p] = true;
        }
        let basis = (0..monomials.len()).filter(|&i| !is_pivot[i]).collect();
        Ok(Self {
            degree,
            monomials,
            index,
            ideal,
            basis,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Dimension of the quotient in this degree.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of monomials of the free algebra in this degree.
    pub fn free_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().map(|&i| &self.monomials[i])
    }

    fn free_coordinates(&self, e: &Element) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in e.terms() {
            let i = self
                .index
                .get(m)
                .ok_or_else(|| Error::Internal(format!("monomial {m:?} is not of degree {}", self.degree)))?;
            v[*i] += c;
        }
        Ok(v)
    }

    /// Whether a homogeneous element of this degree lies in the ideal.
    pub fn in_ideal(&self, e: &Element) -> Result<bool> {
        Ok(self.ideal.contains(&self.free_coordinates(e)?))
    }

    /// Coordinates of a homogeneous element of this degree in the quotient basis.
    pub fn coordinates(&self, e: &Element) -> Result<Vec<Rational>> {
        let reduced = self.ideal.reduce(&self.free_coordinates(e)?);
        Ok(self.basis.iter().map(|&i| reduced[i].clone()).collect())
    }

    pub fn element(&self, coords: &[Rational]) -> Element {
        assert_eq!(coords.len(), self.basis.len(), "coordinate vector has wrong length");
        self.basis
            .iter()
            .zip(coords)
            .map(|(&i, c)| (self.monomials[i].clone(), c.clone()))
            .collect()
    }

    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        Ok(self.element(&self.coordinates(e)?))
    }
}

#[derive(Default)]
struct Caches {
    spaces: Mutex<HashMap<u32, Arc<DegreeSpace>>>,
    differentials: Mutex<HashMap<u32, Arc<RationalMatrix>>>,
    cohomology: Mutex<HashMap<u32, Arc<CohomologyGroup>>>,
}

/// Free CDGA modulo a homogeneous ideal generated by finitely many relations.
///
/// Degreewise data is memoized behind a mutex; values never change once computed,
/// so concurrent readers see identical results.
pub struct PresentedCdga {
    name: String,
    free: FreeCdga,
    relations: Vec<Element>,
    relation_degrees: Vec<(u32, Element)>,
    caches: Caches,
}

impl Clone for PresentedCdga {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            free: self.free.clone(),
            relations: self.relations.clone(),
            relation_degrees: self.relation_degrees.clone(),
            caches: Caches::default(),
        }
    }
}

impl fmt::Debug for PresentedCdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedCdga")
            .field("name", &self.name)
            .field("free", &self.free)
            .field("relations", &self.relations)
            .finish()
    }
}

impl PartialEq for PresentedCdga {
    fn eq(&self, other: &Self) -> bool {
        self.free == other.free && self.relations == other.relations
    }
}

impl PresentedCdga {
    /// Quotient of `free` by `relations`. Zero relations are dropped; the others must
    /// be homogeneous of degree at least 2.
    pub fn new(free: FreeCdga, relations: Vec<Element>) -> Result<Self> {
        let mut kept = Vec::new();
        let mut relation_degrees = Vec::new();
        for (index, r) in relations.into_iter().enumerate() {
            r.check_ids(free.table())?;
            if r.is_zero() {
                continue;
            }
            let degree = r.degree(free.table()).ok_or(Error::RelationNotHomogeneous(index))?;
            if degree < 2 {
                return Err(Error::RelationDegreeTooLow { index, degree });
            }
            relation_degrees.push((degree, r.clone()));
            kept.push(r);
        }
        Ok(Self {
            name: String::new(),
            free,
            relations: kept,
            relation_degrees,
            caches: Caches::default(),
        })
    }

    pub fn free(free: FreeCdga) -> Self {
        Self::new(free, Vec::new()).expect("no relations")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn free_part(&self) -> &FreeCdga {
        &self.free
    }

    pub fn table(&self) -> &GeneratorTable {
        self.free.table()
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Quotient data in degree `n`, computed once.
    pub fn space(&self, n: u32) -> Result<Arc<DegreeSpace>> {
        if let Some(s) = self.caches.spaces.lock().expect("cache poisoned").get(&n) {
            return Ok(s.clone());
        }
        let space = Arc::new(DegreeSpace::build(&self.free, &self.relation_degrees, n)?);
        Ok(self
            .caches
            .spaces
            .lock()
            .expect("cache poisoned")
            .entry(n)
            .or_insert(space)
            .clone())
    }

    pub fn dim(&self, n: u32) -> Result<usize> {
        Ok(self.space(n)?.dim())
    }

    /// Reduces every homogeneous part to its quotient normal form.
    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        e.check_ids(self.table())?;
        if self.is_free() {
            return Ok(e.clone());
        }
        let mut out = Element::zero();
        for (deg, part) in decompose_homogeneous(e, self.table()) {
            out += &self.space(deg)?.normal_form(&part)?;
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.normal_form(&multiply(a, b, self.table())?)
    }

    /// The differential extended by the signed Leibniz rule, in normal form.
    pub fn apply_differential(&self, e: &Element) -> Result<Element> {
        self.normal_form(&self.free.differential(e)?)
    }

    /// Matrix of `d: A^n -> A^(n+1)` in the quotient bases (columns index degree n).
    pub fn differential_matrix(&self, n: u32) -> Result<Arc<RationalMatrix>> {
        if let Some(m) = self.caches.differentials.lock().expect("cache poisoned").get(&n) {
            return Ok(m.clone());
        }
        let src = self.space(n)?;
        let tgt = self.space(n + 1)?;
        let mut m = RationalMatrix::new(tgt.dim(), src.dim());
        for (j, mono) in src.basis_monomials().enumerate() {
            let image = self.apply_differential(&Element::from_monomial(mono.clone()))?;
            let image = homogeneous_part(&image, self.table(), n + 1)?;
            for (i, v) in tgt.coordinates(&image)?.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        let m = Arc::new(m);
        Ok(self
            .caches
            .differentials
            .lock()
            .expect("cache poisoned")
            .entry(n)
            .or_insert(m)
            .clone())
    }

    pub(crate) fn cached_cohomology(&self, n: u32) -> Option<Arc<CohomologyGroup>> {
        self.caches.cohomology.lock().expect("cache poisoned").get(&n).cloned()
    }

    pub(crate) fn store_cohomology(&self, n: u32, group: Arc<CohomologyGroup>) -> Arc<CohomologyGroup> {
        self.caches
            .cohomology
            .lock()
            .expect("cache poisoned")
            .entry(n)
            .or_insert(group)
            .clone()
    }
}

/// Extracts the degree-`n` part, failing if other degrees are present.
pub(crate) fn homogeneous_part(e: &Element, table: &GeneratorTable, n: u32) -> Result<Element> {
    if e.is_homogeneous_of(table, n) {
        Ok(e.clone())
    } else {
        Err(Error::Internal(format!(
            "expected an element of degree {n}, got `{}`",
            e.display(table)
        )))
    }
}

/// Free-function form of [`PresentedCdga::apply_differential`].
pub fn apply_differential(a: &PresentedCdga, e: &Element) -> Result<Element> {
    a.apply_differential(e)
}
