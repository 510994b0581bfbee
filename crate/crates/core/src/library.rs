//! Standard input algebras: spheres, complex projective spaces, tori, tensor
//! products and Chevalley–Eilenberg algebras of finite-dimensional Lie algebras.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::algebra::{Element, GeneratorTable, Monomial};
use crate::cdga::{validate, FreeCdga, PresentedCdga};
use crate::error::{Error, Result};
use crate::format::{parse_expression, LieDescription};
use crate::linalg::Subspace;
use crate::Rational;

fn power_of(id: usize, exp: u32) -> Element {
    Element::from_monomial(Monomial::from_canonical(vec![(id, exp)]))
}

/// Odd `n`: free on one closed generator of degree `n`. Even `n`: `Q[e]/(e^2)`.
pub fn sphere_model(n: u32) -> Result<PresentedCdga> {
    if n == 0 {
        return Err(Error::PreconditionViolated("sphere dimension must be positive".into()));
    }
    let table = GeneratorTable::from_pairs(&[("e", n)])?;
    let free = FreeCdga::closed(table);
    let relations = if n.is_multiple_of(2) {
        vec![power_of(0, 2)]
    } else {
        vec![]
    };
    Ok(PresentedCdga::new(free, relations)?.with_name(format!("S^{n}")))
}

/// `Q[e]/(e^(n+1))` with `|e| = 2`.
pub fn projective_model(n: u32) -> Result<PresentedCdga> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "projective dimension must be positive".into(),
        ));
    }
    let table = GeneratorTable::from_pairs(&[("e", 2)])?;
    Ok(PresentedCdga::new(FreeCdga::closed(table), vec![power_of(0, n + 1)])?.with_name(format!("CP^{n}")))
}

/// Exterior algebra on `n` closed degree-1 generators `a1..an`.
pub fn torus_model(n: usize) -> FreeCdga {
    let pairs: Vec<(String, u32)> = (1..=n).map(|i| (format!("a{i}"), 1)).collect();
    FreeCdga::closed(GeneratorTable::from_pairs(&pairs).expect("distinct names"))
}

/// `{a, b, c} in degree 1, dc = ab`.
pub fn heisenberg_model() -> PresentedCdga {
    let table = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).expect("distinct names");
    let ab = Element::from_monomial(Monomial::from_canonical(vec![(0, 1), (1, 1)]));
    FreeCdga::with_differentials(table, vec![Element::zero(), Element::zero(), ab])
        .expect("lengths match")
        .into_presented()
        .with_name("heisenberg")
}

/// The ground field as a CDGA (no generators).
pub fn unit_model() -> PresentedCdga {
    FreeCdga::closed(GeneratorTable::new()).into_presented().with_name("Q")
}

/// `name`, or `name_2`, `name_3`, ... whichever is first not in `taken`.
pub(crate) fn fresh_name(name: &str, taken: &HashSet<String>) -> String {
    if !taken.contains(name) {
        return name.to_string();
    }
    (2..)
        .map(|k| format!("{name}_{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded search")
}

/// Joins the generator tables of `a` and `b` (in that order), renaming clashing
/// names from `b`. Returns the table and the id offset of `b`'s generators.
pub(crate) fn joined_table(a: &GeneratorTable, b: &GeneratorTable) -> Result<(GeneratorTable, usize)> {
    let mut table = a.clone();
    let mut taken: HashSet<String> = a.iter().map(|g| g.name.clone()).collect();
    taken.extend(b.iter().map(|g| g.name.clone()));
    for g in b.iter() {
        let name = if a.id_of(&g.name).is_some() {
            fresh_name(&g.name, &taken)
        } else {
            g.name.clone()
        };
        taken.insert(name.clone());
        table.push(&name, g.degree)?;
    }
    Ok((table, a.len()))
}

/// `A ⊗ B`: generators of `A` then `B`, relations of both, differential acting
/// factor-wise (Koszul signs come from the Leibniz rule).
pub fn tensor_product(a: &PresentedCdga, b: &PresentedCdga) -> Result<PresentedCdga> {
    let (table, offset) = joined_table(a.table(), b.table())?;
    let mut free = FreeCdga::new(table.clone());
    for g in a.table().iter() {
        if let Some(d) = a.free_part().differential_of(g.id) {
            free.set_differential(g.id, d.clone())?;
        }
    }
    for g in b.table().iter() {
        if let Some(d) = b.free_part().differential_of(g.id) {
            free.set_differential(g.id + offset, d.relabel(|i| i + offset, &table)?)?;
        }
    }
    let mut relations: Vec<Element> = a.relations().to_vec();
    for r in b.relations() {
        relations.push(r.relabel(|i| i + offset, &table)?);
    }
    let name = match (a.name(), b.name()) {
        ("", "") => String::new(),
        (x, y) => format!("{x} ⊗ {y}"),
    };
    Ok(PresentedCdga::new(free, relations)?.with_name(name))
}

/// `(i, j, [(k, c_k), ...])` for `[e_i, e_j] = Σ c_k e_k`.
pub type IntegerBracket<'a> = (usize, usize, &'a [(usize, i64)]);

/// Finite-dimensional Lie algebra over `Q` by structure constants on a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    /// `[e_i, e_j]` for `i < j`, as coordinate vectors; absent pairs commute.
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl LieAlgebra {
    /// Structure constants given as `(i, j, [e_i, e_j])`. Pairs with `i > j` are
    /// stored antisymmetrically; `i == j` must bracket to zero.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        brackets: Vec<(usize, usize, Vec<Rational>)>,
    ) -> Result<Self> {
        let n = basis.len();
        let mut seen = HashSet::new();
        for b in &basis {
            if !seen.insert(b.clone()) {
                return Err(Error::InvalidLieAlgebra(format!("duplicate basis element `{b}`")));
            }
        }
        let mut table = BTreeMap::new();
        for (i, j, v) in brackets {
            if i >= n || j >= n || v.len() != n {
                return Err(Error::InvalidLieAlgebra(format!("bracket ({i}, {j}) out of range")));
            }
            if i == j {
                if v.iter().any(|c| !c.is_zero()) {
                    return Err(Error::InvalidLieAlgebra(format!("[e{i}, e{i}] must vanish")));
                }
                continue;
            }
            let (key, value) = if i < j {
                ((i, j), v)
            } else {
                ((j, i), v.into_iter().map(|c| -c).collect())
            };
            if table.insert(key, value).is_some() {
                return Err(Error::InvalidLieAlgebra(format!("bracket ({i}, {j}) given twice")));
            }
        }
        table.retain(|_, v: &mut Vec<Rational>| v.iter().any(|c| !c.is_zero()));
        Ok(Self {
            name: name.into(),
            basis,
            brackets: table,
        })
    }

    /// Integer structure constants `[e_i, e_j] = Σ c_k e_k`, indices 0-based.
    pub fn from_integer_brackets(name: &str, basis: &[&str], brackets: &[IntegerBracket<'_>]) -> Result<Self> {
        let n = basis.len();
        let list = brackets
            .iter()
            .map(|&(i, j, terms)| {
                let mut v = vec![Rational::zero(); n];
                for &(k, c) in terms {
                    v[k] += Rational::from_integer(c.into());
                }
                (i, j, v)
            })
            .collect();
        Self::new(name, basis.iter().map(|s| s.to_string()).collect(), list)
    }

    pub fn from_description(desc: &LieDescription) -> Result<Self> {
        let pairs: Vec<(String, u32)> = desc.basis.iter().map(|b| (b.clone(), 1)).collect();
        let table = GeneratorTable::from_pairs(&pairs)?;
        let n = desc.basis.len();
        let mut brackets = Vec::new();
        for bracket in &desc.brackets {
            let lookup = |name: &str| {
                table
                    .id_of(name)
                    .ok_or_else(|| Error::InvalidLieAlgebra(format!("unknown basis element `{name}`")))
            };
            let (i, j) = (lookup(&bracket.left)?, lookup(&bracket.right)?);
            let value = parse_expression(
                &bracket.value,
                &table,
                &format!("[{}, {}]", bracket.left, bracket.right),
            )?;
            let mut v = vec![Rational::zero(); n];
            for (m, c) in value.terms() {
                match m.factors() {
                    [(k, 1)] => v[*k] += c,
                    _ => {
                        return Err(Error::InvalidLieAlgebra(format!(
                            "[{}, {}] must be a linear combination of basis elements",
                            bracket.left, bracket.right
                        )))
                    }
                }
            }
            brackets.push((i, j, v));
        }
        Self::new(desc.name.clone(), desc.basis.clone(), brackets)
    }

    pub fn to_description(&self) -> LieDescription {
        let pairs: Vec<(String, u32)> = self.basis.iter().map(|b| (b.clone(), 1)).collect();
        let table = GeneratorTable::from_pairs(&pairs).expect("distinct names");
        LieDescription {
            name: self.name.clone(),
            basis: self.basis.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), v)| crate::format::BracketSpec {
                    left: self.basis[i].clone(),
                    right: self.basis[j].clone(),
                    value: self.vector_element(v).display(&table).to_string(),
                })
                .collect(),
        }
    }

    fn vector_element(&self, v: &[Rational]) -> Element {
        v.iter()
            .enumerate()
            .map(|(k, c)| (Monomial::generator(k), c.clone()))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => vec![Rational::zero(); n],
            std::cmp::Ordering::Less => self
                .brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| vec![Rational::zero(); n]),
            std::cmp::Ordering::Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|c| -c).collect())
                .unwrap_or_else(|| vec![Rational::zero(); n]),
        }
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (&(i, j), c) in &self.brackets {
            let coeff = &u[i] * &v[j] - &u[j] * &v[i];
            if coeff.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(c) {
                *o += &coeff * x;
            }
        }
        out
    }

    /// First basis triple `i < j < k` on which the Jacobi identity fails.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&self.bracket_basis(i, j), &e(k));
                    let b = self.bracket(&self.bracket_basis(j, k), &e(i));
                    let c = self.bracket(&self.bracket_basis(k, i), &e(j));
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn abelian(n: usize) -> Self {
        let basis = (1..=n).map(|i| format!("e{i}")).collect();
        Self::new(format!("abelian{n}"), basis, Vec::new()).expect("no brackets")
    }

    /// `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        Self::from_integer_brackets("heisenberg", &["e1", "e2", "e3"], &[(0, 1, &[(2, 1)])]).expect("valid")
    }

    /// Four-dimensional filiform algebra: `[e1, e2] = e3`, `[e1, e3] = e4`.
    pub fn filiform4() -> Self {
        Self::from_integer_brackets(
            "filiform4",
            &["e1", "e2", "e3", "e4"],
            &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)])],
        )
        .expect("valid")
    }

    /// Heisenberg algebra plus a central line: `[e1, e2] = e3`, `e4` central.
    pub fn heisenberg_plus_line() -> Self {
        Self::from_integer_brackets("heisenberg+line", &["e1", "e2", "e3", "e4"], &[(0, 1, &[(2, 1)])]).expect("valid")
    }
}

/// Chevalley–Eilenberg algebra: degree-1 generators dual to the basis with
/// `d(e^k) = -Σ_{i<j} c^k_{ij} e^i e^j`. Fails with the offending triple when the
/// Jacobi identity (equivalently `d² = 0`) does not hold.
pub fn chevalley_eilenberg(lie: &LieAlgebra) -> Result<FreeCdga> {
    let n = lie.dim();
    let pairs: Vec<(String, u32)> = lie.basis().iter().map(|b| (b.clone(), 1)).collect();
    let table = GeneratorTable::from_pairs(&pairs)?;
    let mut diffs = vec![Element::zero(); n];
    for (&(i, j), v) in &lie.brackets {
        let eij = Monomial::from_canonical(vec![(i, 1), (j, 1)]);
        for (k, c) in v.iter().enumerate() {
            diffs[k].add_term(eij.clone(), -c.clone());
        }
    }
    let free = FreeCdga::with_differentials(table, diffs)?;
    let report = validate(&free.clone().into_presented(), 1)?;
    if !report.passed() {
        return Err(match lie.jacobi_violation() {
            Some((i, j, k)) => Error::JacobiFailure { i, j, k },
            None => Error::Internal(format!("d^2 != 0 but Jacobi holds:\n{report}")),
        });
    }
    Ok(free)
}

/// Outcome of the lower-central-series computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// `L^(c+1) = 0` for this `c` (0 for the zero algebra).
    Nilpotent(usize),
    /// The series stalls at a nonzero ideal of this dimension.
    NotNilpotent { stable_dim: usize },
}

/// Length of the lower central series `L ⊇ [L, L] ⊇ [L, [L, L]] ⊇ ...`.
pub fn lie_nilpotency_class(lie: &LieAlgebra) -> Nilpotency {
    let n = lie.dim();
    let mut current = Subspace::spanned_by(
        &(0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                v
            })
            .collect::<Vec<_>>(),
        n,
    );
    let mut class = 0;
    while current.dim() > 0 {
        let mut products = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            for v in current.basis() {
                products.push(lie.bracket(&e, v));
            }
        }
        let next = Subspace::spanned_by(&products, n);
        if next.dim() == current.dim() {
            return Nilpotency::NotNilpotent { stable_dim: next.dim() };
        }
        current = next;
        class += 1;
    }
    Nilpotency::Nilpotent(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_summary;

    #[test]
    fn spheres() {
        let s1 = sphere_model(1).unwrap();
        assert_eq!(s1.table().len(), 1);
        assert!(s1.is_free());
        let s3 = sphere_model(3).unwrap();
        assert!(s3.free_part().minimality().minimal);
        let s2 = sphere_model(2).unwrap();
        assert_eq!(s2.relations().len(), 1);
        assert!(sphere_model(0).is_err());
    }

    #[test]
    fn projective_line_is_the_two_sphere() {
        assert_eq!(projective_model(1).unwrap(), sphere_model(2).unwrap());
        let cp2 = projective_model(2).unwrap();
        assert_eq!(
            cohomology_summary(&cp2, 6).unwrap().betti_numbers(),
            vec![1, 0, 1, 0, 1, 0, 0]
        );
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_product(&torus_model(2).into_presented(), &sphere_model(3).unwrap()).unwrap();
        let degrees: Vec<u32> = t.table().iter().map(|g| g.degree).collect();
        assert_eq!(degrees, vec![1, 1, 3]);
        let h = heisenberg_model();
        let with_unit = tensor_product(&unit_model(), &h).unwrap();
        assert_eq!(with_unit.free_part(), h.free_part());
        assert_eq!(
            cohomology_summary(&torus_model(2).into_presented(), 2)
                .unwrap()
                .betti_numbers(),
            vec![1, 2, 1]
        );
    }

    #[test]
    fn tensor_renames_clashes() {
        let t = tensor_product(&sphere_model(2).unwrap(), &sphere_model(2).unwrap()).unwrap();
        let names: Vec<&str> = t.table().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["e", "e_2"]);
        assert_eq!(t.relations().len(), 2);
        assert_eq!(cohomology_summary(&t, 4).unwrap().betti_numbers(), vec![1, 0, 2, 0, 1]);
    }

    #[test]
    fn abelian_gives_torus() {
        let ce = chevalley_eilenberg(&LieAlgebra::abelian(3)).unwrap();
        assert!((0..3).all(|i| ce.d_generator(i).is_zero()));
    }

    #[test]
    fn heisenberg_ce() {
        let ce = chevalley_eilenberg(&LieAlgebra::heisenberg()).unwrap();
        let ab = Element::from_monomial(Monomial::from_canonical(vec![(0, 1), (1, 1)]));
        assert_eq!(ce.d_generator(2), -ab);
        let v = ce.minimality();
        assert!(v.minimal);
        assert_eq!(v.ordering, Some(vec![0, 1, 2]));
        let a = ce.into_presented();
        assert_eq!(cohomology_summary(&a, 3).unwrap().betti_numbers(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn jacobi_failure() {
        // [e1, e2] = e4, [e3, e4] = e4 breaks Jacobi on (e1, e2, e3):
        // [[e1,e2],e3] = [e4,e3] = -e4 while the other two terms vanish
        let bad = LieAlgebra::from_integer_brackets(
            "bad",
            &["e1", "e2", "e3", "e4"],
            &[(0, 1, &[(3, 1)]), (2, 3, &[(3, 1)])],
        )
        .unwrap();
        assert!(matches!(
            chevalley_eilenberg(&bad),
            Err(Error::JacobiFailure { i: 0, j: 1, k: 2 })
        ));
    }

    #[test]
    fn brackets_with_shared_target_can_satisfy_jacobi() {
        // [e1,e2] = e3, [e1,e3] = e4, [e2,e3] = e4 is a genuine Lie algebra
        let lie = LieAlgebra::from_integer_brackets(
            "shared",
            &["e1", "e2", "e3", "e4"],
            &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)]), (1, 2, &[(3, 1)])],
        )
        .unwrap();
        assert_eq!(lie.jacobi_violation(), None);
        assert!(chevalley_eilenberg(&lie).is_ok());
    }

    #[test]
    fn nilpotency_classes() {
        assert_eq!(lie_nilpotency_class(&LieAlgebra::abelian(3)), Nilpotency::Nilpotent(1));
        assert_eq!(
            lie_nilpotency_class(&LieAlgebra::heisenberg()),
            Nilpotency::Nilpotent(2)
        );
        assert_eq!(lie_nilpotency_class(&LieAlgebra::filiform4()), Nilpotency::Nilpotent(3));
        let affine = LieAlgebra::from_integer_brackets("aff", &["e1", "e2"], &[(0, 1, &[(1, 1)])]).unwrap();
        assert_eq!(
            lie_nilpotency_class(&affine),
            Nilpotency::NotNilpotent { stable_dim: 1 }
        );
    }

    #[test]
    fn antisymmetric_input() {
        let a = LieAlgebra::from_integer_brackets("h", &["x", "y", "z"], &[(1, 0, &[(2, -1)])]).unwrap();
        assert_eq!(
            a,
            LieAlgebra::from_integer_brackets("h", &["x", "y", "z"], &[(0, 1, &[(2, 1)])]).unwrap()
        );
        assert!(LieAlgebra::from_integer_brackets("bad", &["x"], &[(0, 0, &[(0, 1)])]).is_err());
    }

    #[test]
    fn description_round_trip() {
        let lie = LieAlgebra::filiform4();
        let back = LieAlgebra::from_description(&lie.to_description()).unwrap();
        assert_eq!(back, lie);
    }
}
