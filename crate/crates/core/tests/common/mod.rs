//! Shared strategies and independent oracles for the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use sullivan_core::algebra::{power, product};
use sullivan_core::{monomial_basis, Element, FreeCdga, GeneratorTable, LieAlgebra, Rational, RationalMatrix};

pub const SEED: u64 = 0x5eed_2026;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// a, b, c in degree 1 (dc = ab), x in degree 2 (closed), y in degree 3 (dy = x^2 + abx).
pub fn sample_cdga() -> FreeCdga {
    let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1), ("x", 2), ("y", 3)]).unwrap();
    let m = |f: Vec<(usize, u32)>| mono(&t, &f);
    let diffs = vec![
        Element::zero(),
        Element::zero(),
        m(vec![(0, 1), (1, 1)]),
        Element::zero(),
        m(vec![(3, 2)]) + m(vec![(0, 1), (1, 1), (3, 1)]),
    ];
    FreeCdga::with_differentials(t.clone(), diffs).unwrap()
}

/// Product of generator powers, computed through the public multiplication.
pub fn mono(table: &GeneratorTable, factors: &[(usize, u32)]) -> Element {
    let powers: Vec<Element> = factors
        .iter()
        .map(|&(id, e)| power(&Element::generator(id), e, table).unwrap())
        .collect();
    product(powers.iter(), table).unwrap()
}

/// Homogeneous element of degree `deg`: up to four basis monomials with small coefficients.
pub fn homogeneous(table: &GeneratorTable, deg: u32, picks: &[(usize, i64)]) -> Element {
    let basis = monomial_basis(table, deg);
    if basis.is_empty() {
        return Element::zero();
    }
    let mut e = Element::zero();
    for &(i, c) in picks {
        e.add_term(basis[i % basis.len()].clone(), q(c));
    }
    e
}

pub fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..64, -4i64..=4), 1..=4)
}

pub fn homogeneous_strategy(max_deg: u32) -> impl Strategy<Value = (u32, Vec<(usize, i64)>)> {
    (0..=max_deg, picks())
}

/// Sign of the permutation sorting `word` (distinct ids), counting only swaps of
/// two odd letters, by bubble sort. `None` if an odd id repeats.
pub fn bubble_sign(word: &[usize], odd: impl Fn(usize) -> bool) -> Option<i64> {
    let mut seen = BTreeSet::new();
    for &w in word {
        if odd(w) && !seen.insert(w) {
            return None;
        }
    }
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if odd(w[j]) && odd(w[j + 1]) {
                    sign = -sign;
                }
                w.swap(j, j + 1);
            }
        }
    }
    Some(sign)
}

/// All exponent vectors of total degree `n` (odd exponents at most 1), by brute force.
pub fn brute_force_basis(degrees: &[u32], n: u32) -> BTreeSet<Vec<u32>> {
    fn go(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.insert(cur.clone());
            }
            return;
        }
        let max = if degrees[i] % 2 == 1 { 1 } else { left / degrees[i] };
        for e in 0..=max.min(left / degrees[i]) {
            cur.push(e);
            go(degrees, i + 1, left - e * degrees[i], cur, out);
            cur.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(degrees, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Textbook Gaussian elimination on a dense copy.
pub fn naive_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rational::one() / m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn matrix_strategy(max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3].prop_map(q), c),
            r,
        )
    })
}

pub fn to_matrix(rows: &[Vec<Rational>]) -> RationalMatrix {
    RationalMatrix::from_rows(rows, rows.first().map_or(0, Vec::len))
}

/// Random structure constants with `[e_i, e_j]` supported on `e_k`, `k > j`.
pub fn lie_strategy() -> impl Strategy<Value = LieAlgebra> {
    (3usize..=5).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        prop::collection::vec(
            prop_oneof![2 => Just(None), 1 => (0usize..8, -2i64..=2).prop_map(Some)],
            len,
        )
        .prop_map(move |choices| {
            let mut brackets = Vec::new();
            for (&(i, j), choice) in pairs.iter().zip(choices) {
                if let Some((k, c)) = choice {
                    if j + 1 < n && c != 0 {
                        let k = j + 1 + k % (n - j - 1);
                        let mut v = vec![Rational::zero(); n];
                        v[k] = q(c);
                        brackets.push((i, j, v));
                    }
                }
            }
            let basis = (1..=n).map(|i| format!("e{i}")).collect();
            LieAlgebra::new("random", basis, brackets).unwrap()
        })
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
