//! Exact linear algebra over the rationals.
//!
//! Matrices are stored sparsely as a map of rows. Row reduction clears denominators
//! and eliminates over the integers (each row kept primitive), normalizing to the
//! rational RREF only at the end. Pivots are chosen deterministically: leftmost
//! column first, then the lowest remaining row index.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Matrices with fewer columns than this are reduced with dense integer rows.
pub const DENSE_COLUMN_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from dense rows, each of length `cols`.
    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Self {
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given dense vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::new(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&row)
            .and_then(|r| r.get(&col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        if value.is_zero() {
            if let Some(r) = self.entries.get_mut(&row) {
                r.remove(&col);
                if r.is_empty() {
                    self.entries.remove(&row);
                }
            }
        } else {
            self.entries.entry(row).or_default().insert(col, value);
        }
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries
            .iter()
            .flat_map(|(&i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols];
        if let Some(r) = self.entries.get(&i) {
            for (&j, x) in r {
                v[j] = x.clone();
            }
        }
        v
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::new(self.rows, other.cols);
        for (&i, row) in &self.entries {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (&k, a) in row {
                if let Some(orow) = other.entries.get(&k) {
                    for (&j, b) in orow {
                        *acc.entry(j).or_insert_with(Rational::zero) += a * b;
                    }
                }
            }
            for (j, v) in acc {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        let mut out = vec![Rational::zero(); self.rows];
        for (&i, row) in &self.entries {
            for (&j, a) in row {
                out[i] += a * &v[j];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && self.nnz() == self.rows && (0..self.rows).all(|i| self.get(i, i).is_one())
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Rref {
    /// The nonzero rows as dense vectors.
    pub fn basis_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rank).map(|i| self.matrix.row(i)).collect()
    }

    /// Basis of the null space, one vector per non-pivot column (ascending).
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let cols = self.matrix.cols();
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); cols];
                v[free] = Rational::one();
                for (k, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.matrix.get(k, free);
                }
                v
            })
            .collect()
    }
}

/// Integer row: column → nonzero entry.
type IntRow = BTreeMap<usize, BigInt>;

fn clear_denominators(row: &BTreeMap<usize, Rational>) -> IntRow {
    let lcm = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: IntRow = row.iter().map(|(&j, v)| (j, v.numer() * (&lcm / v.denom()))).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// `target := (p/g)·target − (a/g)·pivot_row` where `a` is target's entry at `col`.
fn eliminate(target: &mut IntRow, pivot_row: &IntRow, col: usize) {
    let Some(a) = target.get(&col).cloned() else {
        return;
    };
    let p = &pivot_row[&col];
    let g = a.gcd(p);
    let tm = p / &g;
    let pm = &a / &g;
    if !tm.is_one() {
        for v in target.values_mut() {
            *v *= &tm;
        }
    }
    for (&j, v) in pivot_row {
        let entry = target.entry(j).or_insert_with(BigInt::zero);
        *entry -= &pm * v;
        if entry.is_zero() {
            target.remove(&j);
        }
    }
    make_primitive(target);
}

fn rref_sparse(m: &RationalMatrix) -> Rref {
    let mut rows: Vec<IntRow> = (0..m.rows)
        .filter_map(|i| m.entries.get(&i))
        .map(clear_denominators)
        .filter(|r| !r.is_empty())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    while rank < rows.len() {
        // leftmost leading column among remaining rows; ties broken by lowest row
        let Some((best, col)) = rows[rank..]
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.keys().next().map(|&c| (rank + k, c)))
            .min_by_key(|&(i, c)| (c, i))
        else {
            break;
        };
        rows.swap(rank, best);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for r in tail.iter_mut() {
            eliminate(r, pivot_row, col);
        }
        pivots.push(col);
        rank += 1;
        rows.retain(|r| !r.is_empty());
    }
    back_substitute_and_normalize(rows, pivots, m.rows, m.cols)
}

fn rref_dense(m: &RationalMatrix) -> Rref {
    let cols = m.cols;
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .filter_map(|i| m.entries.get(&i))
        .map(clear_denominators)
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut dense = vec![BigInt::zero(); cols];
            for (j, v) in r {
                dense[j] = v;
            }
            dense
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let p = &pivot_row[col];
        for r in tail.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let g = r[col].gcd(p);
            let tm = p / &g;
            let pm = &r[col] / &g;
            for (x, y) in r.iter_mut().zip(pivot_row.iter()).skip(col) {
                *x = &*x * &tm - &pm * y;
            }
            let content = r.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if !content.is_zero() && !content.is_one() {
                for x in r.iter_mut() {
                    *x /= &content;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let sparse_rows: Vec<IntRow> = rows
        .into_iter()
        .take(rank)
        .map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    back_substitute_and_normalize(sparse_rows, pivots, m.rows, cols)
}

fn back_substitute_and_normalize(mut rows: Vec<IntRow>, pivots: Vec<usize>, nrows: usize, ncols: usize) -> Rref {
    let rank = pivots.len();
    rows.truncate(rank);
    for k in (0..rank).rev() {
        let (head, tail) = rows.split_at_mut(k);
        let pivot_row = &tail[0];
        for r in head.iter_mut() {
            eliminate(r, pivot_row, pivots[k]);
        }
    }
    let mut matrix = RationalMatrix::new(nrows, ncols);
    for (k, row) in rows.iter().enumerate() {
        let lead = &row[&pivots[k]];
        for (&j, v) in row {
            matrix.set(k, j, Rational::new(v.clone(), lead.clone()));
        }
    }
    Rref { matrix, pivots, rank }
}

/// Reduced row echelon form over exact rationals.
pub fn rref(m: &RationalMatrix) -> Rref {
    if m.cols < DENSE_COLUMN_LIMIT {
        rref_dense(m)
    } else {
        rref_sparse(m)
    }
}

/// Sparse-path reduction regardless of width; exposed for cross-checking.
pub fn rref_with_sparse_rows(m: &RationalMatrix) -> Rref {
    rref_sparse(m)
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).rank
}

/// A particular solution of `m·x = b` with all free variables zero.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows, "right-hand side has wrong length");
    let mut aug = RationalMatrix::new(m.rows, m.cols + 1);
    for (i, j, v) in m.entries() {
        aug.set(i, j, v.clone());
    }
    for (i, v) in b.iter().enumerate() {
        aug.set(i, m.cols, v.clone());
    }
    let r = rref(&aug);
    if r.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (k, &p) in r.pivots.iter().enumerate() {
        x[p] = r.matrix.get(k, m.cols);
    }
    Some(x)
}

/// A subspace of `Q^n` held by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by(vectors: &[Vec<Rational>], ambient: usize) -> Self {
        let r = rref(&RationalMatrix::from_rows(vectors, ambient));
        Self {
            ambient,
            basis: r.basis_rows(),
            pivots: r.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// RREF basis vectors.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the span's component so every pivot coordinate of `v` becomes zero.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest absolute numerator or denominator in the matrix; a cheap blowup gauge.
pub fn max_entry_height(m: &RationalMatrix) -> BigInt {
    m.entries()
        .map(|(_, _, v)| v.numer().abs().max(v.denom().abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}
