//! Exact linear algebra: field contexts, sparse elimination with a
//! Markowitz-style pivot choice, dense row reduction, and integer sparse
//! matrices.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rayon::prelude::*;

use crate::scalar::{inv_mod, is_prime, Rational};

/// A field given by a context value; elements are plain data.
pub trait Field: Sync + Send {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.inv().expect("pivot is nonzero")
    }
}

/// `Z/p` for a prime `p < 2^32`, so products fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Option<Self> {
        (p < (1 << 32) && is_prime(p)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p)
    }
}

pub type SparseRow<E> = Vec<(u32, E)>;

/// `row -= factor * pivot`, both sorted by column.
fn axpy_row<F: Field>(
    field: &F,
    row: &SparseRow<F::Elem>,
    factor: &F::Elem,
    pivot: &SparseRow<F::Elem>,
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < pivot.len() {
        let ca = row.get(a).map(|e| e.0).unwrap_or(u32::MAX);
        let cb = pivot.get(b).map(|e| e.0).unwrap_or(u32::MAX);
        if ca < cb {
            out.push(row[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, field.neg(&field.mul(factor, &pivot[b].1))));
            b += 1;
        } else {
            let v = field.sub(&row[a].1, &field.mul(factor, &pivot[b].1));
            if !field.is_zero(&v) {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// Rank of the span of sparse vectors with coordinates in `0..ncols`.
///
/// Pivot choice: the shortest remaining row, and within it the column with
/// the fewest remaining entries.
pub fn rank_sparse<F: Field>(field: &F, rows: Vec<SparseRow<F::Elem>>, ncols: usize) -> usize {
    let mut active: Vec<SparseRow<F::Elem>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut colcount = vec![0u32; ncols];
    let mut rank = 0;
    while !active.is_empty() {
        colcount.iter_mut().for_each(|c| *c = 0);
        for r in &active {
            for (c, _) in r {
                colcount[*c as usize] += 1;
            }
        }
        let (ri, _) = active
            .iter()
            .enumerate()
            .min_by_key(|(i, r)| (r.len(), *i))
            .unwrap();
        let pivot = active.swap_remove(ri);
        let (pc, pv) = pivot
            .iter()
            .min_by_key(|(c, _)| (colcount[*c as usize], *c))
            .unwrap()
            .clone();
        let pinv = field.inv(&pv);
        for row in active.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                let factor = field.mul(&row[pos].1, &pinv);
                *row = axpy_row(field, row, &factor, &pivot);
            }
        }
        active.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank_dense<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    rref(field, &mut rows).len()
}

/// Basis of `{x : A x = 0}` for the dense matrix `A` given by rows.
pub fn nullspace<F: Field>(
    field: &F,
    mut rows: Vec<Vec<F::Elem>>,
    ncols: usize,
) -> Vec<Vec<F::Elem>> {
    let pivots = rref(field, &mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&rows[r][f]);
            }
            v
        })
        .collect()
}

/// Sparse integer matrix stored by columns; stored entries are nonzero.
///
/// Integer entries embed in every coefficient field, so one matrix serves
/// rational and modular rank computations alike.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            cols: (0..n).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    /// Builds from per-column `(row, value)` lists; merges repeats and drops zeros.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        let ncols = cols.len();
        let cols = cols.into_iter().map(normalize_column).collect();
        SparseMatrix { nrows, ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&(r as u32), |e| e.0)
            .map(|i| self.cols[c][i].1)
            .unwrap_or(0)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Self::from_columns(self.nrows, cols)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let cols = other
            .cols
            .par_iter()
            .map(|col| {
                let mut acc: Vec<(u32, i64)> = Vec::new();
                for &(k, v) in col {
                    acc.extend(self.cols[k as usize].iter().map(|&(r, w)| (r, v * w)));
                }
                normalize_column(acc)
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            cols,
        }
    }

    pub fn to_dense<F: Field>(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut rows = vec![vec![field.zero(); self.ncols]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r as usize][c] = field.from_i64(v);
            }
        }
        rows
    }

    fn column_rows<F: Field>(&self, field: &F, cols: &[usize]) -> Vec<SparseRow<F::Elem>> {
        cols.iter()
            .map(|&c| {
                self.cols[c]
                    .iter()
                    .map(|&(r, v)| (r, field.from_i64(v)))
                    .filter(|(_, v)| !field.is_zero(v))
                    .collect()
            })
            .collect()
    }

    pub fn rank<F: Field>(&self, field: &F) -> usize {
        let all: Vec<usize> = (0..self.ncols).collect();
        rank_sparse(field, self.column_rows(field, &all), self.nrows)
    }

    /// Rank computed block by block. Columns are grouped by `key`; the
    /// decomposition is used only if the groups have pairwise disjoint row
    /// supports, otherwise this is [`rank`](Self::rank).
    pub fn rank_by_blocks<F: Field, K: Ord>(&self, field: &F, key: impl Fn(usize) -> K) -> usize {
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for c in 0..self.ncols {
            groups.entry(key(c)).or_default().push(c);
        }
        let groups: Vec<Vec<usize>> = groups.into_values().collect();
        let mut owner = vec![usize::MAX; self.nrows];
        for (g, cols) in groups.iter().enumerate() {
            for &c in cols {
                for &(r, _) in &self.cols[c] {
                    if owner[r as usize] != usize::MAX && owner[r as usize] != g {
                        return self.rank(field);
                    }
                    owner[r as usize] = g;
                }
            }
        }
        groups
            .par_iter()
            .map(|cols| rank_sparse(field, self.column_rows(field, cols), self.nrows))
            .sum()
    }

    /// Applies the matrix to a dense vector.
    pub fn apply<F: Field>(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![field.zero(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if field.is_zero(&v[c]) {
                continue;
            }
            for &(r, x) in col {
                out[r as usize] =
                    field.add(&out[r as usize], &field.mul(&field.from_i64(x), &v[c]));
            }
        }
        out
    }
}

fn normalize_column(mut col: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_to_sparse(rows: &[Vec<i64>]) -> Vec<SparseRow<u64>> {
        let f = PrimeField::new(101).unwrap();
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v % 101 != 0)
                    .map(|(c, v)| (c as u32, f.from_i64(*v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_ranks() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let q: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        assert_eq!(rank_dense(&RationalField, q), 2);
        assert_eq!(
            rank_sparse(&PrimeField::new(101).unwrap(), dense_to_sparse(&rows), 3),
            2
        );
        // rank drops modulo 3: det = 3
        let m = SparseMatrix::from_columns(2, vec![vec![(0, 1), (1, 1)], vec![(0, -1), (1, 2)]]);
        assert_eq!(m.rank(&RationalField), 2);
        assert_eq!(m.rank(&PrimeField::new(3).unwrap()), 1);
    }

    #[test]
    fn nullspace_annihilates() {
        let rows = vec![vec![1i64, 1, 0, 0], vec![0, 0, 1, -1]];
        let q: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        let ker = nullspace(&RationalField, q.clone(), 4);
        assert_eq!(ker.len(), 2);
        for v in ker {
            for r in &q {
                let dot = r
                    .iter()
                    .zip(&v)
                    .fold(Rational::zero(), |s, (a, b)| s.add(&a.mul(b)));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn block_rank_matches_whole() {
        let m = SparseMatrix::from_columns(
            4,
            vec![
                vec![(0, 1), (1, 1)],
                vec![(0, 2), (1, 2)],
                vec![(2, 1)],
                vec![(3, 5), (2, 1)],
            ],
        );
        assert_eq!(m.rank_by_blocks(&RationalField, |c| c / 2), 3);
        assert_eq!(m.rank(&RationalField), 3);
        // bad partition falls back
        assert_eq!(m.rank_by_blocks(&RationalField, |c| c % 2), 3);
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..7)) {
            let f = PrimeField::new(101).unwrap();
            let dense: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            prop_assert_eq!(rank_sparse(&f, dense_to_sparse(&rows), 6), rank_dense(&f, dense));
            let q: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect()).collect();
            let rq = rank_dense(&RationalField, q);
            let qs: Vec<SparseRow<Rational>> = rows.iter().map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, &v)| (c as u32, Rational::from_integer(v))).collect()).collect();
            prop_assert_eq!(rank_sparse(&RationalField, qs, 6), rq);
            prop_assert!(rank_sparse(&f, dense_to_sparse(&rows), 6) <= rq);
        }

        #[test]
        fn product_is_associative(a in prop::collection::vec(-2i64..=2, 9), b in prop::collection::vec(-2i64..=2, 9)) {
            let mk = |v: &[i64]| SparseMatrix::from_columns(3, (0..3).map(|c| (0..3).map(|r| (r as u32, v[3 * c + r])).collect()).collect());
            let (ma, mb) = (mk(&a), mk(&b));
            let ab = ma.mul(&mb);
            for r in 0..3 {
                for c in 0..3 {
                    let expect: i64 = (0..3).map(|k| ma.get(r, k) * mb.get(k, c)).sum();
                    prop_assert_eq!(ab.get(r, c), expect);
                }
            }
            prop_assert_eq!(ma.mul(&SparseMatrix::identity(3)), ma);
        }
    }
}
