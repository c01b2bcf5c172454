//! Exact linear algebra over ℚ on sparse row vectors: incremental echelon
//! forms, reduced row echelon form, kernels, subspaces and a fraction-free
//! integer rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Rational;

/// Sparse vector as `(column, value)` pairs, sorted by column, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Drops zeros, sorts by column and merges duplicates.
pub fn normalize(mut v: Vec<(usize, Rational)>) -> SparseVec {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

fn to_dense(ncols: usize, v: &[(usize, Rational)]) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); ncols];
    for (c, x) in v {
        d[*c] += x;
    }
    d
}

fn to_sparse(d: Vec<Rational>) -> SparseVec {
    d.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

/// Row echelon form built one vector at a time. Each stored row has leading
/// entry 1 at its pivot column and no entries in earlier pivot columns at
/// the time it was inserted.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    fn reduce_dense(&self, d: &mut [Rational], skip: Option<usize>) {
        for col in 0..d.len() {
            if d[col].is_zero() || Some(col) == skip {
                continue;
            }
            if let Some(row) = self.rows.get(&col) {
                let c = d[col].clone();
                for (j, a) in row {
                    d[*j] -= &c * a;
                }
            }
        }
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut d = to_dense(self.ncols, v);
        self.reduce_dense(&mut d, None);
        to_sparse(d)
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns its new pivot column if it was independent.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> Option<usize> {
        let mut r = self.reduce(v);
        let (pivot, lead) = r.first().cloned()?;
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, x) in r.iter_mut() {
                *x *= &inv;
            }
        }
        self.rows.insert(pivot, r);
        Some(pivot)
    }

    /// Reduced row echelon form: rows sorted by pivot, pivot entries 1,
    /// pivot columns otherwise zero.
    pub fn into_rref(mut self) -> Vec<SparseVec> {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let row = self.rows.remove(&p).expect("pivot row");
            let mut d = to_dense(self.ncols, &row);
            // Rows with larger pivots are already final; ignore smaller ones.
            let tail = self.rows.split_off(&(p + 1));
            for (col, r) in &tail {
                let c = d[*col].clone();
                if c.is_zero() {
                    continue;
                }
                for (j, a) in r {
                    d[*j] -= &c * a;
                }
            }
            self.rows.extend(tail);
            self.rows.insert(p, to_sparse(d));
        }
        self.rows.into_values().collect()
    }
}

/// Reduced row echelon form of the span of `rows`.
pub fn rref(ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

pub fn rank(ncols: usize, rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis (in reduced row echelon form) of `{v : A v = 0}` where `A` has the
/// given rows.
pub fn nullspace(ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    kernel_of_rref(ncols, &rref(ncols, rows))
}

fn kernel_of_rref(ncols: usize, r: &[SparseVec]) -> Vec<SparseVec> {
    let pivots: Vec<usize> = r.iter().map(|row| row[0].0).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel: BTreeMap<usize, Vec<(usize, Rational)>> = (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|c| (c, vec![(c, Rational::one())]))
        .collect();
    for (row, &p) in r.iter().zip(&pivots) {
        for (j, a) in row.iter().skip(1) {
            kernel.get_mut(j).expect("free column").push((p, -a.clone()));
        }
    }
    let gens: Vec<SparseVec> = kernel.into_values().map(normalize).collect();
    rref(ncols, &gens)
}

/// A subspace of `ℚ^ncols` stored in reduced row echelon form, so equal
/// subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ncols: usize) -> Self {
        Subspace { ncols, rows: Vec::new() }
    }

    pub fn span(ncols: usize, gens: &[SparseVec]) -> Self {
        Subspace { ncols, rows: rref(ncols, gens) }
    }

    pub fn kernel(ncols: usize, constraints: &[SparseVec]) -> Self {
        Subspace { ncols, rows: nullspace(ncols, constraints) }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ncols);
        for r in &self.rows {
            e.rows.insert(r[0].0, r.clone());
        }
        e
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let e = self.echelon();
        other.rows.iter().all(|r| e.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut gens = self.rows.clone();
        gens.extend(other.rows.iter().cloned());
        Subspace::span(self.ncols, &gens)
    }
}

/// Rank of a dense integer matrix by fraction-free (Bareiss) elimination.
pub fn rank_fraction_free(matrix: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Dense integer matrix of sparse rational rows with integral entries.
pub fn to_integer_matrix(ncols: usize, rows: &[SparseVec]) -> Option<Vec<Vec<BigInt>>> {
    rows.iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); ncols];
            for (c, x) in r {
                if !x.is_integer() {
                    return None;
                }
                d[*c] = x.to_integer();
            }
            Some(d)
        })
        .collect()
}
