//! Exact sparse linear algebra over the rationals.
//!
//! Elimination is row-echelon with leftmost pivots, taken in the order rows
//! arrive. With canonical row and column orders this gives deterministic
//! bases for kernels, images and complements.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{bail, Result};
use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn axpy(y: &mut SparseVec, a: &Scalar, x: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (j, v) in x {
        let e = y.entry(*j).or_insert_with(Scalar::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(j);
        }
    }
}

pub fn dot(x: &SparseVec, y: &SparseVec) -> Scalar {
    let (a, b) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let mut s = Scalar::zero();
    for (j, v) in a {
        if let Some(w) = b.get(j) {
            s += v * w;
        }
    }
    s
}

/// Row-major sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        Self { nrows: rows.len(), ncols, rows }
    }

    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                m.rows[*i].insert(j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[i].entry(j).or_insert_with(Scalar::zero);
        *e += v;
        if e.is_zero() {
            self.rows[i].remove(&j);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                t.rows[*j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let mut c = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(v) = r.get(&j) {
                c.insert(i, v.clone());
            }
        }
        c
    }

    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let s = dot(r, x);
            if !s.is_zero() {
                out.insert(i, s);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows {
            bail!(Argument, "shape mismatch {}x{} * {}x{}", self.nrows, self.ncols, other.nrows, other.ncols);
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, v) in r {
                axpy(&mut acc, v, &other.rows[*k]);
            }
            out.rows[i] = acc;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of the right null space, one vector per free column, in
    /// increasing free-column order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = Echelon::new();
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.reduce_fully();
        let pivots: Vec<usize> = e.pivots.keys().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| !e.pivots.contains_key(c)) {
            let mut v = SparseVec::new();
            v.insert(f, Scalar::one());
            for &c in &pivots {
                if let Some(x) = e.pivots[&c].row.get(&f) {
                    v.insert(c, -x.clone());
                }
            }
            out.push(v);
        }
        out
    }

    /// A solution of `self · x = b` with free variables set to zero, or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut e = Echelon::new();
        for (i, r) in self.rows.iter().enumerate() {
            let rhs = b.get(&i).cloned().unwrap_or_else(Scalar::zero);
            let mut aux = SparseVec::new();
            if !rhs.is_zero() {
                aux.insert(0, rhs);
            }
            if let Some(res) = e.insert_with(r.clone(), aux) {
                if !res.is_empty() {
                    return None;
                }
            }
        }
        Some(e.back_substitute())
    }
}

#[derive(Debug, Clone)]
struct PivotRow {
    row: SparseVec,
    aux: SparseVec,
}

/// Incremental row-echelon form. Every stored row has its pivot (its
/// smallest column) normalized to one, and contains no other pivot column
/// smaller than its own.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, PivotRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    fn reduce(&self, row: &mut SparseVec, aux: &mut SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c));
            let Some(c) = next else { break };
            let f = -row[&c].clone();
            let p = &self.pivots[&c];
            axpy(row, &f, &p.row);
            axpy(aux, &f, &p.aux);
            cursor = c + 1;
        }
    }

    /// Reduces a vector against the stored rows; the result is zero iff the
    /// vector lies in the row span.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        let mut a = SparseVec::new();
        self.reduce(&mut r, &mut a);
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residual(v).is_empty()
    }

    /// Inserts a row; returns `true` if it was independent.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        self.insert_with(row, SparseVec::new()).is_none()
    }

    /// Inserts a row carrying auxiliary data that undergoes the same row
    /// operations. If the row is dependent, returns the reduced auxiliary
    /// part.
    pub fn insert_with(&mut self, mut row: SparseVec, mut aux: SparseVec) -> Option<SparseVec> {
        self.reduce(&mut row, &mut aux);
        let Some((&c, lead)) = row.iter().next() else {
            return Some(aux);
        };
        let inv = Scalar::one() / lead;
        for v in row.values_mut() {
            *v *= &inv;
        }
        for v in aux.values_mut() {
            *v *= &inv;
        }
        self.pivots.insert(c, PivotRow { row, aux });
        None
    }

    /// Turns the echelon form into reduced row-echelon form.
    fn reduce_fully(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for (k, &c) in cols.iter().enumerate() {
            let mut p = self.pivots.remove(&c).unwrap();
            // later pivots (larger columns) are already fully reduced
            for &c2 in cols[..k].iter().rev() {
                if let Some(f) = p.row.get(&c2).cloned() {
                    let q = &self.pivots[&c2];
                    axpy(&mut p.row, &-f.clone(), &q.row);
                    axpy(&mut p.aux, &-f, &q.aux);
                }
            }
            self.pivots.insert(c, p);
        }
    }

    /// Solves with free variables zero, reading the right-hand side from
    /// auxiliary slot 0.
    fn back_substitute(&self) -> SparseVec {
        let mut x = SparseVec::new();
        for (&c, p) in self.pivots.iter().rev() {
            let mut v = p.aux.get(&0).cloned().unwrap_or_else(Scalar::zero);
            for (j, a) in p.row.range(c + 1..) {
                if let Some(xj) = x.get(j) {
                    v -= a * xj;
                }
            }
            if !v.is_zero() {
                x.insert(c, v);
            }
        }
        x
    }
}

/// Coordinates of `v` in terms of the given independent vectors, or `None`
/// if `v` is not in their span.
pub fn coordinates(basis: &[SparseVec], v: &SparseVec) -> Option<SparseVec> {
    let n = basis.iter().flat_map(|b| b.keys().copied()).chain(v.keys().copied()).max().map_or(0, |m| m + 1);
    let a = SparseMatrix::from_columns(n, basis);
    let x = a.solve(v)?;
    (a.mul_vec(&x) == *v).then_some(x)
}

/// Outcome of [`solve_or_certify`].
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Solved(SparseVec),
    /// `y` with `yᵀA = 0` and `yᵀb = 1`.
    Infeasible(SparseVec),
}

/// Solves `A x = b`, or produces a left certificate of infeasibility.
pub fn solve_or_certify(a: &SparseMatrix, b: &SparseVec) -> Result<Solution> {
    if let Some(x) = a.solve(b) {
        if a.mul_vec(&x) != *b {
            bail!(InternalConsistency, "back-substitution produced a non-solution");
        }
        return Ok(Solution::Solved(x));
    }
    // [Aᵀ ; bᵀ] y = [0 ; 1]
    let mut rows = a.transpose().rows;
    rows.push(b.clone());
    let m = SparseMatrix::from_rows(a.nrows(), rows);
    let mut rhs = SparseVec::new();
    rhs.insert(m.nrows() - 1, Scalar::one());
    match m.solve(&rhs) {
        Some(y) => Ok(Solution::Infeasible(y)),
        None => bail!(InternalConsistency, "system is neither solvable nor certifiably infeasible"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sv(pairs: &[(usize, i64)]) -> SparseVec {
        pairs.iter().filter(|(_, v)| *v != 0).map(|&(i, v)| (i, int(v))).collect()
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let ncols = rows[0].len();
        SparseMatrix::from_rows(
            ncols,
            rows.iter().map(|r| sv(&r.iter().copied().enumerate().collect::<Vec<_>>())).collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        let b = sv(&[(0, 1), (1, 2), (2, 3)]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let bad = sv(&[(0, 1), (1, 2), (2, 4)]);
        assert!(a.solve(&bad).is_none());
        match solve_or_certify(&a, &bad).unwrap() {
            Solution::Infeasible(y) => {
                assert!(a.transpose().mul_vec(&y).is_empty());
                assert_eq!(dot(&y, &bad), int(1));
            }
            Solution::Solved(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(1, 2), (3, 1)])));
        assert!(e.insert(sv(&[(0, 1), (1, 1)])));
        assert!(!e.insert(sv(&[(0, 2), (1, 4), (3, 1)])));
        assert!(e.contains(&sv(&[(0, 1), (1, 3), (3, 1)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn coordinates_in_basis() {
        let b = vec![sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])];
        let c = coordinates(&b, &sv(&[(0, 2), (1, 5)])).unwrap();
        assert_eq!(c, sv(&[(0, 2), (1, 3)]));
        assert!(coordinates(&b, &sv(&[(2, 1)])).is_none());
    }
}
