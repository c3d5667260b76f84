use std::collections::BTreeMap;

use crate::error::{bail, Result};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};

/// A bounded cochain complex of finite-dimensional spaces. `diffs[k]` is
/// the matrix of `d^k : C^k → C^{k+1}` (rows index `C^{k+1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplexFD {
    dims: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, SparseMatrix>,
}

impl ChainComplexFD {
    pub fn new(dims: BTreeMap<i64, usize>, diffs: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let dim = |k: i64| dims.get(&k).copied().unwrap_or(0);
        for (k, m) in &diffs {
            if m.ncols() != dim(*k) || m.nrows() != dim(k + 1) {
                bail!(
                    Structural,
                    "d^{k} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dim(k + 1),
                    dim(*k)
                );
            }
        }
        let diffs = diffs.into_iter().filter(|(_, m)| m.nrows() > 0 && m.ncols() > 0).collect();
        Ok(Self { dims, diffs })
    }

    pub fn dim(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    /// Degrees with nonzero components.
    pub fn degrees(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn differential(&self, k: i64) -> SparseMatrix {
        self.diffs.get(&k).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    /// Degrees `k` with `d^{k+1} d^k ≠ 0`.
    pub fn square_defects(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (k, a) in &self.diffs {
            if let Some(b) = self.diffs.get(&(k + 1)) {
                if !b.mul(a).expect("shapes checked").is_zero() {
                    out.push(*k);
                }
            }
        }
        out
    }

    pub fn rank(&self, k: i64) -> usize {
        self.diffs.get(&k).map_or(0, SparseMatrix::rank)
    }

    /// Basis of `Z^k = ker d^k`.
    pub fn cycles(&self, k: i64) -> Vec<SparseVec> {
        match self.diffs.get(&k) {
            Some(m) => m.kernel(),
            None => (0..self.dim(k)).map(|j| [(j, num_traits::One::one())].into_iter().collect()).collect(),
        }
    }

    /// Independent columns of `d^{k-1}`, a basis of `B^k`.
    pub fn boundaries(&self, k: i64) -> Vec<SparseVec> {
        let Some(m) = self.diffs.get(&(k - 1)) else { return vec![] };
        let mut e = Echelon::new();
        (0..m.ncols()).map(|j| m.column(j)).filter(|c| e.insert(c.clone())).collect()
    }

    pub fn cohomology_dim(&self, k: i64) -> usize {
        self.dim(k) - self.rank(k) - self.rank(k - 1)
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees().into_iter().map(|k| (k, self.cohomology_dim(k))).filter(|(_, d)| *d > 0).collect()
    }
}

/// Kernel dimension of the map induced on cohomology by a chain map
/// `f : A → B`, per degree of `A`. `f[k]` is the matrix of `A^k → B^k`.
pub fn induced_kernel_dims(a: &ChainComplexFD, b: &ChainComplexFD, f: &BTreeMap<i64, SparseMatrix>) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for k in a.degrees() {
        let z = a.cycles(k);
        let fz: Vec<SparseVec> = match f.get(&k) {
            Some(m) => z.iter().map(|v| m.mul_vec(v)).collect(),
            None => vec![SparseVec::new(); z.len()],
        };
        let bb = b.boundaries(k);
        let mut e = Echelon::new();
        for v in bb.iter().chain(&fz) {
            e.insert(v.clone());
        }
        // {z ∈ Z^k : f z ∈ B^k} has dimension dim Z + dim B - dim(fZ + B)
        let pre = z.len() + bb.len() - e.rank();
        out.insert(k, pre - a.rank(k - 1));
    }
    out
}

/// Checks `f d_A = d_B f` in every degree; returns the failing degrees.
pub fn chain_map_defects(a: &ChainComplexFD, b: &ChainComplexFD, f: &BTreeMap<i64, SparseMatrix>) -> Vec<i64> {
    let mut degrees: Vec<i64> = a.degrees();
    degrees.extend(b.degrees());
    degrees.sort();
    degrees.dedup();
    let fk = |k: i64| f.get(&k).cloned().unwrap_or_else(|| SparseMatrix::zeros(b.dim(k), a.dim(k)));
    degrees
        .into_iter()
        .filter(|&k| {
            let lhs = fk(k + 1).mul(&a.differential(k)).expect("shapes");
            let rhs = b.differential(k).mul(&fk(k)).expect("shapes");
            lhs != rhs
        })
        .collect()
}

/// Whether `f` induces an isomorphism on cohomology in every degree.
pub fn is_quasi_isomorphism(a: &ChainComplexFD, b: &ChainComplexFD, f: &BTreeMap<i64, SparseMatrix>) -> bool {
    let mut degrees = a.degrees();
    degrees.extend(b.degrees());
    degrees.sort();
    degrees.dedup();
    let ker = induced_kernel_dims(a, b, f);
    degrees.into_iter().all(|k| a.cohomology_dim(k) == b.cohomology_dim(k) && ker.get(&k).copied().unwrap_or(0) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn two_term(c: i64) -> ChainComplexFD {
        // C^0 = Q --c--> C^1 = Q
        let mut d = SparseMatrix::zeros(1, 1);
        d.add_entry(0, 0, &int(c));
        ChainComplexFD::new([(0, 1), (1, 1)].into(), [(0, d)].into()).unwrap()
    }

    #[test]
    fn acyclic_and_zero_differential() {
        assert!(two_term(3).cohomology_dims().is_empty());
        assert_eq!(two_term(0).cohomology_dims(), [(0, 1), (1, 1)].into());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let d = SparseMatrix::zeros(2, 1);
        assert!(ChainComplexFD::new([(0, 1), (1, 1)].into(), [(0, d)].into()).is_err());
    }

    #[test]
    fn zero_map_on_cohomology_has_full_kernel() {
        let a = two_term(0);
        let f: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
        assert_eq!(induced_kernel_dims(&a, &a, &f), [(0, 1), (1, 1)].into());
        assert!(!is_quasi_isomorphism(&a, &a, &f));
        let mut id = SparseMatrix::zeros(1, 1);
        id.add_entry(0, 0, &int(1));
        let f: BTreeMap<i64, SparseMatrix> = [(0, id.clone()), (1, id)].into();
        assert!(is_quasi_isomorphism(&a, &a, &f));
        assert!(chain_map_defects(&a, &a, &f).is_empty());
    }
}
