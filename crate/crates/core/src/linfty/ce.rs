use std::collections::{BTreeMap, HashMap};

use super::complex::{induced_kernel_dims, ChainComplexFD};
use super::structure::check_linfty;
use crate::coalgebra::{Coderivation, Variant};
use crate::error::{bail, Result};
use crate::linalg::SparseMatrix;
use crate::perm::{canonical_sym, splits};
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;

/// A basis coderivation: the map sending one canonical monomial to one
/// generator and every other monomial to zero.
pub type CoderBasis = (Vec<usize>, usize);

/// Coderivations with coefficients in a range of arities, with the
/// differential `[Q, -]`.
#[derive(Debug, Clone)]
pub struct CeComplex {
    pub variant: Variant,
    /// Arities `lo..=hi` of the coefficients kept.
    pub arities: (usize, usize),
    pub complex: ChainComplexFD,
    pub basis: BTreeMap<i64, Vec<CoderBasis>>,
    index: HashMap<CoderBasis, (i64, usize)>,
}

impl CeComplex {
    /// Degree and position of a basis coderivation.
    pub fn locate(&self, b: &CoderBasis) -> Option<(i64, usize)> {
        self.index.get(b).copied()
    }
}

fn coder_basis(space: &GradedSpace, lo: usize, hi: usize) -> BTreeMap<i64, Vec<CoderBasis>> {
    let mut out: BTreeMap<i64, Vec<CoderBasis>> = BTreeMap::new();
    for len in lo..=hi {
        for m in space.sym_monomials(len) {
            let dm = space.monomial_degree(&m);
            for g in 0..space.dim() {
                out.entry(space.degree(g) - dm).or_default().push((m.clone(), g));
            }
        }
    }
    out
}

/// The range of arities used for a truncation arity `n`: reduced
/// coderivations keep `1..=n`, non-reduced ones `0..=n-1` (their bracket
/// with `Q` in arity `k` involves `q_{k+1}`).
pub fn arity_range(variant: Variant, n: usize) -> (usize, usize) {
    match variant {
        Variant::Reduced => (1, n),
        Variant::Nonreduced => (0, n.saturating_sub(1)),
    }
}

/// Builds the CE differential on the quotient of coderivations with
/// coefficients in `lo..=hi`, using the Taylor coefficients of `q` directly
/// (no products of coderivations are formed).
pub(crate) fn build(q: &Coderivation, variant: Variant, lo: usize, hi: usize) -> Result<CeComplex> {
    let space = q.space().clone();
    let basis = coder_basis(&space, lo, hi);
    let mut index = HashMap::new();
    for (k, v) in &basis {
        for (i, b) in v.iter().enumerate() {
            index.insert(b.clone(), (*k, i));
        }
    }
    let dim = |k: i64| basis.get(&k).map_or(0, Vec::len);
    let mut mats: BTreeMap<i64, SparseMatrix> =
        basis.keys().map(|&k| (k, SparseMatrix::zeros(dim(k + 1), dim(k)))).collect();
    let qn = |k: usize| (k >= 1 && k <= q.max_arity()).then(|| q.coefficient(k));
    let qdeg = q.degree();
    let mut buf = Vec::new();
    for len in lo..=hi {
        for m in space.sym_monomials(len) {
            let degrees: Vec<i64> = m.iter().map(|&g| space.degree(g)).collect();
            let dm = space.monomial_degree(&m);
            for i in lo..=len {
                for sp in splits(&degrees, i) {
                    let eps = sign((sp.sign < 0) as i64);
                    let front: Vec<usize> = sp.front.iter().map(|&k| m[k]).collect();
                    let back: Vec<usize> = sp.back.iter().map(|&k| m[k]).collect();
                    // Q•E: q_{len-i+1}(e(m_front) ⊙ m_back)
                    if let (Some(qq), Some((s, c))) = (qn(len - i + 1), canonical_sym(&space, &front)) {
                        if !qq.is_zero() {
                            let dc = space.monomial_degree(&c);
                            for g in 0..space.dim() {
                                buf.clear();
                                buf.push(g);
                                buf.extend_from_slice(&back);
                                let w = qq.eval_gens(&buf);
                                let (k, col) = index[&(c.clone(), g)];
                                debug_assert_eq!(k, space.degree(g) - dc);
                                let coef = &eps * sign((s < 0) as i64);
                                for (h, x) in w.iter() {
                                    let (_, row) = index[&(m.clone(), h)];
                                    mats.get_mut(&k).unwrap().add_entry(row, col, &(x * &coef));
                                }
                            }
                        }
                    }
                    // -(-1)^{|E|} E•Q: e(q_i(m_front) ⊙ m_back)
                    if i == 0 {
                        continue;
                    }
                    let Some(qq) = qn(i) else { continue };
                    let w = qq.eval_gens(&front);
                    for (h, x) in w.iter() {
                        buf.clear();
                        buf.push(h);
                        buf.extend_from_slice(&back);
                        let Some((s, c)) = canonical_sym(&space, &buf) else { continue };
                        for g in 0..space.dim() {
                            let Some(&(k, col)) = index.get(&(c.clone(), g)) else { continue };
                            let e_deg = k;
                            let coef = -sign(qdeg * e_deg) * &eps * sign((s < 0) as i64) * x;
                            let (_, row) = index[&(m.clone(), g)];
                            debug_assert_eq!(k + qdeg, space.degree(g) - dm);
                            mats.get_mut(&k).unwrap().add_entry(row, col, &coef);
                        }
                    }
                }
            }
        }
    }
    let dims = basis.iter().map(|(k, v)| (*k, v.len())).collect();
    let complex = ChainComplexFD::new(dims, mats)?;
    Ok(CeComplex { variant, arities: (lo, hi), complex, basis, index })
}

/// The truncated Chevalley–Eilenberg complex of an L∞[1] structure with
/// coefficients in itself. `Q` must satisfy `Q•Q = 0` up to arity `n`.
pub fn ce_complex(q: &Coderivation, variant: Variant, n: usize) -> Result<CeComplex> {
    if q.variant() != Variant::Reduced {
        bail!(Structural, "expected the reduced coderivation of an L∞[1] structure");
    }
    let rep = check_linfty(q, n)?;
    if let Some(k) = rep.lowest_failing_arity() {
        bail!(Precondition, "Q•Q is nonzero at arity {k}");
    }
    let q = q.with_max_arity(n);
    let (lo, hi) = arity_range(variant, n);
    let ce = build(&q, variant, lo, hi)?;
    if let Some(k) = ce.complex.square_defects().first() {
        bail!(InternalConsistency, "CE differential squares to a nonzero map in degree {k}");
    }
    Ok(ce)
}

/// Dimensions of the two truncated CE cohomologies and of the kernel of the
/// map induced by the inclusion of reduced coderivations.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityReport {
    pub max_arity: usize,
    pub reduced: BTreeMap<i64, usize>,
    pub nonreduced: BTreeMap<i64, usize>,
    pub kernel: BTreeMap<i64, usize>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.kernel.values().all(|&k| k == 0)
    }
}

/// Injectivity of `H(i): H_{CE̅}(V,V) → H_{CE}(V,V)` at truncation `n`:
/// reduced coefficients in arities `1..=n-1` against non-reduced ones in
/// `0..=n-1`, both only involving `q_1, …, q_n`.
pub fn h_injectivity(q: &Coderivation, n: usize) -> Result<InjectivityReport> {
    let full = ce_complex(q, Variant::Nonreduced, n)?;
    let q_n = q.with_max_arity(n);
    let red = build(&q_n, Variant::Reduced, 1, n.saturating_sub(1))?;
    if let Some(k) = red.complex.square_defects().first() {
        bail!(InternalConsistency, "reduced CE differential squares to a nonzero map in degree {k}");
    }
    let mut incl: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for (k, v) in &red.basis {
        let mut m = SparseMatrix::zeros(full.complex.dim(*k), v.len());
        for (j, b) in v.iter().enumerate() {
            let (k2, row) = full.locate(b).expect("reduced basis is part of the full basis");
            debug_assert_eq!(k2, *k);
            m.add_entry(row, j, &Scalar::from_integer(1.into()));
        }
        incl.insert(*k, m);
    }
    let kernel = induced_kernel_dims(&red.complex, &full.complex, &incl).into_iter().filter(|(_, d)| *d > 0).collect();
    Ok(InjectivityReport {
        max_arity: n,
        reduced: red.complex.cohomology_dims(),
        nonreduced: full.complex.cohomology_dims(),
        kernel,
    })
}
