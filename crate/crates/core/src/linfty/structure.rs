use std::collections::BTreeMap;
use std::sync::Arc;

use super::complex::{chain_map_defects, is_quasi_isomorphism, ChainComplexFD};
use super::dgla::Dgla;
use crate::coalgebra::{CoalgebraMorphism, Coderivation, Variant};
use crate::decalage::shift_down;
use crate::error::{bail, Result};
use crate::linalg::SparseMatrix;
use crate::maps::{AltMap, SymMap};
use crate::space::GradedSpace;

/// An L∞[1] structure: a degree-one coderivation of `S̄V`, truncated at
/// arity `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyStructure {
    q: Coderivation,
}

/// Nonzero coefficients of `Q•Q` up to the truncation arity.
#[derive(Debug, Clone, PartialEq)]
pub struct LinftyReport {
    pub max_arity: usize,
    pub failures: Vec<SymMap>,
}

impl LinftyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn lowest_failing_arity(&self) -> Option<usize> {
        self.failures.first().map(SymMap::arity)
    }
}

/// `Q•Q` up to arity `n`, listing every nonzero coefficient.
pub fn check_linfty(q: &Coderivation, n: usize) -> Result<LinftyReport> {
    let q = q.with_max_arity(n);
    let sq = q.nr_product(&q)?;
    let mut failures: Vec<SymMap> = Vec::new();
    if !sq.q0().is_zero() {
        bail!(Structural, "Q•Q has a nonzero arity-0 part");
    }
    failures.extend(sq.taylor().iter().filter(|c| !c.is_zero()).cloned());
    Ok(LinftyReport { max_arity: n, failures })
}

impl LInftyStructure {
    /// Wraps a degree-one reduced coderivation. `Q•Q = 0` is not enforced
    /// here; see [`Self::check`].
    pub fn new(q: Coderivation) -> Result<Self> {
        if q.variant() != Variant::Reduced {
            bail!(Structural, "an L∞[1] structure is a coderivation of the reduced coalgebra");
        }
        if q.degree() != 1 {
            bail!(Structural, "an L∞[1] structure has degree 1, got {}", q.degree());
        }
        Ok(Self { q })
    }

    /// The image of a dg Lie algebra `L` on `L[1]`: `q_1 = -d`,
    /// `q_2(l_1 ⊙ l_2) = (-1)^{|l_1|}[l_1, l_2]`, higher coefficients zero.
    pub fn from_dgla(l: &Dgla, max_arity: usize) -> Result<Self> {
        let shifted = l.space().shifted(1).arc();
        let mut d = AltMap::on(l.space(), 1, 1);
        for (m, v) in l.differential().entries() {
            d.set(m, v.clone())?;
        }
        let mut q = Coderivation::zero(&shifted, Variant::Reduced, 1, max_arity.max(2));
        q.set_coefficient(shift_down(&d, &shifted, &shifted)?)?;
        q.set_coefficient(shift_down(l.bracket(), &shifted, &shifted)?)?;
        Self::new(q.with_max_arity(max_arity))
    }

    pub fn q(&self) -> &Coderivation {
        &self.q
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.q.space()
    }

    pub fn max_arity(&self) -> usize {
        self.q.max_arity()
    }

    pub fn with_max_arity(&self, n: usize) -> Self {
        Self { q: self.q.with_max_arity(n) }
    }

    pub fn check(&self) -> Result<LinftyReport> {
        check_linfty(&self.q, self.max_arity())
    }

    pub fn tangent(&self) -> TangentComplex {
        TangentComplex::new(self.q.coefficient(1).clone())
    }
}

/// The carrier with differential `q_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentComplex {
    differential: SymMap,
}

impl TangentComplex {
    pub fn new(differential: SymMap) -> Self {
        Self { differential }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.differential.source()
    }

    pub fn differential(&self) -> &SymMap {
        &self.differential
    }

    pub fn squares_to_zero(&self) -> bool {
        self.differential.compose_linear(&self.differential).is_zero()
    }

    pub fn to_chain_complex(&self) -> Result<ChainComplexFD> {
        linear_complex(&self.differential)
    }

    pub fn cohomology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        Ok(self.to_chain_complex()?.cohomology_dims())
    }
}

/// Local index of each generator inside its degree component.
pub(crate) fn local_indices(space: &GradedSpace) -> Vec<usize> {
    let mut out = vec![0; space.dim()];
    for gens in space.by_degree().values() {
        for (i, &g) in gens.iter().enumerate() {
            out[g] = i;
        }
    }
    out
}

/// Degree-wise matrices of a linear map between graded spaces, keyed by
/// source degree.
pub(crate) fn degree_blocks(f: &SymMap) -> BTreeMap<i64, SparseMatrix> {
    let (src, tgt) = (f.source(), f.target());
    let (ls, lt) = (local_indices(src), local_indices(tgt));
    let tdims: BTreeMap<i64, usize> = tgt.by_degree().into_iter().map(|(k, v)| (k, v.len())).collect();
    let mut out = BTreeMap::new();
    for (k, gens) in src.by_degree() {
        let rows = tdims.get(&(k + f.degree())).copied().unwrap_or(0);
        let mut m = SparseMatrix::zeros(rows, gens.len());
        for &g in &gens {
            for (h, x) in f.eval_gens(&[g]).iter() {
                m.add_entry(lt[h], ls[g], x);
            }
        }
        out.insert(k, m);
    }
    out
}

pub(crate) fn linear_complex(d: &SymMap) -> Result<ChainComplexFD> {
    if d.degree() != 1 || d.arity() != 1 {
        bail!(Argument, "a differential is a degree-1 linear map");
    }
    let dims = d.source().by_degree().into_iter().map(|(k, v)| (k, v.len())).collect();
    ChainComplexFD::new(dims, degree_blocks(d))
}

/// Whether `F : (V, Q) → (W, R)` is a weak equivalence, i.e. intertwines
/// the structures and has `f_1` a quasi-isomorphism of tangent complexes.
pub fn is_weak_equivalence(f: &CoalgebraMorphism, q: &LInftyStructure, r: &LInftyStructure) -> Result<bool> {
    if let Some(n) = f.intertwining_failure(q.q(), r.q())? {
        bail!(Structural, "the morphism does not intertwine the structures at arity {n}");
    }
    let a = q.tangent().to_chain_complex()?;
    let b = r.tangent().to_chain_complex()?;
    let f1 = degree_blocks(f.coefficient(1));
    if !chain_map_defects(&a, &b, &f1).is_empty() {
        bail!(InternalConsistency, "intertwining morphism whose linear part is not a chain map");
    }
    Ok(is_quasi_isomorphism(&a, &b, &f1))
}
