use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::structure::{check_linfty, degree_blocks, LInftyStructure};
use crate::coalgebra::{apply_taylor, CoalgebraMorphism, Coderivation, Variant};
use crate::error::{bail, Result};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::maps::SymMap;
use crate::scalar::Scalar;
use crate::space::GradedSpace;
use crate::vector::Vector;

/// Deformation retract of `(V, q_1)` onto a space `H` with zero
/// differential: `p i = id`, `id - i p = q_1 h + h q_1`, `h h = 0`,
/// `h i = 0`, `p h = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    pub differential: SymMap,
    pub cohomology: Arc<GradedSpace>,
    pub i: SymMap,
    pub p: SymMap,
    pub h: SymMap,
}

fn unit(j: usize) -> SparseVec {
    [(j, Scalar::one())].into_iter().collect()
}

fn to_global(local: &SparseVec, gens: &[usize]) -> Vector {
    local.iter().map(|(j, x)| (gens[*j], x.clone())).collect()
}

/// Chooses a contraction by exact elimination in canonical basis order:
/// cycles from the reduced echelon kernel, a complement `U` of the cycles
/// by greedy standard basis vectors, boundaries `B = q_1(U)`, and
/// representatives `H` extending `B` greedily by cycles.
pub fn contraction_from_cohomology(q1: &SymMap) -> Result<Contraction> {
    if q1.arity() != 1 || q1.degree() != 1 || q1.source() != q1.target() {
        bail!(Argument, "expected a degree-1 linear endomorphism");
    }
    if !q1.compose_linear(q1).is_zero() {
        bail!(Precondition, "q_1 does not square to zero");
    }
    let space = q1.source().clone();
    let groups = space.by_degree();
    let blocks = degree_blocks(q1);
    let gens_of = |k: i64| groups.get(&k).cloned().unwrap_or_default();
    let mut z: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    let mut u: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    let mut bnd: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for (&k, gens) in &groups {
        let d = &blocks[&k];
        let zk = d.kernel();
        let mut e = Echelon::new();
        for v in &zk {
            e.insert(v.clone());
        }
        let uk: Vec<SparseVec> = (0..gens.len()).map(unit).filter(|v| e.insert(v.clone())).collect();
        bnd.insert(k + 1, uk.iter().map(|v| d.mul_vec(v)).collect());
        z.insert(k, zk);
        u.insert(k, uk);
    }
    let mut h_names = Vec::new();
    let mut h_vecs: Vec<Vector> = Vec::new();
    let mut hk: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for (&k, gens) in &groups {
        let mut e = Echelon::new();
        for v in bnd.get(&k).into_iter().flatten() {
            e.insert(v.clone());
        }
        let reps: Vec<SparseVec> = z[&k].iter().filter(|v| e.insert((*v).clone())).cloned().collect();
        for r in &reps {
            h_names.push((format!("h{}", h_vecs.len()), k));
            h_vecs.push(to_global(r, gens));
        }
        hk.insert(k, reps);
    }
    let cohomology = GradedSpace::new(h_names)?.arc();
    let mut i = SymMap::new(cohomology.clone(), space.clone(), 1, 0);
    for (j, v) in h_vecs.iter().enumerate() {
        i.set(&[j], v.clone())?;
    }
    let mut p = SymMap::new(space.clone(), cohomology.clone(), 1, 0);
    let mut h = SymMap::on(&space, 1, -1);
    let mut h_offset = 0usize;
    for (&k, gens) in &groups {
        let bk = bnd.get(&k).cloned().unwrap_or_default();
        let hk_k = &hk[&k];
        let cols: Vec<SparseVec> = bk.iter().chain(hk_k).chain(&u[&k]).cloned().collect();
        let basis = SparseMatrix::from_columns(gens.len(), &cols);
        if basis.rank() != gens.len() {
            bail!(InternalConsistency, "B ⊕ H ⊕ U is not a basis in degree {k}");
        }
        let below = gens_of(k - 1);
        let u_below = u.get(&(k - 1)).cloned().unwrap_or_default();
        for (j, &g) in gens.iter().enumerate() {
            let x = basis.solve(&unit(j)).expect("square invertible system");
            let mut pv = Vector::zero();
            let mut hv = SparseVec::new();
            for (c, a) in &x {
                if *c < bk.len() {
                    crate::linalg::axpy(&mut hv, a, &u_below[*c]);
                } else if *c < bk.len() + hk_k.len() {
                    pv.add_term(h_offset + c - bk.len(), a.clone());
                }
            }
            p.set(&[g], pv)?;
            h.set(&[g], to_global(&hv, &below))?;
        }
        h_offset += hk_k.len();
    }
    let c = Contraction { differential: q1.clone(), cohomology, i, p, h };
    if let Some(f) = c.failed_identities().first() {
        bail!(InternalConsistency, "constructed contraction violates {f}");
    }
    Ok(c)
}

impl Contraction {
    /// Names of the contraction identities that fail.
    pub fn failed_identities(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let d = &self.differential;
        let space = d.source();
        if self.p.compose_linear(&self.i) != SymMap::identity(&self.cohomology) {
            out.push("p i = id");
        }
        let mut lhs = SymMap::identity(space);
        lhs.add_scaled(&self.i.compose_linear(&self.p), &-Scalar::one()).expect("same shape");
        let mut rhs = d.compose_linear(&self.h);
        rhs.add_scaled(&self.h.compose_linear(d), &Scalar::one()).expect("same shape");
        if lhs != rhs {
            out.push("id - i p = q_1 h + h q_1");
        }
        if !self.h.compose_linear(&self.h).is_zero() {
            out.push("h h = 0");
        }
        if !self.h.compose_linear(&self.i).is_zero() {
            out.push("h i = 0");
        }
        if !self.p.compose_linear(&self.h).is_zero() {
            out.push("p h = 0");
        }
        out
    }
}

/// Minimal model obtained by homotopy transfer, with the L∞[1] morphism
/// `I : (H, R) → (V, Q)` extending `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer {
    pub minimal: LInftyStructure,
    pub morphism: CoalgebraMorphism,
}

impl Transfer {
    /// Arities `n ≥ 2` with `r_n ≠ 0`.
    pub fn nonvanishing_arities(&self) -> Vec<usize> {
        let r = self.minimal.q();
        (2..=r.max_arity()).filter(|&n| !r.coefficient(n).is_zero()).collect()
    }

    /// Whether every higher bracket of the minimal model vanishes.
    pub fn massey_vanishing(&self) -> bool {
        self.nonvanishing_arities().is_empty()
    }
}

/// Transfers `Q` along a contraction of its tangent complex:
/// `A_n = Σ_{k≥2} q_k ∘ I^{(k)}_n`, `r_n = p A_n`, `i_n = -h A_n`.
pub fn transfer(q: &Coderivation, c: &Contraction, n: usize) -> Result<Transfer> {
    if q.variant() != Variant::Reduced || q.degree() != 1 {
        bail!(Structural, "expected a degree-1 reduced coderivation");
    }
    if *c.differential.source() != *q.space() || c.differential != *q.coefficient(1) {
        bail!(Precondition, "contraction is not for the tangent complex of Q");
    }
    if let Some(f) = c.failed_identities().first() {
        bail!(Precondition, "invalid contraction: {f} fails");
    }
    if let Some(k) = check_linfty(q, n)?.lowest_failing_arity() {
        bail!(Precondition, "Q•Q is nonzero at arity {k}");
    }
    let q = q.with_max_arity(n);
    let hsp = c.cohomology.clone();
    let vsp = q.space().clone();
    let mut r = Coderivation::zero(&hsp, Variant::Reduced, 1, n);
    let mut morph = CoalgebraMorphism::from_taylor(&hsp, &vsp, vec![c.i.clone()])?;
    for k in 2..=n {
        let mut taylor = morph.taylor().to_vec();
        taylor.push(SymMap::new(hsp.clone(), vsp.clone(), k, 0));
        let partial = CoalgebraMorphism::from_taylor(&hsp, &vsp, taylor.clone())?;
        let mut rk = SymMap::on(&hsp, k, 1);
        let mut ik = SymMap::new(hsp.clone(), vsp.clone(), k, 0);
        for m in hsp.sym_monomials(k) {
            let im = partial.apply_tuple(&m);
            let mut a = Vector::zero();
            for j in 2..=k {
                a.add_scaled(&apply_taylor(q.coefficient(j), &im), &Scalar::one());
            }
            rk.set(&m, c.p.apply(&a))?;
            ik.set(&m, c.h.apply(&a).scaled(&-Scalar::one()))?;
        }
        r.set_coefficient(rk)?;
        taylor[k - 1] = ik;
        morph = CoalgebraMorphism::from_taylor(&hsp, &vsp, taylor)?;
    }
    if let Some(k) = morph.intertwining_failure(&r, &q)? {
        bail!(InternalConsistency, "transferred morphism fails Q I = I R at arity {k}");
    }
    if let Some(k) = check_linfty(&r, n)?.lowest_failing_arity() {
        bail!(InternalConsistency, "transferred structure has R•R ≠ 0 at arity {k}");
    }
    Ok(Transfer { minimal: LInftyStructure::new(r)?, morphism: morph })
}
