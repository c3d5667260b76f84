use std::sync::Arc;

use num_traits::One;

use super::{sym_product, Coderivation};
use crate::error::{bail, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::maps::SymMap;
use crate::perm::{koszul_sign_unchecked, set_partitions};
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::{SymElem, Vector};

/// A degree-zero morphism of symmetric coalgebras `SV → SW` with `F(1) = 1`,
/// given by Taylor coefficients `f_n : V^{⊙n} → W` up to arity `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalgebraMorphism {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    taylor: Vec<SymMap>,
}

impl CoalgebraMorphism {
    pub fn identity(space: &Arc<GradedSpace>, max_arity: usize) -> Self {
        let mut taylor = vec![SymMap::identity(space)];
        taylor.extend((2..=max_arity).map(|n| SymMap::on(space, n, 0)));
        Self { source: space.clone(), target: space.clone(), taylor }
    }

    pub fn from_taylor(source: &Arc<GradedSpace>, target: &Arc<GradedSpace>, taylor: Vec<SymMap>) -> Result<Self> {
        if taylor.is_empty() {
            bail!(Argument, "a morphism needs at least its linear coefficient");
        }
        for (k, f) in taylor.iter().enumerate() {
            if f.arity() != k + 1 {
                bail!(Structural, "coefficient {} has arity {}", k + 1, f.arity());
            }
            if f.degree() != 0 {
                bail!(Structural, "coefficient {} has degree {}, morphisms have degree 0", k + 1, f.degree());
            }
            if **f.source() != **source || **f.target() != **target {
                bail!(Structural, "coefficient {} defined on different spaces", k + 1);
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), taylor })
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn max_arity(&self) -> usize {
        self.taylor.len()
    }

    pub fn coefficient(&self, n: usize) -> &SymMap {
        &self.taylor[n - 1]
    }

    pub fn taylor(&self) -> &[SymMap] {
        &self.taylor
    }

    /// `F(v_1 ⊙ … ⊙ v_n) = Σ_{partitions} ε f_{|B_1|}(v_{B_1}) ⊙ … ⊙ f_{|B_k|}(v_{B_k})`,
    /// summed over unordered set partitions. Exact for `n ≤ N`.
    pub fn apply_tuple(&self, gens: &[usize]) -> SymElem {
        let n = gens.len();
        if n == 0 {
            return SymElem::monomial(vec![]);
        }
        let degrees: Vec<i64> = gens.iter().map(|&g| self.source.degree(g)).collect();
        let mut out = SymElem::zero();
        for k in 1..=n {
            'part: for blocks in set_partitions(n, k) {
                let mut ws = Vec::with_capacity(k);
                for b in &blocks {
                    if b.len() > self.max_arity() {
                        continue 'part;
                    }
                    let sub: Vec<usize> = b.iter().map(|&i| gens[i]).collect();
                    let w = self.taylor[b.len() - 1].eval_gens(&sub);
                    if w.is_zero() {
                        continue 'part;
                    }
                    ws.push(w);
                }
                let perm: Vec<usize> = blocks.concat();
                let s = sign((koszul_sign_unchecked(&perm, &degrees) < 0) as i64);
                out.add_scaled(&sym_product(&self.target, &ws), &s);
            }
        }
        out
    }

    pub fn apply(&self, x: &SymElem) -> SymElem {
        let mut out = SymElem::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.apply_tuple(m), c);
        }
        out
    }

    /// Corestriction `p F(x) = Σ_μ c_μ f_{|μ|}(μ)`, ignoring the unit.
    pub fn project(&self, x: &SymElem) -> Vector {
        let mut out = Vector::zero();
        for (m, c) in x.iter() {
            if !m.is_empty() && m.len() <= self.max_arity() {
                out.add_scaled(&self.taylor[m.len() - 1].eval_gens(m), c);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if *self.source != *other.target {
            bail!(Structural, "cannot compose: source and target spaces differ");
        }
        let n_max = self.max_arity().min(other.max_arity());
        let mut taylor = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let f = SymMap::from_fn(other.source.clone(), self.target.clone(), n, 0, |m| {
                self.project(&other.apply_tuple(m))
            })?;
            taylor.push(f);
        }
        Self::from_taylor(&other.source, &self.target, taylor)
    }

    /// Inverse, determined arity by arity from `f_1^{-1}`.
    pub fn invert(&self) -> Result<Self> {
        let f1 = &self.taylor[0];
        let (ns, nt) = (self.source.dim(), self.target.dim());
        if ns != nt {
            bail!(Inversion, "linear coefficient {nt}x{ns} is not square");
        }
        let cols: Vec<SparseVec> = (0..ns)
            .map(|g| f1.eval_gens(&[g]).iter().map(|(h, x)| (h, x.clone())).collect())
            .collect();
        let a = SparseMatrix::from_columns(nt, &cols);
        if a.rank() != ns {
            bail!(Inversion, "linear coefficient is singular");
        }
        let mut g1 = SymMap::new(self.target.clone(), self.source.clone(), 1, 0);
        for h in 0..nt {
            let e: SparseVec = [(h, Scalar::one())].into_iter().collect();
            let x = a.solve(&e).expect("invertible");
            g1.set(&[h], x.into_iter().collect())?;
        }
        let mut inv = Self {
            source: self.target.clone(),
            target: self.source.clone(),
            taylor: vec![g1.clone()],
        };
        for n in 2..=self.max_arity() {
            inv.taylor.push(SymMap::new(self.target.clone(), self.source.clone(), n, 0));
            let gn = SymMap::from_fn(self.target.clone(), self.source.clone(), n, 0, |m| {
                let v = self.project(&inv.apply_tuple(m));
                g1.apply(&v).scaled(&-Scalar::one())
            })?;
            inv.taylor[n - 1] = gn;
        }
        Ok(inv)
    }

    /// `F^{-1} R F` for an automorphism `F` of `SV` and a coderivation `R`
    /// of `S̄V` or `SV`.
    pub fn conjugate(&self, r: &Coderivation) -> Result<Coderivation> {
        if *self.source != *self.target || *self.source != **r.space() {
            bail!(Structural, "conjugation needs an automorphism of the coderivation's carrier");
        }
        let inv = self.invert()?;
        let n = self.max_arity().min(r.max_arity());
        Coderivation::corestrict(r.space(), r.variant(), r.degree(), n, |m| {
            let x = r.expand(&self.apply_tuple(m))?;
            let v = inv.project(&x);
            let mut out = SymElem::zero();
            for (g, c) in v.iter() {
                out.add_canonical(vec![g], c.clone());
            }
            Ok(out)
        })
    }

    /// First arity `n` at which `p(FQ)` and `p(RF)` differ, where `Q` lives
    /// on the source and `R` on the target.
    pub fn intertwining_failure(&self, q: &Coderivation, r: &Coderivation) -> Result<Option<usize>> {
        if **q.space() != *self.source || **r.space() != *self.target {
            bail!(Structural, "coderivations do not live on the morphism's spaces");
        }
        let n_max = self.max_arity().min(q.max_arity()).min(r.max_arity());
        for n in 1..=n_max {
            for m in self.source.sym_monomials(n) {
                let lhs = self.project(&q.expand_tuple(&m)?);
                let rhs = r.expand(&self.apply_tuple(&m))?.linear_part();
                if lhs != rhs {
                    return Ok(Some(n));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new([("x", 0), ("y", 0), ("z", 1)]).unwrap().arc()
    }

    fn sample(sp: &Arc<GradedSpace>) -> CoalgebraMorphism {
        let mut f2 = SymMap::on(sp, 2, 0);
        f2.set(&[0, 0], Vector::term(1, int(2))).unwrap();
        f2.set(&[0, 2], Vector::basis(2)).unwrap();
        let mut f3 = SymMap::on(sp, 3, 0);
        f3.set(&[0, 1, 1], Vector::basis(0)).unwrap();
        let mut t = CoalgebraMorphism::identity(sp, 3).taylor;
        t[1] = f2;
        t[2] = f3;
        CoalgebraMorphism::from_taylor(sp, sp, t).unwrap()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let sp = space();
        let id = CoalgebraMorphism::identity(&sp, 4);
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let sp = space();
        let f = sample(&sp);
        let g = f.invert().unwrap();
        assert_eq!(g.compose(&f).unwrap(), CoalgebraMorphism::identity(&sp, 3));
        assert_eq!(f.compose(&g).unwrap(), CoalgebraMorphism::identity(&sp, 3));
    }

    #[test]
    fn unit_is_preserved() {
        let sp = space();
        assert_eq!(sample(&sp).apply_tuple(&[]), SymElem::monomial(vec![]));
    }

    #[test]
    fn singular_linear_part_rejected() {
        let sp = space();
        let mut t = CoalgebraMorphism::identity(&sp, 2).taylor;
        t[0] = SymMap::on(&sp, 1, 0);
        let f = CoalgebraMorphism::from_taylor(&sp, &sp, t).unwrap();
        assert!(matches!(f.invert(), Err(crate::Error::Inversion(_))));
    }

    #[test]
    fn conjugating_by_identity_is_trivial() {
        let sp = space();
        let mut q1 = SymMap::on(&sp, 1, 1);
        q1.set(&[0], Vector::basis(2)).unwrap();
        let q = Coderivation::from_taylor(&sp, crate::coalgebra::Variant::Reduced, 1, vec![q1, SymMap::on(&sp, 2, 1)])
            .unwrap();
        let id = CoalgebraMorphism::identity(&sp, 2);
        assert_eq!(id.conjugate(&q).unwrap(), q);
    }
}
