use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{bail, Result};
use crate::maps::SymMap;
use crate::perm::splits;
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::{add_vector_times_tuple, SymElem, Vector};

/// Coderivations of the reduced coalgebra `S̄V` (arities `1..=N`) or of the
/// non-reduced coalgebra `SV` (arities `0..=N`, where the arity-zero
/// coefficient is the vector `Q(1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Reduced,
    Nonreduced,
}

impl Variant {
    pub fn min_arity(self) -> usize {
        match self {
            Variant::Reduced => 1,
            Variant::Nonreduced => 0,
        }
    }
}

/// A coderivation given by its Taylor coefficients, truncated at
/// `max_arity`. Coefficients above the truncation are treated as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Coderivation {
    space: Arc<GradedSpace>,
    variant: Variant,
    degree: i64,
    q0: Vector,
    taylor: Vec<SymMap>,
}

/// `q(w ⊙ g_1 ⊙ … ⊙ g_k)` for a vector `w` and generators `g_i`.
pub(crate) fn eval_with_front(q: &SymMap, w: &Vector, back: &[usize]) -> Vector {
    let mut out = Vector::zero();
    if q.is_zero() {
        return out;
    }
    let mut buf = Vec::with_capacity(back.len() + 1);
    for (g, x) in w.iter() {
        buf.clear();
        buf.push(g);
        buf.extend_from_slice(back);
        out.add_scaled(&q.eval_gens(&buf), x);
    }
    out
}

impl Coderivation {
    pub fn zero(space: &Arc<GradedSpace>, variant: Variant, degree: i64, max_arity: usize) -> Self {
        Self {
            space: space.clone(),
            variant,
            degree,
            q0: Vector::zero(),
            taylor: (1..=max_arity).map(|n| SymMap::on(space, n, degree)).collect(),
        }
    }

    /// Builds a coderivation from coefficients `q_1, …, q_N`; the
    /// truncation arity is the length of the list.
    pub fn from_taylor(
        space: &Arc<GradedSpace>,
        variant: Variant,
        degree: i64,
        taylor: Vec<SymMap>,
    ) -> Result<Self> {
        let mut out = Self::zero(space, variant, degree, taylor.len());
        for q in taylor {
            out.set_coefficient(q)?;
        }
        Ok(out)
    }

    /// Replaces the coefficient of the map's arity.
    pub fn set_coefficient(&mut self, q: SymMap) -> Result<()> {
        let n = q.arity();
        if n == 0 || n > self.max_arity() {
            bail!(Structural, "arity {n} outside 1..={}", self.max_arity());
        }
        if q.degree() != self.degree {
            bail!(Structural, "coefficient of degree {} in a coderivation of degree {}", q.degree(), self.degree);
        }
        if **q.source() != *self.space || **q.target() != *self.space {
            bail!(Structural, "coefficient defined on a different carrier");
        }
        self.taylor[n - 1] = q;
        Ok(())
    }

    /// Sets `Q(1)`. Only meaningful for the non-reduced variant.
    pub fn set_q0(&mut self, v: Vector) -> Result<()> {
        if self.variant == Variant::Reduced && !v.is_zero() {
            bail!(Structural, "reduced coderivations have no arity-0 coefficient");
        }
        for (g, _) in v.iter() {
            if g >= self.space.dim() || self.space.degree(g) != self.degree {
                bail!(Argument, "Q(1) must be a vector of degree {}", self.degree);
            }
        }
        self.q0 = v;
        Ok(())
    }

    /// `σ_v`: the non-reduced coderivation `x ↦ v ⊙ x`.
    pub fn sigma(space: &Arc<GradedSpace>, v: &Vector, degree: i64, max_arity: usize) -> Result<Self> {
        let mut out = Self::zero(space, Variant::Nonreduced, degree, max_arity);
        out.set_q0(v.clone())?;
        Ok(out)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn max_arity(&self) -> usize {
        self.taylor.len()
    }

    pub fn q0(&self) -> &Vector {
        &self.q0
    }

    /// The coefficient `q_n`, `1 ≤ n ≤ N`.
    pub fn coefficient(&self, n: usize) -> &SymMap {
        &self.taylor[n - 1]
    }

    pub fn taylor(&self) -> &[SymMap] {
        &self.taylor
    }

    /// Evaluation at the identity, `Q ↦ Q(1)`.
    pub fn ev1(&self) -> Result<Vector> {
        match self.variant {
            Variant::Nonreduced => Ok(self.q0.clone()),
            Variant::Reduced => bail!(Structural, "evaluation at 1 needs a non-reduced coderivation"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.taylor.iter().all(SymMap::is_zero)
    }

    /// Smallest arity with a nonzero coefficient.
    pub fn lowest_nonzero_arity(&self) -> Option<usize> {
        if !self.q0.is_zero() {
            return Some(0);
        }
        self.taylor.iter().position(|q| !q.is_zero()).map(|i| i + 1)
    }

    /// Drops coefficients above `n`, or pads with zeros.
    pub fn with_max_arity(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.taylor.truncate(n);
        while out.taylor.len() < n {
            let k = out.taylor.len() + 1;
            out.taylor.push(SymMap::on(&self.space, k, self.degree));
        }
        out
    }

    /// Image under the inclusion `Coder(S̄V) → Coder(SV)`.
    pub fn to_nonreduced(&self) -> Self {
        Self { variant: Variant::Nonreduced, ..self.clone() }
    }

    /// Restriction to `S̄V`, forgetting `Q(1)`.
    pub fn to_reduced(&self) -> Self {
        Self { variant: Variant::Reduced, q0: Vector::zero(), ..self.clone() }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if *self.space != *other.space {
            bail!(Structural, "coderivations on different carriers");
        }
        if self.variant != other.variant {
            bail!(Structural, "cannot combine {:?} and {:?} coderivations", self.variant, other.variant);
        }
        Ok(())
    }

    /// `self + c·other`, truncated at the smaller arity.
    pub fn add_scaled(&self, other: &Self, c: &Scalar) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !other.is_zero() && !c.is_zero() {
            bail!(Structural, "cannot add coderivations of degrees {} and {}", self.degree, other.degree);
        }
        let n = self.max_arity().min(other.max_arity());
        let mut out = self.with_max_arity(n);
        out.q0.add_scaled(&other.q0, c);
        for (a, b) in out.taylor.iter_mut().zip(&other.taylor) {
            if !b.is_zero() {
                a.add_scaled(b, c)?;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &-Scalar::one())
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        Self {
            q0: self.q0.scaled(c),
            taylor: self.taylor.iter().map(|q| q.scaled(c)).collect(),
            ..self.clone()
        }
    }

    /// `q_n ↦ (-1)^{n+1} q_n`.
    pub fn alternate_signs(&self) -> Self {
        Self {
            q0: self.q0.scaled(&sign(1)),
            taylor: self.taylor.iter().enumerate().map(|(i, q)| q.scaled(&sign(i as i64))).collect(),
            ..self.clone()
        }
    }

    /// The action on a monomial `v_1 ⊙ … ⊙ v_n`, given by its generators in
    /// any order:
    /// `Σ_i Σ_{σ ∈ S(i,n-i)} ε(σ) q_i(v_σ(1) ⊙ … ⊙ v_σ(i)) ⊙ v_σ(i+1) ⊙ … ⊙ v_σ(n)`.
    /// Exact for monomials of length at most `N`.
    pub fn expand_tuple(&self, gens: &[usize]) -> Result<SymElem> {
        if gens.is_empty() && self.variant == Variant::Reduced {
            bail!(Structural, "the reduced coalgebra has no unit");
        }
        let mut out = SymElem::zero();
        if self.variant == Variant::Nonreduced {
            add_vector_times_tuple(&mut out, &self.space, &self.q0, gens, &Scalar::one());
        }
        let degrees: Vec<i64> = gens.iter().map(|&g| self.space.degree(g)).collect();
        let mut front = Vec::new();
        let mut back = Vec::new();
        for i in 1..=gens.len().min(self.max_arity()) {
            let q = &self.taylor[i - 1];
            if q.is_zero() {
                continue;
            }
            for sp in splits(&degrees, i) {
                front.clear();
                front.extend(sp.front.iter().map(|&k| gens[k]));
                back.clear();
                back.extend(sp.back.iter().map(|&k| gens[k]));
                let w = q.eval_gens(&front);
                add_vector_times_tuple(&mut out, &self.space, &w, &back, &sign((sp.sign < 0) as i64));
            }
        }
        Ok(out)
    }

    /// Linear extension of [`Self::expand_tuple`].
    pub fn expand(&self, x: &SymElem) -> Result<SymElem> {
        let mut out = SymElem::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.expand_tuple(m)?, c);
        }
        Ok(out)
    }

    /// Recovers Taylor coefficients from an action on monomials by
    /// projecting onto the length-one component.
    pub fn corestrict(
        space: &Arc<GradedSpace>,
        variant: Variant,
        degree: i64,
        max_arity: usize,
        mut action: impl FnMut(&[usize]) -> Result<SymElem>,
    ) -> Result<Self> {
        let mut out = Self::zero(space, variant, degree, max_arity);
        if variant == Variant::Nonreduced {
            out.set_q0(action(&[])?.linear_part())?;
        }
        for n in 1..=max_arity {
            let mut q = SymMap::on(space, n, degree);
            for m in space.sym_monomials(n) {
                let v = action(&m)?.linear_part();
                if !v.is_zero() {
                    q.set(&m, v)?;
                }
            }
            out.taylor[n - 1] = q;
        }
        Ok(out)
    }

    /// Nijenhuis–Richardson product
    /// `(q•r)_n = Σ_i Σ_{σ ∈ S(i,n-i)} ε(σ) q_{n-i+1}(r_i(v_σ(1..i)) ⊙ v_σ(i+1..n))`,
    /// truncated at the smaller of the two truncation arities. When
    /// `r_0 ≠ 0` the arity-`n` coefficient involves `q_{n+1}`, so the result
    /// stops one arity below the truncation of `Q`.
    pub fn nr_product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q_top = if other.q0.is_zero() { self.max_arity() } else { self.max_arity().saturating_sub(1) };
        let n_max = q_top.min(other.max_arity());
        let degree = self.degree + other.degree;
        let mut out = Self::zero(&self.space, self.variant, degree, n_max);
        if self.variant == Variant::Nonreduced && self.max_arity() >= 1 {
            out.set_q0(self.taylor[0].apply(&other.q0))?;
        }
        let mut front = Vec::new();
        let mut back = Vec::new();
        for n in 1..=n_max {
            let mut coeff = SymMap::on(&self.space, n, degree);
            for m in self.space.sym_monomials(n) {
                let degrees: Vec<i64> = m.iter().map(|&g| self.space.degree(g)).collect();
                let mut val = Vector::zero();
                if !other.q0.is_zero() {
                    val.add_scaled(&eval_with_front(&self.taylor[n], &other.q0, &m), &Scalar::one());
                }
                for i in 1..=n {
                    let r = &other.taylor[i - 1];
                    let q = &self.taylor[n - i];
                    if r.is_zero() || q.is_zero() {
                        continue;
                    }
                    for sp in splits(&degrees, i) {
                        front.clear();
                        front.extend(sp.front.iter().map(|&k| m[k]));
                        back.clear();
                        back.extend(sp.back.iter().map(|&k| m[k]));
                        let w = r.eval_gens(&front);
                        if w.is_zero() {
                            continue;
                        }
                        val.add_scaled(&eval_with_front(q, &w, &back), &sign((sp.sign < 0) as i64));
                    }
                }
                if !val.is_zero() {
                    coeff.set(&m, val)?;
                }
            }
            out.taylor[n - 1] = coeff;
        }
        Ok(out)
    }

    /// Graded commutator `Q•R - (-1)^{|Q||R|} R•Q`.
    pub fn nr_bracket(&self, other: &Self) -> Result<Self> {
        let a = self.nr_product(other)?;
        let b = other.nr_product(self)?;
        a.add_scaled(&b, &-sign(self.degree * other.degree))
    }

    /// `[Q, σ_v]` for a non-reduced `Q`. Also confirms `σ_v • Q = 0`.
    pub fn bracket_with_sigma(&self, v: &Vector, degree: i64) -> Result<Self> {
        if self.variant != Variant::Nonreduced {
            bail!(Structural, "bracket with σ_v needs a non-reduced coderivation");
        }
        let s = Self::sigma(&self.space, v, degree, self.max_arity())?;
        if !s.nr_product(self)?.is_zero() {
            bail!(InternalConsistency, "σ_v • Q is nonzero");
        }
        self.nr_bracket(&s)
    }
}

impl std::fmt::Display for Coderivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:?} coderivation of degree {} up to arity {}", self.variant, self.degree, self.max_arity())?;
        if !self.q0.is_zero() {
            writeln!(f, "  Q(1) = {}", self.q0.display(&self.space))?;
        }
        for q in &self.taylor {
            if !q.is_zero() {
                write!(f, "{q}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new([("x", 0), ("y", 1), ("z", 1)]).unwrap().arc()
    }

    fn linear(sp: &Arc<GradedSpace>) -> Coderivation {
        let mut q1 = SymMap::on(sp, 1, 1);
        q1.set(&[0], Vector::basis(1)).unwrap();
        Coderivation::from_taylor(sp, Variant::Reduced, 1, vec![q1]).unwrap()
    }

    #[test]
    fn linear_coderivation_on_pair() {
        let sp = space();
        let q = linear(&sp);
        // q(x ⊙ y) = q1(x) ⊙ y + x ⊙ q1(y) = y ⊙ y = 0 (odd square)
        assert!(q.expand_tuple(&[0, 1]).unwrap().is_zero());
        // q(x ⊙ x) = 2 x ⊙ y
        let e = q.expand_tuple(&[0, 0]).unwrap();
        let mut want = SymElem::zero();
        want.add_canonical(vec![0, 1], int(2));
        assert_eq!(e, want);
    }

    #[test]
    fn expand_then_corestrict() {
        let sp = space();
        let mut q2 = SymMap::on(&sp, 2, 1);
        q2.set(&[0, 0], Vector::basis(1)).unwrap();
        let q = Coderivation::from_taylor(&sp, Variant::Reduced, 1, vec![SymMap::on(&sp, 1, 1), q2]).unwrap();
        let back = Coderivation::corestrict(&sp, Variant::Reduced, 1, 2, |m| q.expand_tuple(m)).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn sigma_and_ev1() {
        let sp = space();
        let s = Coderivation::sigma(&sp, &Vector::basis(1), 1, 3).unwrap();
        assert_eq!(s.ev1().unwrap(), Vector::basis(1));
        let e = s.expand_tuple(&[0, 2]).unwrap();
        let mut want = SymElem::zero();
        want.add_tuple(&sp, &[1, 0, 2], &int(1));
        assert_eq!(e, want);
        assert!(linear(&sp).ev1().is_err());
        assert!(linear(&sp).to_nonreduced().ev1().unwrap().is_zero());
    }

    #[test]
    fn linear_product_is_composition() {
        let sp = space();
        let mut a = SymMap::on(&sp, 1, 0);
        a.set(&[1], Vector::basis(2)).unwrap();
        let mut b = SymMap::on(&sp, 1, 1);
        b.set(&[0], Vector::basis(1)).unwrap();
        let qa = Coderivation::from_taylor(&sp, Variant::Reduced, 0, vec![a.clone()]).unwrap();
        let qb = Coderivation::from_taylor(&sp, Variant::Reduced, 1, vec![b.clone()]).unwrap();
        let p = qa.nr_product(&qb).unwrap();
        assert_eq!(p.coefficient(1), &a.compose_linear(&b));
    }

    #[test]
    fn reduced_unit_rejected() {
        let sp = space();
        assert!(linear(&sp).expand_tuple(&[]).is_err());
        let mut q = linear(&sp);
        assert!(q.set_q0(Vector::basis(1)).is_err());
    }

    #[test]
    fn mismatched_variants_rejected() {
        let sp = space();
        let q = linear(&sp);
        assert!(q.nr_product(&q.to_nonreduced()).is_err());
    }
}
