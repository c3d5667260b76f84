use std::sync::Arc;

use crate::error::{bail, Result};
use crate::maps::TensorMap;
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::Vector;

/// Gerstenhaber product
/// `f∘g(v_1 ⊗ … ⊗ v_{i+j-1}) = Σ_k (-1)^{|g|(|v_1|+…+|v_k|)} f(v_1 ⊗ … ⊗ v_k ⊗ g(v_{k+1} ⊗ … ⊗ v_{k+j}) ⊗ …)`.
pub fn gerstenhaber_product(f: &TensorMap, g: &TensorMap) -> Result<TensorMap> {
    if f.source() != f.target() || g.source() != g.target() || f.source() != g.source() {
        bail!(Structural, "Gerstenhaber product needs endomorphism-type maps on one space");
    }
    let space = f.source();
    let (i, j) = (f.arity(), g.arity());
    let n = i + j - 1;
    let mut out = TensorMap::on(space, n, f.degree() + g.degree());
    if f.is_zero() || g.is_zero() {
        return Ok(out);
    }
    let mut buf = Vec::with_capacity(i);
    for t in space.tensor_monomials(n) {
        let mut val = Vector::zero();
        let mut prefix_deg = 0i64;
        for k in 0..i {
            let w = g.eval_gens(&t[k..k + j]);
            if !w.is_zero() {
                let s = sign(g.degree() * prefix_deg);
                for (h, x) in w.iter() {
                    buf.clear();
                    buf.extend_from_slice(&t[..k]);
                    buf.push(h);
                    buf.extend_from_slice(&t[k + j..]);
                    val.add_scaled(&f.eval_gens(&buf), &(x * &s));
                }
            }
            prefix_deg += space.degree(t[k]);
        }
        out.insert_raw(t, val);
    }
    Ok(out)
}

/// `f∘g - (-1)^{|f||g|} g∘f`.
pub fn gerstenhaber_bracket(f: &TensorMap, g: &TensorMap) -> Result<TensorMap> {
    let mut a = gerstenhaber_product(f, g)?;
    let b = gerstenhaber_product(g, f)?;
    a.add_scaled(&b, &-sign(f.degree() * g.degree()))?;
    Ok(a)
}

/// Coderivation of the reduced tensor coalgebra, by Taylor coefficients
/// `f_1, …, f_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorCoderivation {
    space: Arc<GradedSpace>,
    degree: i64,
    taylor: Vec<TensorMap>,
}

impl TensorCoderivation {
    pub fn zero(space: &Arc<GradedSpace>, degree: i64, max_arity: usize) -> Self {
        Self { space: space.clone(), degree, taylor: (1..=max_arity).map(|n| TensorMap::on(space, n, degree)).collect() }
    }

    pub fn from_taylor(space: &Arc<GradedSpace>, degree: i64, taylor: Vec<TensorMap>) -> Result<Self> {
        let mut out = Self::zero(space, degree, taylor.len());
        for (k, f) in taylor.into_iter().enumerate() {
            if f.arity() != k + 1 || f.degree() != degree || **f.source() != **space || **f.target() != **space {
                bail!(Structural, "coefficient {} has the wrong arity, degree or carrier", k + 1);
            }
            out.taylor[k] = f;
        }
        Ok(out)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn max_arity(&self) -> usize {
        self.taylor.len()
    }

    pub fn coefficient(&self, n: usize) -> &TensorMap {
        &self.taylor[n - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.taylor.iter().all(TensorMap::is_zero)
    }

    /// Corestriction of the composite: `(F∘G)_n = Σ_{i+j-1=n} f_i ∘ g_j`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if *self.space != *other.space {
            bail!(Structural, "coderivations on different carriers");
        }
        let n_max = self.max_arity().min(other.max_arity());
        let mut out = Self::zero(&self.space, self.degree + other.degree, n_max);
        for n in 1..=n_max {
            for j in 1..=n {
                let i = n + 1 - j;
                let p = gerstenhaber_product(&self.taylor[i - 1], &other.taylor[j - 1])?;
                out.taylor[n - 1].add_scaled(&p, &Scalar::from_integer(1.into()))?;
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let a = self.product(other)?;
        let b = other.product(self)?;
        let c = -sign(self.degree * other.degree);
        let mut out = a;
        for (x, y) in out.taylor.iter_mut().zip(&b.taylor) {
            x.add_scaled(y, &c)?;
        }
        Ok(out)
    }
}
