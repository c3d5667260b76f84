//! Homogeneous multilinear maps stored on canonical monomials.
//!
//! A map is kept as a sparse table from canonical input monomials to output
//! vectors. Symmetric maps (on `V^{⊙n}`) and antisymmetric maps (on
//! `V^{∧n}`) are determined by their values on sorted tuples; tensor maps
//! store every tuple.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{bail, Result};
use crate::perm::{canonical_alt, canonical_sym};
use crate::scalar::Scalar;
use crate::space::GradedSpace;
use crate::vector::Vector;

pub trait Symmetry: Clone + fmt::Debug + Default + PartialEq + Send + Sync + 'static {
    const NAME: &'static str;
    /// Canonical representative of a tuple and the sign relating them, or
    /// `None` if the tuple is zero in the corresponding power.
    fn canonical(space: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)>;
    fn monomials(space: &GradedSpace, len: usize) -> Vec<Vec<usize>>;
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sym;
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tensor;
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Alt;

impl Symmetry for Sym {
    const NAME: &'static str = "symmetric";
    fn canonical(space: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)> {
        canonical_sym(space, gens)
    }
    fn monomials(space: &GradedSpace, len: usize) -> Vec<Vec<usize>> {
        space.sym_monomials(len)
    }
}

impl Symmetry for Tensor {
    const NAME: &'static str = "tensor";
    fn canonical(_: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)> {
        Some((1, gens.to_vec()))
    }
    fn monomials(space: &GradedSpace, len: usize) -> Vec<Vec<usize>> {
        space.tensor_monomials(len)
    }
}

impl Symmetry for Alt {
    const NAME: &'static str = "antisymmetric";
    fn canonical(space: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)> {
        canonical_alt(space, gens)
    }
    fn monomials(space: &GradedSpace, len: usize) -> Vec<Vec<usize>> {
        // exterior monomials of V are symmetric monomials of V[1]
        space.shifted(1).sym_monomials(len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multilinear<S: Symmetry> {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    arity: usize,
    degree: i64,
    entries: BTreeMap<Vec<usize>, Vector>,
    _sym: PhantomData<S>,
}

/// Graded-symmetric map `V^{⊙n} → W`.
pub type SymMap = Multilinear<Sym>;
/// Plain multilinear map `V^{⊗n} → W`.
pub type TensorMap = Multilinear<Tensor>;
/// Graded-antisymmetric map `V^{∧n} → W`.
pub type AltMap = Multilinear<Alt>;

impl<S: Symmetry> Multilinear<S> {
    pub fn new(source: Arc<GradedSpace>, target: Arc<GradedSpace>, arity: usize, degree: i64) -> Self {
        Self { source, target, arity, degree, entries: BTreeMap::new(), _sym: PhantomData }
    }

    /// Endomorphism-type map `V^{n} → V`.
    pub fn on(space: &Arc<GradedSpace>, arity: usize, degree: i64) -> Self {
        Self::new(space.clone(), space.clone(), arity, degree)
    }

    /// Builds a map by evaluating `f` on every canonical monomial.
    pub fn from_fn(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        arity: usize,
        degree: i64,
        mut f: impl FnMut(&[usize]) -> Vector,
    ) -> Result<Self> {
        let mut out = Self::new(source, target, arity, degree);
        for m in S::monomials(&out.source, arity) {
            let v = f(&m);
            out.set_canonical(m, v)?;
        }
        Ok(out)
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.values().map(Vector::len).sum()
    }

    /// Stored values on canonical monomials.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    fn check_homogeneous(&self, m: &[usize], v: &Vector) -> Result<()> {
        let want = self.source.monomial_degree(m) + self.degree;
        for (g, _) in v.iter() {
            if g >= self.target.dim() {
                bail!(Argument, "output generator index {g} out of range");
            }
            if self.target.degree(g) != want {
                bail!(
                    Argument,
                    "non-homogeneous value on {:?}: {} has degree {}, expected {}",
                    self.names(m),
                    self.target.name(g),
                    self.target.degree(g),
                    want
                );
            }
        }
        Ok(())
    }

    fn names(&self, m: &[usize]) -> Vec<String> {
        m.iter().map(|&g| self.source.name(g).to_string()).collect()
    }

    fn set_canonical(&mut self, m: Vec<usize>, v: Vector) -> Result<()> {
        self.check_homogeneous(&m, &v)?;
        if v.is_zero() {
            self.entries.remove(&m);
        } else {
            self.entries.insert(m, v);
        }
        Ok(())
    }

    fn check_tuple(&self, gens: &[usize]) -> Result<()> {
        if gens.len() != self.arity {
            bail!(Argument, "map of arity {} applied to {} inputs", self.arity, gens.len());
        }
        if let Some(&g) = gens.iter().find(|&&g| g >= self.source.dim()) {
            bail!(Argument, "input generator index {g} out of range");
        }
        Ok(())
    }

    /// Sets the value on a tuple given in any order.
    pub fn set(&mut self, gens: &[usize], value: Vector) -> Result<()> {
        self.check_tuple(gens)?;
        match S::canonical(&self.source, gens) {
            Some((s, m)) => self.set_canonical(m, value.scaled(&crate::scalar::int(s as i64))),
            None if value.is_zero() => Ok(()),
            None => bail!(Argument, "{} map cannot be nonzero on {:?}", S::NAME, self.names(gens)),
        }
    }

    /// Adds to the value on a tuple given in any order.
    pub fn add(&mut self, gens: &[usize], value: &Vector) -> Result<()> {
        self.check_tuple(gens)?;
        match S::canonical(&self.source, gens) {
            Some((s, m)) => {
                let mut cur = self.entries.get(&m).cloned().unwrap_or_default();
                cur.add_scaled(value, &crate::scalar::int(s as i64));
                self.set_canonical(m, cur)
            }
            None if value.is_zero() => Ok(()),
            None => bail!(Argument, "{} map cannot be nonzero on {:?}", S::NAME, self.names(gens)),
        }
    }

    /// Evaluates on generators in any order.
    pub fn eval(&self, gens: &[usize]) -> Result<Vector> {
        self.check_tuple(gens)?;
        Ok(self.eval_gens(gens))
    }

    pub(crate) fn eval_gens(&self, gens: &[usize]) -> Vector {
        if self.entries.is_empty() {
            return Vector::zero();
        }
        match S::canonical(&self.source, gens) {
            Some((s, m)) => match self.entries.get(&m) {
                Some(v) if s > 0 => v.clone(),
                Some(v) => v.scaled(&crate::scalar::int(-1)),
                None => Vector::zero(),
            },
            None => Vector::zero(),
        }
    }

    /// Multilinear extension to vector inputs.
    pub fn eval_vectors(&self, inputs: &[&Vector]) -> Vector {
        let mut out = Vector::zero();
        if self.entries.is_empty() || inputs.iter().any(|v| v.is_zero()) {
            return out;
        }
        let mut gens = vec![0usize; inputs.len()];
        self.expand_rec(inputs, 0, &mut gens, &crate::scalar::int(1), &mut out);
        out
    }

    fn expand_rec(&self, inputs: &[&Vector], k: usize, gens: &mut Vec<usize>, c: &Scalar, out: &mut Vector) {
        if k == inputs.len() {
            out.add_scaled(&self.eval_gens(gens), c);
            return;
        }
        for (g, x) in inputs[k].iter() {
            gens[k] = g;
            self.expand_rec(inputs, k + 1, gens, &(c * x), out);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) -> Result<()> {
        if other.arity != self.arity || other.degree != self.degree {
            bail!(
                Structural,
                "cannot add arity {} degree {} map to arity {} degree {} map",
                other.arity,
                other.degree,
                self.arity,
                self.degree
            );
        }
        for (m, v) in &other.entries {
            let mut cur = self.entries.get(m).cloned().unwrap_or_default();
            cur.add_scaled(v, c);
            if cur.is_zero() {
                self.entries.remove(m);
            } else {
                self.entries.insert(m.clone(), cur);
            }
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::new(self.source.clone(), self.target.clone(), self.arity, self.degree);
        out.add_scaled(self, c).expect("same shape");
        out
    }

    pub(crate) fn insert_raw(&mut self, m: Vec<usize>, v: Vector) {
        if !v.is_zero() {
            self.entries.insert(m, v);
        }
    }

    /// Value as a tensor map on every tuple.
    pub fn to_tensor(&self) -> TensorMap {
        let mut out = TensorMap::new(self.source.clone(), self.target.clone(), self.arity, self.degree);
        for t in self.source.tensor_monomials(self.arity) {
            let v = self.eval_gens(&t);
            out.insert_raw(t, v);
        }
        out
    }
}

impl TensorMap {
    /// Checks graded symmetry on every tuple and converts. Returns the first
    /// offending tuple on failure.
    pub fn to_sym(&self) -> std::result::Result<SymMap, Vec<usize>> {
        let mut out = SymMap::new(self.source.clone(), self.target.clone(), self.arity, self.degree);
        for t in self.source.tensor_monomials(self.arity) {
            let v = self.eval_gens(&t);
            match canonical_sym(&self.source, &t) {
                None => {
                    if !v.is_zero() {
                        return Err(t);
                    }
                }
                Some((s, m)) => {
                    let want = self.eval_gens(&m).scaled(&crate::scalar::int(s as i64));
                    if want != v {
                        return Err(t);
                    }
                    if m == t {
                        out.insert_raw(m, v);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl SymMap {
    /// Linear map applied to a vector (arity one only).
    pub fn apply(&self, v: &Vector) -> Vector {
        debug_assert_eq!(self.arity, 1);
        self.eval_vectors(&[v])
    }

    /// The identity map of a space.
    pub fn identity(space: &Arc<GradedSpace>) -> Self {
        let mut m = SymMap::on(space, 1, 0);
        for g in 0..space.dim() {
            m.insert_raw(vec![g], Vector::basis(g));
        }
        m
    }

    /// Composition `self ∘ other` of linear maps.
    pub fn compose_linear(&self, other: &SymMap) -> SymMap {
        let mut out = SymMap::new(other.source.clone(), self.target.clone(), 1, self.degree + other.degree);
        for g in 0..other.source.dim() {
            let v = self.apply(&other.eval_gens(&[g]));
            out.insert_raw(vec![g], v);
        }
        out
    }
}

impl<S: Symmetry> fmt::Display for Multilinear<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} map arity {} degree {}", S::NAME, self.arity, self.degree)?;
        for (m, v) in &self.entries {
            writeln!(f, "  {:?} -> {}", self.names(m), v.display(&self.target))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::koszul_sign;
    use crate::scalar::int;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new([("a", 0), ("x", 1), ("y", 1), ("b", 2)]).unwrap().arc()
    }

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// A degree -1 symmetric map with a value on every canonical monomial
    /// that admits one.
    fn dense(arity: usize) -> SymMap {
        let v = space();
        let mut k = 0i64;
        SymMap::from_fn(v.clone(), v.clone(), arity, -1, |m| {
            let d = v.monomial_degree(m) - 1;
            k += 1;
            (0..v.dim()).filter(|&g| v.degree(g) == d).map(|g| (g, int(k + g as i64))).collect()
        })
        .unwrap()
    }

    #[test]
    fn repeated_odd_is_zero() {
        let m = dense(2);
        assert!(m.eval(&[1, 1]).unwrap().is_zero());
        assert!(m.clone().set(&[2, 2], Vector::basis(3)).is_err());
    }

    #[test]
    fn canonical_tuple_returns_stored_entry() {
        let m = dense(2);
        for (k, v) in m.entries() {
            assert_eq!(&m.eval(k).unwrap(), v);
        }
    }

    #[test]
    fn odd_swap_negates() {
        let m = dense(2);
        let xy = m.eval(&[1, 2]).unwrap();
        assert!(!xy.is_zero());
        assert_eq!(m.eval(&[2, 1]).unwrap(), xy.scaled(&int(-1)));
    }

    #[test]
    fn graded_symmetry_exhaustive() {
        let v = space();
        for arity in 1..=4 {
            let m = dense(arity);
            for t in v.tensor_monomials(arity) {
                let base = m.eval(&t).unwrap();
                let degs: Vec<i64> = t.iter().map(|&g| v.degree(g)).collect();
                for p in perms(arity) {
                    let permuted: Vec<usize> = p.iter().map(|&i| t[i]).collect();
                    let s = koszul_sign(&p, &degs).unwrap();
                    // t = s · permuted, so m(permuted) = s · m(t)
                    assert_eq!(m.eval(&permuted).unwrap(), base.scaled(&int(s as i64)));
                }
            }
        }
    }

    #[test]
    fn arity_mismatch_is_an_argument_error() {
        let m = dense(2);
        assert!(matches!(m.eval(&[0]), Err(crate::Error::Argument(_))));
    }

    #[test]
    fn inhomogeneous_values_rejected() {
        let v = space();
        let mut m = SymMap::on(&v, 1, 1);
        assert!(m.set(&[0], Vector::basis(3)).is_err());
        assert!(m.set(&[0], Vector::basis(1)).is_ok());
    }

    #[test]
    fn alt_maps_vanish_on_even_squares() {
        let v = space();
        let mut m = AltMap::on(&v, 2, 0);
        m.set(&[0, 0], Vector::basis(0)).unwrap_err();
        m.set(&[1, 2], Vector::basis(3)).unwrap();
        assert_eq!(m.eval(&[2, 1]).unwrap(), Vector::basis(3));
        m.set(&[1, 1], Vector::basis(3)).unwrap();
        assert!(m.eval(&[0, 0]).unwrap().is_zero());
    }

    #[test]
    fn tensor_to_sym_detects_asymmetry() {
        let m = dense(3);
        let t = m.to_tensor();
        assert_eq!(t.to_sym().unwrap(), m);
        let mut bad = t.clone();
        bad.set(&[1, 0, 0], Vector::basis(0)).unwrap();
        assert!(bad.to_sym().is_err());
    }
}
