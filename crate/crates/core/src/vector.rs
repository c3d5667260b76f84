//! Sparse linear combinations of generators and of symmetric monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::perm::canonical_sym;
use crate::scalar::{format_scalar, Scalar};
use crate::space::GradedSpace;

/// A finite linear combination of generators, keyed by generator index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn basis(g: usize) -> Self {
        Self::term(g, Scalar::from_integer(1.into()))
    }

    pub fn term(g: usize, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(g, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, g: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(g).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (g, x) in &other.0 {
            self.add_term(*g, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        let mut out = Vector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, g: usize) -> Scalar {
        self.0.get(&g).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(g, c)| (*g, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The degree shared by all terms, `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self, space: &GradedSpace) -> Option<i64> {
        let mut it = self.0.keys().map(|&g| space.degree(g));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(g, c)| format!("{}*{}", format_scalar(c), space.name(*g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl std::ops::Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_integer(1.into()));
        out
    }
}

impl std::ops::Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_integer((-1).into()));
        out
    }
}

impl FromIterator<(usize, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = Vector::zero();
        for (g, c) in iter {
            v.add_term(g, c);
        }
        v
    }
}

/// An element of the symmetric coalgebra: a linear combination of canonical
/// symmetric monomials (the empty monomial stands for `1`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymElem(BTreeMap<Vec<usize>, Scalar>);

impl SymElem {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn monomial(m: Vec<usize>) -> Self {
        let mut s = Self::zero();
        s.0.insert(m, Scalar::from_integer(1.into()));
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `c` times the monomial with generators `gens` in the given
    /// order, normalizing to canonical order with the Koszul sign.
    pub fn add_tuple(&mut self, space: &GradedSpace, gens: &[usize], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if let Some((s, m)) = canonical_sym(space, gens) {
            let c = if s < 0 { -c.clone() } else { c.clone() };
            self.add_canonical(m, c);
        }
    }

    pub fn add_canonical(&mut self, m: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &SymElem, c: &Scalar) {
        for (m, x) in &other.0 {
            self.add_canonical(m.clone(), x * c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.0.iter()
    }

    /// Projection onto the length-one component.
    pub fn linear_part(&self) -> Vector {
        self.0
            .iter()
            .filter(|(m, _)| m.len() == 1)
            .map(|(m, c)| (m[0], c.clone()))
            .collect()
    }

    /// Component of the given length.
    pub fn component(&self, len: usize) -> SymElem {
        SymElem(self.0.iter().filter(|(m, _)| m.len() == len).map(|(m, c)| (m.clone(), c.clone())).collect())
    }
}

/// Symmetric product `w ⊙ g_1 ⊙ … ⊙ g_k` of a vector with generators,
/// accumulated into `acc` with coefficient `c`.
pub fn add_vector_times_tuple(acc: &mut SymElem, space: &GradedSpace, w: &Vector, rest: &[usize], c: &Scalar) {
    let mut buf = Vec::with_capacity(rest.len() + 1);
    for (g, x) in w.iter() {
        buf.clear();
        buf.push(g);
        buf.extend_from_slice(rest);
        acc.add_tuple(space, &buf, &(x * c));
    }
}

impl fmt::Display for SymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(m, c)| format!("{}*{:?}", format_scalar(c), m)).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}
