//! Finite graded generator sets.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{bail, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// An ordered list of named homogeneous generators. The order is the
/// canonical basis order used everywhere for sign normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in gens {
            let name = name.into();
            if index.insert(name.clone(), out.len()).is_some() {
                bail!(Argument, "duplicate generator name {name:?}");
            }
            out.push(Generator { name, degree });
        }
        Ok(Self { gens: out, index })
    }

    pub fn empty() -> Self {
        Self { gens: vec![], index: HashMap::new() }
    }

    pub fn arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.gens[g].degree
    }

    pub fn is_odd(&self, g: usize) -> bool {
        self.gens[g].degree.rem_euclid(2) == 1
    }

    pub fn name(&self, g: usize) -> &str {
        &self.gens[g].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    pub fn monomial_degree(&self, m: &[usize]) -> i64 {
        m.iter().map(|&g| self.degree(g)).sum()
    }

    /// Generators grouped by degree, in canonical order inside each group.
    pub fn by_degree(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            out.entry(g.degree).or_default().push(i);
        }
        out
    }

    /// The shifted space `V[k]`, with `V[k]^i = V^{i+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            gens: self
                .gens
                .iter()
                .map(|g| Generator { name: g.name.clone(), degree: g.degree - k })
                .collect(),
            index: self.index.clone(),
        }
    }

    /// All canonical symmetric monomials of the given length: non-decreasing
    /// index lists in which no odd generator repeats.
    pub fn sym_monomials(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.sym_rec(len, 0, &mut cur, &mut out);
        out
    }

    fn sym_rec(&self, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for g in start..self.dim() {
            cur.push(g);
            let next = if self.is_odd(g) { g + 1 } else { g };
            self.sym_rec(len, next, cur, out);
            cur.pop();
        }
    }

    /// All tensor monomials (arbitrary index lists) of the given length.
    pub fn tensor_monomials(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * self.dim());
            for m in &out {
                for g in 0..self.dim() {
                    let mut m2 = m.clone();
                    m2.push(g);
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::new([("x", 0), ("x", 1)]).is_err());
    }

    #[test]
    fn odd_generators_do_not_repeat() {
        let v = GradedSpace::new([("a", 0), ("b", 1)]).unwrap();
        let m2 = v.sym_monomials(2);
        assert_eq!(m2, vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(v.sym_monomials(3).len(), 2);
        assert_eq!(v.tensor_monomials(3).len(), 8);
    }

    #[test]
    fn shift_lowers_degrees() {
        let v = GradedSpace::new([("a", 0), ("b", 1)]).unwrap();
        assert_eq!(v.shifted(1).degrees(), vec![-1, 0]);
        assert_eq!(v.shifted(1).index_of("b"), Some(1));
    }

    #[test]
    fn empty_space() {
        let v = GradedSpace::empty();
        assert_eq!(v.sym_monomials(2).len(), 0);
        assert_eq!(v.sym_monomials(0), vec![Vec::<usize>::new()]);
    }
}
