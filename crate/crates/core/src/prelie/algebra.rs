use std::sync::Arc;

use num_traits::One;

use crate::error::{bail, Result};
use crate::maps::{AltMap, SymMap, TensorMap};
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// `x ▷ y`, associator graded-symmetric in the first two arguments.
    Left,
    /// `x ◁ y`, associator graded-symmetric in the last two arguments.
    Right,
}

/// A graded pre-Lie algebra with degree-zero product and an optional
/// degree-one differential.
#[derive(Debug, Clone, PartialEq)]
pub struct PreLieAlgebra {
    space: Arc<GradedSpace>,
    chirality: Chirality,
    product: TensorMap,
    differential: Option<SymMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreLieReport {
    pub chirality: Chirality,
    /// Basis triples on which the associator symmetry fails.
    pub associator_failures: Vec<(usize, usize, usize)>,
    /// Basis triples on which Jacobi fails for the commutator bracket.
    pub jacobi_failures: Vec<(usize, usize, usize)>,
}

impl PreLieReport {
    pub fn passed(&self) -> bool {
        self.associator_failures.is_empty() && self.jacobi_failures.is_empty()
    }

    /// Jacobi failing while the pre-Lie identity holds cannot happen
    /// mathematically, so it points at a sign error in the implementation.
    pub fn sign_bug(&self) -> bool {
        self.associator_failures.is_empty() && !self.jacobi_failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationReport {
    /// Pairs with `d[x,y] ≠ [dx,y] + (-1)^{|d||x|}[x,dy]`.
    pub bracket_failures: Vec<(usize, usize)>,
    pub squares_to_zero: bool,
    /// Pairs with `d(x▷y) ≠ dx▷y + (-1)^{|d||x|}x▷dy`. Not required; a
    /// product derivation has vanishing higher brackets.
    pub product_failures: Vec<(usize, usize)>,
}

impl DerivationReport {
    pub fn is_bracket_derivation(&self) -> bool {
        self.bracket_failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.is_bracket_derivation() && self.squares_to_zero
    }

    pub fn is_product_derivation(&self) -> bool {
        self.product_failures.is_empty()
    }
}

impl PreLieAlgebra {
    pub fn new(
        space: &Arc<GradedSpace>,
        chirality: Chirality,
        product: TensorMap,
        differential: Option<SymMap>,
    ) -> Result<Self> {
        if product.arity() != 2 || product.degree() != 0 {
            bail!(Argument, "the product must be bilinear of degree 0");
        }
        if **product.source() != **space || **product.target() != **space {
            bail!(Argument, "product defined on a different space");
        }
        if let Some(d) = &differential {
            if d.arity() != 1 || d.degree() != 1 || **d.source() != **space || **d.target() != **space {
                bail!(Argument, "the differential must be a degree-1 linear endomorphism");
            }
        }
        Ok(Self { space: space.clone(), chirality, product, differential })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn product(&self) -> &TensorMap {
        &self.product
    }

    pub fn differential(&self) -> Option<&SymMap> {
        self.differential.as_ref()
    }

    pub fn with_differential(&self, d: Option<SymMap>) -> Result<Self> {
        Self::new(&self.space, self.chirality, self.product.clone(), d)
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        self.product.eval_vectors(&[x, y])
    }

    fn associator(&self, x: usize, y: usize, z: usize) -> Vector {
        let (x, y, z) = (Vector::basis(x), Vector::basis(y), Vector::basis(z));
        let mut a = self.mul(&self.mul(&x, &y), &z);
        a.add_scaled(&self.mul(&x, &self.mul(&y, &z)), &-Scalar::one());
        a
    }

    /// Exhaustive check of the pre-Lie identity for the algebra's chirality
    /// and of Jacobi for the commutator, on all basis triples.
    pub fn check_prelie(&self) -> PreLieReport {
        let n = self.space.dim();
        let deg = |g: usize| self.space.degree(g);
        let mut assoc = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let ok = match self.chirality {
                        Chirality::Left => self.associator(x, y, z) == self.associator(y, x, z).scaled(&sign(deg(x) * deg(y))),
                        Chirality::Right => self.associator(x, y, z) == self.associator(x, z, y).scaled(&sign(deg(y) * deg(z))),
                    };
                    if !ok {
                        assoc.push((x, y, z));
                    }
                }
            }
        }
        let br = self.bracket_unchecked();
        let b = |u: &Vector, v: &Vector| br.eval_vectors(&[u, v]);
        let mut jac = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (vx, vy, vz) = (Vector::basis(x), Vector::basis(y), Vector::basis(z));
                    let lhs = b(&vx, &b(&vy, &vz));
                    let mut rhs = b(&b(&vx, &vy), &vz);
                    rhs.add_scaled(&b(&vy, &b(&vx, &vz)), &sign(deg(x) * deg(y)));
                    if lhs != rhs {
                        jac.push((x, y, z));
                    }
                }
            }
        }
        PreLieReport { chirality: self.chirality, associator_failures: assoc, jacobi_failures: jac }
    }

    fn bracket_unchecked(&self) -> AltMap {
        let mut out = AltMap::on(&self.space, 2, 0);
        for m in out.source().shifted(1).sym_monomials(2) {
            let (x, y) = (m[0], m[1]);
            let mut v = self.product.eval_gens(&[x, y]);
            v.add_scaled(&self.product.eval_gens(&[y, x]), &-sign(self.space.degree(x) * self.space.degree(y)));
            out.set(&m, v).expect("commutator is homogeneous and antisymmetric");
        }
        out
    }

    /// `[x,y] = x·y - (-1)^{|x||y|} y·x`, the same formula for both
    /// chiralities.
    pub fn associated_bracket(&self) -> Result<AltMap> {
        let r = self.check_prelie();
        if !r.passed() {
            bail!(Structural, "not a graded pre-Lie algebra ({} associator failures)", r.associator_failures.len());
        }
        Ok(self.bracket_unchecked())
    }

    /// Left pre-Lie algebra with `x ▷ y = (-1)^{|x||y|+1} y ◁ x` and the same
    /// commutator bracket. Left algebras are returned unchanged.
    pub fn right_to_left(&self) -> Result<Self> {
        if self.chirality == Chirality::Left {
            return Ok(self.clone());
        }
        let r = self.check_prelie();
        if !r.associator_failures.is_empty() {
            bail!(Precondition, "not a right pre-Lie algebra");
        }
        let mut p = TensorMap::on(&self.space, 2, 0);
        for t in self.space.tensor_monomials(2) {
            let (x, y) = (t[0], t[1]);
            let v = self.product.eval_gens(&[y, x]).scaled(&sign(self.space.degree(x) * self.space.degree(y) + 1));
            p.set(&t, v)?;
        }
        Self::new(&self.space, Chirality::Left, p, self.differential.clone())
    }

    fn left(&self) -> Result<std::borrow::Cow<'_, Self>> {
        Ok(match self.chirality {
            Chirality::Left => std::borrow::Cow::Borrowed(self),
            Chirality::Right => std::borrow::Cow::Owned(self.right_to_left()?),
        })
    }

    /// Left adjoint `∇_v = v ▷ -` of a homogeneous vector of the given
    /// degree.
    pub fn nabla(&self, v: &Vector, degree: i64) -> Result<SymMap> {
        let l = self.left()?;
        let mut out = SymMap::on(&self.space, 1, degree);
        for y in 0..self.space.dim() {
            out.set(&[y], l.mul(v, &Vector::basis(y)))?;
        }
        Ok(out)
    }

    /// Inner derivation `ad_x = [x, -]` of a generator.
    pub fn ad(&self, x: usize) -> Result<SymMap> {
        let br = self.associated_bracket()?;
        let mut out = SymMap::on(&self.space, 1, self.space.degree(x));
        for y in 0..self.space.dim() {
            out.set(&[y], br.eval_gens(&[x, y]))?;
        }
        Ok(out)
    }

    /// Checks that `d` is a derivation of the bracket and squares to zero,
    /// and separately whether it is a derivation of the product.
    pub fn check_derivation(&self, d: &SymMap) -> Result<DerivationReport> {
        if d.arity() != 1 || **d.source() != *self.space || **d.target() != *self.space {
            bail!(Argument, "a derivation is a linear endomorphism of the carrier");
        }
        let br = self.associated_bracket()?;
        let l = self.left()?;
        let n = self.space.dim();
        let dv = |g: usize| d.eval_gens(&[g]);
        let mut bracket_failures = Vec::new();
        let mut product_failures = Vec::new();
        for x in 0..n {
            let s = sign(d.degree() * self.space.degree(x));
            for y in 0..n {
                let (vx, vy) = (Vector::basis(x), Vector::basis(y));
                let lhs = d.apply(&br.eval_gens(&[x, y]));
                let mut rhs = br.eval_vectors(&[&dv(x), &vy]);
                rhs.add_scaled(&br.eval_vectors(&[&vx, &dv(y)]), &s);
                if lhs != rhs {
                    bracket_failures.push((x, y));
                }
                let lhs = d.apply(&l.mul(&vx, &vy));
                let mut rhs = l.mul(&dv(x), &vy);
                rhs.add_scaled(&l.mul(&vx, &dv(y)), &s);
                if lhs != rhs {
                    product_failures.push((x, y));
                }
            }
        }
        Ok(DerivationReport { bracket_failures, squares_to_zero: d.compose_linear(d).is_zero(), product_failures })
    }
}
