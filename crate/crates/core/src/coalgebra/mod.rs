//! Coderivations and morphisms of the reduced and non-reduced symmetric
//! coalgebras, and tensor-coalgebra coderivations with the Gerstenhaber
//! product.

mod coder;
mod morphism;
mod tensor;

pub use coder::{Coderivation, Variant};
pub use morphism::CoalgebraMorphism;
pub use tensor::{gerstenhaber_bracket, gerstenhaber_product, TensorCoderivation};

use crate::maps::SymMap;
use crate::scalar::Scalar;
use crate::space::GradedSpace;
use crate::vector::{SymElem, Vector};

/// `w_1 ⊙ … ⊙ w_k` for vectors `w_i`, expanded into canonical monomials.
pub fn sym_product(space: &GradedSpace, ws: &[Vector]) -> SymElem {
    let mut out = SymElem::zero();
    if ws.iter().any(Vector::is_zero) {
        return out;
    }
    let mut buf = Vec::with_capacity(ws.len());
    product_rec(space, ws, &mut buf, &num_traits::One::one(), &mut out);
    out
}

fn product_rec(space: &GradedSpace, ws: &[Vector], buf: &mut Vec<usize>, c: &Scalar, out: &mut SymElem) {
    if buf.len() == ws.len() {
        out.add_tuple(space, buf, c);
        return;
    }
    for (g, x) in ws[buf.len()].iter() {
        buf.push(g);
        product_rec(space, ws, buf, &(c * x), out);
        buf.pop();
    }
}

/// Applies a Taylor coefficient to the component of matching length.
pub fn apply_taylor(q: &SymMap, x: &SymElem) -> Vector {
    let mut out = Vector::zero();
    for (m, c) in x.iter() {
        if m.len() == q.arity() {
            out.add_scaled(&q.eval_gens(m), c);
        }
    }
    out
}
