use std::sync::Arc;

use crate::error::{bail, Result};
use crate::maps::{AltMap, SymMap};
use crate::scalar::sign;
use crate::space::GradedSpace;
use crate::vector::Vector;

/// A finite-dimensional differential graded Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Dgla {
    space: Arc<GradedSpace>,
    d: SymMap,
    bracket: AltMap,
}

/// Failures of the dg Lie axioms on basis elements.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DglaReport {
    pub d_squared: Vec<usize>,
    pub leibniz: Vec<(usize, usize)>,
    pub jacobi: Vec<(usize, usize, usize)>,
}

impl DglaReport {
    pub fn passed(&self) -> bool {
        self.d_squared.is_empty() && self.leibniz.is_empty() && self.jacobi.is_empty()
    }
}

impl Dgla {
    pub fn new(space: &Arc<GradedSpace>, d: SymMap, bracket: AltMap) -> Result<Self> {
        if d.arity() != 1 || d.degree() != 1 {
            bail!(Argument, "the differential must be linear of degree 1");
        }
        if bracket.arity() != 2 || bracket.degree() != 0 {
            bail!(Argument, "the bracket must be bilinear of degree 0");
        }
        for (what, s, t) in [("differential", d.source(), d.target()), ("bracket", bracket.source(), bracket.target())] {
            if **s != **space || **t != **space {
                bail!(Argument, "{what} is defined on a different space");
            }
        }
        Ok(Self { space: space.clone(), d, bracket })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn differential(&self) -> &SymMap {
        &self.d
    }

    pub fn bracket(&self) -> &AltMap {
        &self.bracket
    }

    fn br(&self, x: &Vector, y: &Vector) -> Vector {
        self.bracket.eval_vectors(&[x, y])
    }

    /// Checks `d² = 0`, `d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]` and
    /// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]` on basis elements.
    pub fn check_axioms(&self) -> DglaReport {
        let sp = &self.space;
        let n = sp.dim();
        let mut r = DglaReport::default();
        let b = |g: usize| Vector::basis(g);
        for x in 0..n {
            if !self.d.apply(&self.d.eval_gens(&[x])).is_zero() {
                r.d_squared.push(x);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = self.d.apply(&self.br(&b(x), &b(y)));
                let mut rhs = self.br(&self.d.eval_gens(&[x]), &b(y));
                rhs.add_scaled(&self.br(&b(x), &self.d.eval_gens(&[y])), &sign(sp.degree(x)));
                if lhs != rhs {
                    r.leibniz.push((x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.br(&b(x), &self.br(&b(y), &b(z)));
                    let mut rhs = self.br(&self.br(&b(x), &b(y)), &b(z));
                    rhs.add_scaled(&self.br(&b(y), &self.br(&b(x), &b(z))), &sign(sp.degree(x) * sp.degree(y)));
                    if lhs != rhs {
                        r.jacobi.push((x, y, z));
                    }
                }
            }
        }
        r
    }
}
