//! Décalage: graded-antisymmetric maps on `V` versus graded-symmetric maps
//! on the shift `V[1]`.
//!
//! Both kinds of map are stored on the same canonical index lists (an
//! exterior monomial of `V` is a symmetric monomial of `V[1]`), so the
//! isomorphism is a sign per stored entry:
//!
//! `q_n(sl_1 ⊙ … ⊙ sl_n) = κ_n (-1)^{Σ_a (n-a)|l_a|} s l_n(l_1 ∧ … ∧ l_n)`
//!
//! with `κ_n = -(-1)^{n(n-1)/2}`. The constant `κ_n` is fixed so that a dg
//! Lie algebra `(L, d, [,])` goes to `q_1 = -d`, `q_2(l_1 ⊙ l_2) =
//! (-1)^{|l_1|}[l_1, l_2]`.

use std::sync::Arc;

use crate::error::{bail, Result};
use crate::maps::{AltMap, SymMap};
use crate::scalar::sign;
use crate::space::GradedSpace;

fn entry_sign(space: &GradedSpace, m: &[usize]) -> i64 {
    let n = m.len() as i64;
    let kappa = 1 + n * (n - 1) / 2;
    let e: i64 = m.iter().enumerate().map(|(a, &g)| (n - 1 - a as i64) * space.degree(g)).sum();
    kappa + e
}

fn check_shift(orig: &GradedSpace, shifted: &GradedSpace, what: &str) -> Result<()> {
    if *shifted != orig.shifted(1) {
        bail!(Argument, "{what} is not the shift by one of the map's {what}");
    }
    Ok(())
}

/// `Hom(V^{∧n}, W)` of degree `k` to `Hom(V[1]^{⊙n}, W[1])` of degree
/// `k + n - 1`. `source` and `target` must be `V[1]` and `W[1]`.
pub fn shift_down(map: &AltMap, source: &Arc<GradedSpace>, target: &Arc<GradedSpace>) -> Result<SymMap> {
    check_shift(map.source(), source, "source")?;
    check_shift(map.target(), target, "target")?;
    let n = map.arity() as i64;
    let mut out = SymMap::new(source.clone(), target.clone(), map.arity(), map.degree() + n - 1);
    for (m, v) in map.entries() {
        out.set(m, v.scaled(&sign(entry_sign(map.source(), m))))?;
    }
    Ok(out)
}

/// Inverse of [`shift_down`]. `source` and `target` are `V` and `W`, with
/// `map` defined on `V[1]` and `W[1]`.
pub fn shift_up(map: &SymMap, source: &Arc<GradedSpace>, target: &Arc<GradedSpace>) -> Result<AltMap> {
    check_shift(source, map.source(), "source")?;
    check_shift(target, map.target(), "target")?;
    let n = map.arity() as i64;
    let mut out = AltMap::new(source.clone(), target.clone(), map.arity(), map.degree() - n + 1);
    for (m, v) in map.entries() {
        out.set(m, v.scaled(&sign(entry_sign(source, m))))?;
    }
    Ok(out)
}
