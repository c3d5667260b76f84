use std::sync::Arc;

use num_traits::One;

use super::algebra::PreLieAlgebra;
use crate::coalgebra::{gerstenhaber_bracket, Coderivation, Variant};
use crate::error::{bail, Result};
use crate::linfty::{check_linfty, check_splitting_witness, SplittingWitness, WitnessCheck};
use crate::maps::{SymMap, TensorMap};
use crate::scalar::{sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TowerVariant {
    /// `Φ_2 = ∇_{dx} - [d, ∇_x]`, `Φ_{n+1} = -[Φ_n, ∇_x]`.
    Plain,
    /// `Φ̄_2 = [d, ∇_x] - ∇_{dx}`, `Φ̄_{n+1} = [Φ̄_n, ∇_x]`.
    Alternating,
}

impl TowerVariant {
    /// Sign `±` in the witness `σ_x ± ∇_x`.
    fn witness_sign(self) -> Scalar {
        match self {
            TowerVariant::Plain => Scalar::one(),
            TowerVariant::Alternating => -Scalar::one(),
        }
    }
}

/// The brackets `Φ(d)_1, …, Φ(d)_N` as a coderivation of `S̄L` of degree
/// `|d|`.
#[derive(Debug, Clone, PartialEq)]
pub struct KapranovTower {
    pub variant: TowerVariant,
    pub derivation: SymMap,
    pub coder: Coderivation,
}

impl KapranovTower {
    pub fn max_arity(&self) -> usize {
        self.coder.max_arity()
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.coder.space()
    }

    pub fn coefficient(&self, n: usize) -> &SymMap {
        self.coder.coefficient(n)
    }
}

fn nabla_all(l: &PreLieAlgebra) -> Result<Vec<TensorMap>> {
    let sp = l.space();
    (0..sp.dim()).map(|x| Ok(l.nabla(&Vector::basis(x), sp.degree(x))?.to_tensor())).collect()
}

fn symmetrize_checked(t: TensorMap, n: usize) -> Result<SymMap> {
    match t.to_sym() {
        Ok(s) => Ok(s),
        Err(tuple) => bail!(
            InternalConsistency,
            "Φ(d)_{n} is not graded symmetric on the tuple {:?}",
            tuple.iter().map(|&g| t.source().name(g).to_string()).collect::<Vec<_>>()
        ),
    }
}

/// Builds the tower by its recursion, computing each `Φ(d)_n` on all tuples
/// with the first slot distinguished and then asserting graded symmetry.
pub fn kapranov(l: &PreLieAlgebra, d: &SymMap, n: usize, variant: TowerVariant) -> Result<KapranovTower> {
    if n == 0 {
        bail!(Argument, "truncation arity must be positive");
    }
    let pre = l.check_prelie();
    if !pre.passed() {
        bail!(Precondition, "not a graded pre-Lie algebra");
    }
    let l = l.right_to_left()?;
    let rep = l.check_derivation(d)?;
    if !rep.is_bracket_derivation() {
        let (x, y) = rep.bracket_failures[0];
        bail!(Precondition, "not a derivation of the bracket on ({}, {})", l.space().name(x), l.space().name(y));
    }
    let sp = l.space().clone();
    let dd = d.degree();
    let nab = nabla_all(&l)?;
    let sgn = variant.witness_sign();
    let mut coder = Coderivation::zero(&sp, Variant::Reduced, dd, n);
    coder.set_coefficient(d.clone())?;
    if n >= 2 {
        // ∇_{dx} y - d(x ▷ y) + (-1)^{|d||x|} x ▷ dy, negated for the alternating tower
        let mut t = TensorMap::on(&sp, 2, dd);
        for x in 0..sp.dim() {
            let dx = d.eval_gens(&[x]);
            let s = sign(dd * sp.degree(x));
            for y in 0..sp.dim() {
                let (vx, vy) = (Vector::basis(x), Vector::basis(y));
                let mut v = l.mul(&dx, &vy);
                v.add_scaled(&d.apply(&l.mul(&vx, &vy)), &-Scalar::one());
                v.add_scaled(&l.mul(&vx, &d.eval_gens(&[y])), &s);
                t.set(&[x, y], v.scaled(&sgn))?;
            }
        }
        coder.set_coefficient(symmetrize_checked(t, 2)?)?;
    }
    for k in 2..n {
        let prev = coder.coefficient(k).to_tensor();
        let mut t = TensorMap::on(&sp, k + 1, dd);
        for x in 0..sp.dim() {
            let g = gerstenhaber_bracket(&prev, &nab[x])?;
            for (ys, v) in g.entries() {
                let mut tuple = vec![x];
                tuple.extend_from_slice(ys);
                t.set(&tuple, v.scaled(&-sgn.clone()))?;
            }
        }
        coder.set_coefficient(symmetrize_checked(t, k + 1)?)?;
    }
    Ok(KapranovTower { variant, derivation: d.clone(), coder })
}

/// `σ_x ± ∇_x` as a non-reduced coderivation.
fn witness_map(l: &PreLieAlgebra, x: &Vector, degree: i64, sgn: &Scalar, n: usize) -> Result<Coderivation> {
    let mut c = Coderivation::sigma(l.space(), x, degree, n)?;
    if n >= 1 {
        c.set_coefficient(l.nabla(x, degree)?.scaled(sgn))?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactRecursionReport {
    pub max_arity: usize,
    /// (generator, first failing arity).
    pub failures: Vec<(usize, usize)>,
}

impl CompactRecursionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[Φ, σ_x ± ∇_x] = σ_{dx} ± ∇_{dx}` in arities `0..N-1` for every
/// generator `x`, with the sign chosen explicitly.
pub fn verify_compact_recursion_with(
    l: &PreLieAlgebra,
    tower: &KapranovTower,
    witness: TowerVariant,
) -> Result<CompactRecursionReport> {
    let l = l.right_to_left()?;
    let sp = l.space().clone();
    let n = tower.max_arity();
    let sgn = witness.witness_sign();
    let phi = tower.coder.to_nonreduced();
    let dd = tower.derivation.degree();
    let mut failures = Vec::new();
    for x in 0..sp.dim() {
        let k = sp.degree(x);
        let w = witness_map(&l, &Vector::basis(x), k, &sgn, n)?;
        let lhs = phi.nr_bracket(&w)?;
        let dx = tower.derivation.eval_gens(&[x]);
        let rhs = witness_map(&l, &dx, k + dd, &sgn, n)?;
        if lhs.q0() != rhs.q0() {
            failures.push((x, 0));
        } else if let Some(a) = (1..n).find(|&a| lhs.coefficient(a) != rhs.coefficient(a)) {
            failures.push((x, a));
        }
    }
    Ok(CompactRecursionReport { max_arity: n, failures })
}

/// [`verify_compact_recursion_with`] using the tower's own witness sign.
pub fn verify_compact_recursion(l: &PreLieAlgebra, tower: &KapranovTower) -> Result<CompactRecursionReport> {
    verify_compact_recursion_with(l, tower, tower.variant)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieMorphismReport {
    pub max_arity: usize,
    pub failing_arities: Vec<usize>,
}

impl LieMorphismReport {
    pub fn passed(&self) -> bool {
        self.failing_arities.is_empty()
    }
}

/// Checks `[Φ(d1), Φ(d2)] = Φ([d1, d2])` up to arity `n`, with
/// `[d1, d2] = d1 d2 - (-1)^{|d1||d2|} d2 d1`.
pub fn verify_lie_morphism(l: &PreLieAlgebra, d1: &SymMap, d2: &SymMap, n: usize) -> Result<LieMorphismReport> {
    let p1 = kapranov(l, d1, n, TowerVariant::Plain)?;
    let p2 = kapranov(l, d2, n, TowerVariant::Plain)?;
    let lhs = p1.coder.nr_bracket(&p2.coder)?;
    let mut d12 = d1.compose_linear(d2);
    d12.add_scaled(&d2.compose_linear(d1), &-sign(d1.degree() * d2.degree()))?;
    let rhs = kapranov(l, &d12, n, TowerVariant::Plain)?;
    let failing_arities = (1..=n).filter(|&a| lhs.coefficient(a) != rhs.coefficient(a)).collect();
    Ok(LieMorphismReport { max_arity: n, failing_arities })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KapranovWitness {
    pub witness: SplittingWitness,
    pub check: WitnessCheck,
}

/// The splitting `x ↦ σ_x + ∇_x` (or `σ_x - ∇_x` for the alternating
/// tower), checked against the generic witness test.
pub fn kapranov_splitting(l: &PreLieAlgebra, tower: &KapranovTower) -> Result<KapranovWitness> {
    let d = &tower.derivation;
    if d.degree() != 1 || !d.compose_linear(d).is_zero() {
        bail!(Precondition, "the derivation must have degree 1 and square to zero");
    }
    let n = tower.max_arity();
    if let Some(k) = check_linfty(&tower.coder, n)?.lowest_failing_arity() {
        bail!(Precondition, "Φ(d)•Φ(d) is nonzero at arity {k}");
    }
    let l = l.right_to_left()?;
    let sp = l.space().clone();
    let sgn = tower.variant.witness_sign();
    let maps = (0..sp.dim())
        .map(|x| witness_map(&l, &Vector::basis(x), sp.degree(x), &sgn, n))
        .collect::<Result<Vec<_>>>()?;
    let check = check_splitting_witness(&tower.coder, n, &maps)?;
    Ok(KapranovWitness { witness: SplittingWitness { max_arity: n, maps }, check })
}
