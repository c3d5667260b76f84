use num_traits::Zero;

use super::ce::{build, CeComplex};
use super::structure::check_linfty;
use crate::coalgebra::{Coderivation, Variant};
use crate::error::{bail, Result};
use crate::linalg::{dot, solve_or_certify, Solution, SparseMatrix, SparseVec};
use crate::maps::SymMap;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// A map `s : V → Coder(SV)` given on generators, `s(v) = σ_v + S_v` with
/// `S_v` reduced, truncated at arity `N - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingWitness {
    pub max_arity: usize,
    pub maps: Vec<Coderivation>,
}

/// A vector `y` over the equations of the truncated splitting system with
/// `yᵀA = 0` and `yᵀb = 1`. Entries are indexed by (generator `v`,
/// monomial, output generator) of the equation `[Q, s(v)] = s(q_1 v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    pub max_arity: usize,
    pub entries: Vec<(usize, Vec<usize>, usize, Scalar)>,
}

impl InfeasibilityCertificate {
    /// Smallest truncation at which the certificate already applies: an
    /// equation on monomials of length `k` involves `q_{k+1}`.
    pub fn lowest_arity(&self) -> usize {
        self.entries.iter().map(|e| e.1.len() + 1).min().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplittingOutcome {
    Feasible(SplittingWitness),
    Infeasible(InfeasibilityCertificate),
}

impl SplittingOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SplittingOutcome::Feasible(_))
    }
}

/// Which generators fail `ev1(s(v)) = v`, and the first arity at which
/// `[Q, s(v)] = s(q_1 v)` fails for each generator.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WitnessCheck {
    pub max_arity: usize,
    pub ev1_failures: Vec<usize>,
    pub dg_failures: Vec<(usize, usize)>,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.ev1_failures.is_empty() && self.dg_failures.is_empty()
    }
}

struct System {
    ce: CeComplex,
    col_off: Vec<usize>,
    row_off: Vec<usize>,
    a: SparseMatrix,
    b: SparseVec,
}

fn precondition(q: &Coderivation, n: usize) -> Result<Coderivation> {
    if q.variant() != Variant::Reduced || q.degree() != 1 {
        bail!(Structural, "expected a degree-1 reduced coderivation");
    }
    if n == 0 {
        bail!(Argument, "truncation arity must be positive");
    }
    if let Some(k) = check_linfty(q, n)?.lowest_failing_arity() {
        bail!(Precondition, "Q•Q is nonzero at arity {k}");
    }
    Ok(q.with_max_arity(n))
}

/// Unknowns `S_v ∈ Coder̄^{|v|}` (arities `1..=N-1`), equations
/// `[Q, S_v] - S_{q_1 v} = -(q_{k+1}(v ⊙ -))_{k=1..N-1}`.
fn system(q: &Coderivation, n: usize) -> Result<System> {
    let space = q.space().clone();
    let ce = build(q, Variant::Reduced, 1, n - 1)?;
    let dim = |k: i64| ce.basis.get(&k).map_or(0, Vec::len);
    let (mut col_off, mut row_off) = (Vec::new(), Vec::new());
    let (mut nc, mut nr) = (0, 0);
    for v in 0..space.dim() {
        col_off.push(nc);
        row_off.push(nr);
        nc += dim(space.degree(v));
        nr += dim(space.degree(v) + 1);
    }
    let mut a = SparseMatrix::zeros(nr, nc);
    let mut b = SparseVec::new();
    let q1 = q.coefficient(1);
    for v in 0..space.dim() {
        let k = space.degree(v);
        let d = ce.complex.differential(k);
        for (i, row) in d.rows().iter().enumerate() {
            for (j, x) in row {
                a.add_entry(row_off[v] + i, col_off[v] + j, x);
            }
        }
        for (w, c) in q1.eval_gens(&[v]).iter() {
            for i in 0..dim(k + 1) {
                a.add_entry(row_off[v] + i, col_off[w] + i, &-c.clone());
            }
        }
        if let Some(rows) = ce.basis.get(&(k + 1)) {
            for (i, (m, g)) in rows.iter().enumerate() {
                let mut t = vec![v];
                t.extend_from_slice(m);
                if m.len() + 1 <= q.max_arity() {
                    let x = q.coefficient(m.len() + 1).eval_gens(&t).coeff(*g);
                    if !x.is_zero() {
                        b.insert(row_off[v] + i, -x);
                    }
                }
            }
        }
    }
    Ok(System { ce, col_off, row_off, a, b })
}

/// Solves for a dg right inverse of the evaluation at truncation `n`, or
/// returns a certificate that none exists. Infeasibility at any `n` refutes
/// the splitting property; feasibility is evidence at that truncation.
pub fn find_splitting(q: &Coderivation, n: usize) -> Result<SplittingOutcome> {
    let q = precondition(q, n)?;
    let space = q.space().clone();
    let sys = system(&q, n)?;
    match solve_or_certify(&sys.a, &sys.b)? {
        Solution::Solved(x) => {
            let mut maps = Vec::with_capacity(space.dim());
            for v in 0..space.dim() {
                let k = space.degree(v);
                let mut s = Coderivation::sigma(&space, &Vector::basis(v), k, n - 1)?;
                let mut coeffs: Vec<SymMap> = (1..n).map(|a| SymMap::on(&space, a, k)).collect();
                if let Some(cols) = sys.ce.basis.get(&k) {
                    for (j, (m, g)) in cols.iter().enumerate() {
                        if let Some(c) = x.get(&(sys.col_off[v] + j)) {
                            coeffs[m.len() - 1].add(m, &Vector::term(*g, c.clone()))?;
                        }
                    }
                }
                for c in coeffs {
                    s.set_coefficient(c)?;
                }
                maps.push(s);
            }
            let witness = SplittingWitness { max_arity: n, maps };
            let check = check_splitting_witness(&q, n, &witness.maps)?;
            if !check.passed() {
                bail!(InternalConsistency, "solution of the splitting system fails the direct bracket check");
            }
            Ok(SplittingOutcome::Feasible(witness))
        }
        Solution::Infeasible(y) => {
            let mut entries = Vec::new();
            for v in 0..space.dim() {
                let k = space.degree(v) + 1;
                if let Some(rows) = sys.ce.basis.get(&k) {
                    for (i, (m, g)) in rows.iter().enumerate() {
                        if let Some(c) = y.get(&(sys.row_off[v] + i)) {
                            entries.push((v, m.clone(), *g, c.clone()));
                        }
                    }
                }
            }
            Ok(SplittingOutcome::Infeasible(InfeasibilityCertificate { max_arity: n, entries }))
        }
    }
}

/// Re-derives the splitting system and checks `yᵀA = 0`, `yᵀb = 1`.
pub fn verify_certificate(q: &Coderivation, cert: &InfeasibilityCertificate) -> Result<bool> {
    let n = cert.max_arity;
    let q = precondition(q, n)?;
    let sys = system(&q, n)?;
    let mut y = SparseVec::new();
    for (v, m, g, c) in &cert.entries {
        let k = q.space().degree(*v) + 1;
        let Some((k2, i)) = sys.ce.locate(&(m.clone(), *g)) else { return Ok(false) };
        if k2 != k {
            return Ok(false);
        }
        y.insert(sys.row_off[*v] + i, c.clone());
    }
    let yt_a = sys.a.transpose().mul_vec(&y);
    Ok(yt_a.is_empty() && dot(&y, &sys.b) == Scalar::from_integer(1.into()))
}

/// Checks a candidate splitting directly with Nijenhuis–Richardson
/// brackets: `ev1(s(v)) = v` and `[Q, s(v)] = s(q_1 v)` in arities
/// `0..=n-1`, for every generator `v`.
pub fn check_splitting_witness(q: &Coderivation, n: usize, s: &[Coderivation]) -> Result<WitnessCheck> {
    let space = q.space().clone();
    if s.len() != space.dim() {
        bail!(Argument, "witness has {} maps for {} generators", s.len(), space.dim());
    }
    let qn = q.with_max_arity(n).to_nonreduced();
    let q1 = q.coefficient(1);
    let mut out = WitnessCheck { max_arity: n, ..Default::default() };
    for v in 0..space.dim() {
        if s[v].ev1()? != Vector::basis(v) {
            out.ev1_failures.push(v);
        }
        let lhs = qn.nr_bracket(&s[v].with_max_arity(n))?;
        let mut rhs = Coderivation::zero(&space, Variant::Nonreduced, space.degree(v) + 1, n);
        for (w, c) in q1.eval_gens(&[v]).iter() {
            rhs = rhs.add_scaled(&s[w].with_max_arity(n), c)?;
        }
        if lhs.q0() != rhs.q0() {
            out.dg_failures.push((v, 0));
            continue;
        }
        if let Some(k) = (1..n).find(|&k| lhs.coefficient(k) != rhs.coefficient(k)) {
            out.dg_failures.push((v, k));
        }
    }
    Ok(out)
}
