use super::ce::{h_injectivity, InjectivityReport};
use super::splitting::{find_splitting, SplittingOutcome};
use super::transfer::{contraction_from_cohomology, transfer, Transfer};
use crate::coalgebra::Coderivation;
use crate::error::Result;

/// Outcome of the truncated homotopy-abelian checks. Refutations are
/// conclusive; `Supported(n)` only says nothing fails up to arity `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Supported(usize),
    Refuted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub max_arity: usize,
    pub status: Status,
    pub splitting: SplittingOutcome,
    pub injectivity: InjectivityReport,
    pub transfer: Transfer,
    /// The three checks agree: the splitting system is feasible exactly when
    /// `H(i)` is injective, exactly when every transferred bracket vanishes.
    pub consistent: bool,
}

/// Runs the splitting solver, the CE injectivity check and homotopy
/// transfer at truncation `n`.
pub fn is_homotopy_abelian(q: &Coderivation, n: usize) -> Result<Verdict> {
    let splitting = find_splitting(q, n)?;
    let injectivity = h_injectivity(q, n)?;
    let c = contraction_from_cohomology(q.coefficient(1))?;
    let transfer = transfer(q, &c, n)?;
    let checks = [splitting.is_feasible(), injectivity.injective(), transfer.massey_vanishing()];
    let status = if checks.iter().all(|&b| b) { Status::Supported(n) } else { Status::Refuted };
    let consistent = checks.iter().all(|&b| b == checks[0]);
    Ok(Verdict { max_arity: n, status, splitting, injectivity, transfer, consistent })
}
