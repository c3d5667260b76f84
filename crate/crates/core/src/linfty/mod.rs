//! L∞[1] structures, their tangent and Chevalley–Eilenberg complexes, the
//! splitting property, and minimal models by homotopy transfer.

mod ce;
mod complex;
mod dgla;
mod splitting;
mod structure;
mod transfer;
mod verdict;

pub use ce::{arity_range, ce_complex, h_injectivity, CeComplex, CoderBasis, InjectivityReport};
pub use complex::{chain_map_defects, induced_kernel_dims, is_quasi_isomorphism, ChainComplexFD};
pub use dgla::{Dgla, DglaReport};
pub use splitting::{
    check_splitting_witness, find_splitting, verify_certificate, InfeasibilityCertificate, SplittingOutcome,
    SplittingWitness, WitnessCheck,
};
pub use structure::{check_linfty, is_weak_equivalence, LInftyStructure, LinftyReport, TangentComplex};
pub use transfer::{contraction_from_cohomology, transfer, Contraction, Transfer};
pub use verdict::{is_homotopy_abelian, Status, Verdict};
