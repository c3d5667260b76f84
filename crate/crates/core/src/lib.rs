//! Exact coderivation calculus on graded symmetric coalgebras, Kapranov's
//! brackets on graded pre-Lie algebras, and truncated certification of
//! homotopy abelian L∞[1] structures.
//!
//! Every computation is over the rationals. Infinite Taylor towers are cut
//! at a maximum arity `N`; see the crate README for which conclusions are
//! exact at a given `N` and which are only evidence.

pub mod coalgebra;
pub mod decalage;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod linfty;
pub mod maps;
pub mod perm;
pub mod prelie;
pub mod scalar;
pub mod space;
pub mod vector;

pub use error::{Error, Result};
pub use maps::{AltMap, SymMap, TensorMap};
pub use scalar::Scalar;
pub use space::GradedSpace;
pub use vector::{SymElem, Vector};
