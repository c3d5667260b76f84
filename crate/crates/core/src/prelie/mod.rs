//! Graded pre-Lie algebras, bracket derivations and the Kapranov brackets
//! `Φ(d)_n` they generate.

mod algebra;
mod kapranov;

pub use algebra::{Chirality, DerivationReport, PreLieAlgebra, PreLieReport};
pub use kapranov::{
    kapranov, kapranov_splitting, verify_compact_recursion, verify_compact_recursion_with, verify_lie_morphism,
    CompactRecursionReport, KapranovTower, KapranovWitness, LieMorphismReport, TowerVariant,
};
