//! Exact-arithmetic workbench for finite-dimensional Leibniz algebras.
//!
//! Everything runs over the Gaussian rationals Q(i): structure-constant
//! tables, deterministic linear algebra, structural invariants (series,
//! annihilators, nilradical, derivations), a catalog of the small solvable
//! Leibniz algebras with verification, and explicit isomorphism search with
//! basis-independent fingerprints.

pub mod algebra;
pub mod catalog;
pub mod census;
pub mod classify;
pub mod fingerprint;
pub mod iso;
pub mod jsonio;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod structure;

pub use algebra::AlgebraTable;
pub use linalg::{Matrix, Subspace};
pub use scalar::{parse_scalar, Scalar};

use thiserror::Error as ThisError;

#[derive(Debug, Clone, ThisError)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("nilradical search could not certify a maximal nilpotent ideal")]
    NilradicalUndetermined,
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("constraint violation for {family}: {predicate}")]
    ConstraintViolation { family: String, predicate: String },
    #[error("table fails the Leibniz identity at triple ({0}, {1}, {2})")]
    NotLeibniz(usize, usize, usize),
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("{0}")]
    Invalid(String),
}

/// Node budget for bounded searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    /// Numerator/denominator magnitude bound for back-substituted rationals.
    pub height: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { nodes: 100_000, height: 64 }
    }
}

impl Budget {
    pub fn with_nodes(nodes: u64) -> Self {
        Budget { nodes, ..Budget::default() }
    }
}
