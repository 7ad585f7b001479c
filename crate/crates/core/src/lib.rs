//! Exact-arithmetic toolkit for periods of algebraic cycles inside Fermat
//! hypersurfaces.
//!
//! The crate evaluates closed-form periods of linear and complete-intersection
//! cycles, assembles the period matrices whose kernels control the tangent
//! spaces of Hodge loci, and certifies their ranks over Q(ζ_{2d}) with an
//! exact fraction-free elimination and a modular fast path.

pub mod codim;
pub mod combinatorics;
pub mod cyclotomic;
pub mod matrix;
pub mod periods;
pub mod rank;
pub mod verify;

pub use combinatorics::{ExponentIndex, FermatParams, LinearCycle};
pub use cyclotomic::{CycElt, CycRational, CyclotomicField};
pub use matrix::{PeriodMatrix, Provenance};
pub use periods::{DegreeVector, PeriodValue};
pub use rank::{RankMethod, RankResult};
pub use verify::{CaseKind, CaseStatus, RankStrategy, Report, SuiteConfig, VerificationCase};

/// Errors surfaced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("prime {prime} unusable for order {order}: {reason}")]
    BadPrime { prime: u64, order: u32, reason: String },
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
