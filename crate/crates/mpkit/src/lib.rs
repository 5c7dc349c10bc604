//! Matched projections of idempotent matrices.
//!
//! An idempotent `Q` (`Q^2 = Q`) has a distinguished orthogonal projection
//! `m(Q)` attached to it, computable by five algebraically equal but
//! numerically independent formulas. This crate provides:
//!
//! * [`spectral`] — the Hermitian/spectral kernels (operator absolute
//!   value, PSD square root, positive part, pseudoinverse, range
//!   projection) everything else consumes;
//! * [`idempotent`] — construction and validation of idempotents, the
//!   `[[I, A], [0, 0]]` block representation, and a seeded random
//!   generator with controllable size, rank and skew;
//! * [`matched`] — the five formulas for `m(Q)` and the symmetry
//!   `2 m(Q) - I`;
//! * [`verify`] — a registry of the operator identities `m(Q)` satisfies,
//!   evaluated numerically with residual reporting.
//!
//! All operations are pure functions; values are `Send + Sync` and batch
//! drivers may fan trials out across threads freely.

pub mod error;
pub mod idempotent;
pub mod matched;
pub mod matrix;
pub mod random;
pub mod spectral;
pub mod tolerance;
pub mod verify;

mod eigen;
mod svd;

pub use error::{Error, Result};
pub use idempotent::{
    extract_block_form, homotopy_point, make_idempotent_block, random_idempotent,
    validate_idempotent, BlockForm, Idempotent,
};
pub use matched::{
    matched, matched_block, matched_original, matched_simplified_q, matched_simplified_qstar,
    matched_symmetric, symmetry_operator, Formula, MatchedResult,
};
pub use matrix::{CMatrix, C64};
pub use spectral::{
    abs_op, hermitian_eigen, numerical_rank, op_norm, pinv, positive_part, range_projection,
    spectral_apply, sqrt_psd, HermitianEigen,
};
pub use tolerance::Tolerances;
pub use verify::{
    check_order_relation, check_pinv_formula, check_range_relations, check_spectral_gap,
    check_tplus_identities, verify_all, CheckResult, InputDescriptor, VerificationReport,
};
