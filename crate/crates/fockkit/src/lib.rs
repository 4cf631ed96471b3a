//! Exact-arithmetic toolkit for higher-level Fock spaces.
//!
//! The crate computes, over exact rationals and cyclotomic numbers:
//!
//! * level-`l` Fock-space index combinatorics (charged multipartitions,
//!   weighted-wedge bases, the block bijection between wedge tuples and
//!   `(alpha, nu)` pairs),
//! * the affine symmetric group acting on weights of `gl_m-hat` (window
//!   notation, Bruhat order, linkage/triangularity order at negative level),
//! * Kazhdan-Lusztig and parabolic Kazhdan-Lusztig polynomials with a
//!   persistent polynomial cache,
//! * canonical-basis expansions and decomposition matrices for the
//!   `v = -1` specialization, on both the Fock-space side and the
//!   highest-weight-category side,
//! * ordering data for rational Cherednik categories (theta function,
//!   linkage implications, pairing identities),
//! * a Dunkl-operator engine for the cyclotomic rational double affine
//!   Hecke algebra, with degree-bounded relation and Euler-grading checks.
//!
//! All arithmetic is exact: rationals are `num::rational::Ratio<i128>`,
//! cyclotomic numbers are represented modulo the cyclotomic polynomial.
//! No floating point is used anywhere.

pub mod affine;
pub mod bar_oracle;
pub mod category_o;
pub mod cherednik;
pub mod combinatorics;
pub mod fock;
pub mod kl;
pub mod rat;

pub use rat::Rat;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input fails a documented precondition (shape, range, fit).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A weight required to be regular for the block structure is not.
    #[error("weight is not nu-regular: {0}")]
    NotNuRegular(String),
    /// The requested parameter regime is outside the supported one.
    #[error("unsupported parameter regime: {0}")]
    Unsupported(String),
    /// A search exceeded its node budget.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A Coxeter-group element was required to be a minimal coset
    /// representative and is not.
    #[error("not a minimal coset representative: {0}")]
    NotMinimalCosetRep(String),
    /// An exact polynomial division left a remainder (internal invariant).
    #[error("internal non-divisibility: {0}")]
    InternalNonDivisible(String),
    /// An internal structural invariant failed (reported, never expected).
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Convenient result alias.
pub type Result<T> = std::result::Result<T, Error>;
