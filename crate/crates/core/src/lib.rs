//! Exact decision procedures for semisimplicity and simplicity of
//! finite-dimensional algebras with no identity assumed on the product.
//!
//! An algebra is given by structure constants over ℚ or a prime field. The
//! crate computes division-basis predicates on the given basis, decomposes the
//! algebra into ideals by connecting basis elements, and ships brute-force
//! oracles (exhaustive ideal and basis enumeration over small prime fields)
//! that check every verdict from the definitions.

pub mod algebra;
pub mod decomposition;
pub mod division;
pub mod exec;
pub mod field;
pub mod linalg;
pub mod oracle;

pub use algebra::{AlgebraError, AlgebraPresentation, RawPresentation, RawProduct};
pub use decomposition::{
    check_semisimple_via_theorem, check_simple_via_corollary, connection_levels, decompose, BasisMode,
    ConnectionLevels, DecompositionReport, Options, SimpleVerdict, Verdict,
};
pub use division::{
    basis_profile, check_i_division, check_semi_division, check_weak_division, classify_basis, BasisProfile, CheckMode,
    DivisionKind, DivisionVerdict, Status, Witness,
};
pub use exec::Execution;
pub use field::{Field, FieldError, Prime, Scalar};
pub use linalg::{LinalgError, Matrix, Subspace, Vector};
pub use oracle::{Ceilings, OracleError};
