//! Exact wronskian criterion for polynomial automorphisms.
//!
//! Given a polynomial map `F: Q^n -> Q^n` with constant nonzero Jacobian
//! determinant, the crate builds the Nambu derivations of `F`, evaluates the
//! reduced family of generalized wronskian determinants `a^k_{ij}`, and tests
//! each one for membership in the subalgebra `Q[F_1, ..., F_n]`. A map passes
//! exactly when it is a polynomial automorphism, in which case the inverse is
//! read off the same elimination basis.

pub mod criterion;
pub mod error;
pub mod groebner;
pub mod mapzoo;
pub mod nambu;
pub mod polymatrix;
pub mod polyring;

pub use criterion::{check_automorphism, CheckOptions, CriterionReport, Provenance, Verdict};
pub use error::{Error, Result};
pub use groebner::{Budget, MembershipResult};
pub use mapzoo::{format_map, parse_map, DruzkowskiSpec};
pub use nambu::{build_tables, DerivationTables, PolynomialMap};
pub use polymatrix::PolyMatrix;
pub use polyring::{parse_polynomial, parse_polynomial_in, Monomial, Polynomial, Rational};
