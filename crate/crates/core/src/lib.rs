//! Dirichlet L-values at s = 1, computed by two independent methods with
//! rigorous error radii, plus a verification harness for the explicit
//! identities and upper bounds those values satisfy.
//!
//! Module map:
//! - [`arith`]: factorization, multiplicative functions, compensated
//!   harmonic and Mertens sums.
//! - [`chargroup`]: the unit group mod q, Dirichlet characters, partial
//!   character sums and their exact suprema.
//! - [`specfun`]: digamma on the positive reals with a priori error bounds.
//! - [`lfun`]: L(1, chi) via the finite digamma formula and via truncated
//!   series, cross-validated against each other.
//! - [`bounds`]: explicit bound expressions, per-modulus verification
//!   reports, and the primorial trend study.
//!
//! Everything here is a pure function of its inputs; constructed values are
//! immutable and safe to share across threads.

#![allow(clippy::manual_is_multiple_of)]

pub mod arith;
pub mod bounds;
pub mod chargroup;
pub mod error;
pub mod lfun;
pub mod specfun;

pub use arith::{factorize, Factorization, EULER_GAMMA};
pub use bounds::{primorial_study, verify_modulus, BoundReport, PrimorialRow};
pub use chargroup::{CharacterGroup, DirichletCharacter};
pub use error::{Error, Result};
pub use lfun::{
    l1_cross_validated, l1_digamma, l1_truncated, max_l1_over_characters, LValueEstimate, Method,
};
pub use specfun::{digamma, DigammaRow, DigammaValue};
