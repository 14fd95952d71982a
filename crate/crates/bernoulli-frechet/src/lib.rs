//! Exact algebra for multivariate Bernoulli distributions with equal
//! one-dimensional margins.
//!
//! A joint distribution of d Bernoulli(p) variables with p = s/t is a
//! nonnegative vector over the 2^d sample points, and the equal-margin
//! constraint is linear with rational coefficients. This crate works that
//! structure exactly, over arbitrary-precision rationals throughout:
//!
//! - [`class`]: the margin polytope itself; pmf containers (dense and
//!   sparse), validation, and extremality certificates by rank.
//! - [`poly`]: multilinear polynomials on {0,1}^(d-1), the ideal of
//!   polynomials vanishing on a scaled hypercube's diagonal-flip points,
//!   and its generators.
//! - [`transform`]: the linear pairing between pmfs and ideal members,
//!   canonical preimages of polynomials, the pairing kernel, and the
//!   three-way classification of class members.
//! - [`enumerate`]: brute-force vertex enumeration over bounded supports
//!   and a randomized support-feasibility experiment.
//! - [`search`]: targeted vertex search driven by monomial selections, a
//!   resumable deterministic sweep, and kernel-direction exploration.
//! - [`convex`]: coordinate-sum distributions, stop-loss transforms,
//!   convex-order minima, and a closed-form minimal construction that
//!   scales to hundreds of dimensions.
//! - [`linalg`]: exact rational matrices, reduced row echelon form, rank,
//!   null spaces, and linear solving.
//!
//! Everything deterministic is reproducible bit for bit; the one randomized
//! operation takes an explicit seed.

pub mod class;
pub mod convex;
pub mod enumerate;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod search;
pub mod transform;

pub use class::{ExtremalCertificate, FrechetClass, Pmf, SupportPoint};
pub use convex::{
    min_convex_bernoulli, min_convex_sum, sum_extremals, sum_pmf, MinCxCase, MinCxConstruction,
    MinCxRoute, SumExtremal, SumPmf,
};
pub use error::{Error, Result};
pub use poly::{Monomial, MultilinearPoly};
pub use rat::Rat;
pub use transform::PmfType;
