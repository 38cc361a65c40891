//! Numerical and exact machinery for Jordan-Pochhammer operators acting on
//! period integrals and regulator double integrals of cyclic covers of the
//! projective line.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: exact rationals, generalized binomials, uni/bivariate polynomials.
//! - [`operator`]: the Jordan-Pochhammer operator, its potential identity, and
//!   contour-based differentiation.
//! - [`paths`]: piecewise paths, continuous argument tracking and the
//!   path constructions used by the integrals.
//! - [`quadrature`]: double-exponential and Gauss-Legendre rules.
//! - [`periods`]: model configuration, curve period integrals and Lauricella `F_D`.
//! - [`regulator`]: the triangle double integrals and the equality chain for
//!   their images under the operator.
//! - [`rank`]: sample matrices of the closed forms and numerical rank reports.

pub mod algebra;
pub mod error;
pub mod operator;
pub mod paths;
pub mod periods;
pub mod quadrature;
pub mod rank;
pub mod regulator;

pub use error::{Error, Result};

/// Double precision complex numbers used throughout the numeric layer.
pub type C64 = num_complex::Complex64;
