//! Exact arithmetic: rationals, Pochhammer and binomial symbols, and
//! polynomial rings in one and two variables.

mod bivariate;
mod poly;
mod rational;

pub use bivariate::{BivariatePolynomial, Variable};
pub use poly::{Coefficient, Poly};
pub use rational::{
    binomial_general, euler_totient, factorial, pochhammer, pochhammer_f64, rational_to_f64,
    ratio, Rational,
};
