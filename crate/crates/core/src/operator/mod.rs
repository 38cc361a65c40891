//! The Jordan-Pochhammer operator
//! `L = q0 dⁿ/dλⁿ + p1 dⁿ⁻¹/dλⁿ⁻¹ + ⋯ + pn`, its potential identity, and its
//! numerical application to analytic functions of `λ`.

mod cauchy;
mod jp;
mod lemma;

pub use cauchy::{apply_operator_numeric, cauchy_derivatives, DerivativeScheme, OperatorApplication};
pub use jp::{build_jp_operator, ExactOperator, JPOperator, NumericOperator};
pub use lemma::{lemma_identity_check, lemma_identity_check_operator, lemma_sides, LemmaCheck};
