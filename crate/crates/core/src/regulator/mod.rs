//! Regulator double integrals over the triangle `{0 < s₂ ≤ s₁ < 1}` and the
//! chain of reductions of their images under the Jordan-Pochhammer operator.

mod chain;
mod closed;
mod report;

pub use chain::{
    double_integral_k, stokes_reduced_integral, u_substitution_integral, KFunction, Ordering,
    TriangleChain,
};
pub use closed::{closed_form_rhs, difference_formula, nu_pairing, NuPairing};
pub use report::{difference_chain_check, EqualityChainReport, Residuals};
