//! Exact verification of the potential identity
//!
//! `Σ_k (r0)_{n−k} p_k(λ) (x−λ)^k
//!     = (r0)_{n−1} [ (n+r0−1) q0(x) + (x−λ) q1(x) − (x−λ) q0'(x) ]`
//!
//! as an equality of polynomials in `x` and `λ`. Dividing by
//! `(x−λ)^{r0+n} ∏(x−c_j)^{r_j}` turns it into
//! `L_λ[(x−λ)^{−r0} ∏(x−c_j)^{−r_j}] = ∂H/∂x`.

use num_bigint::BigInt;

use super::jp::{build_jp_operator, potential_numerator, ExactOperator};
use crate::algebra::{pochhammer, BivariatePolynomial, Poly, Rational, Variable};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub holds: bool,
    /// `LHS − RHS`; zero exactly when the identity holds.
    pub discrepancy: BivariatePolynomial,
}

/// Build the operator from `(c, r)` and check the identity.
pub fn lemma_identity_check(c: &[Rational], r: &[Rational]) -> Result<LemmaCheck> {
    let op = build_jp_operator(c, r)?;
    Ok(lemma_identity_check_operator(&op))
}

/// Check the identity for a given (possibly modified) operator. The right
/// hand side is rebuilt from the operator's poles and parameters alone.
pub fn lemma_identity_check_operator(op: &ExactOperator) -> LemmaCheck {
    let (lhs, rhs) = lemma_sides(op);
    let discrepancy = lhs.sub(&rhs);
    LemmaCheck {
        holds: discrepancy.is_zero(),
        discrepancy,
    }
}

/// Both sides of the identity as exact bivariate polynomials.
pub fn lemma_sides(op: &ExactOperator) -> (BivariatePolynomial, BivariatePolynomial) {
    let n = op.order() as u32;
    let r = op.parameters();
    let r0 = &r[0];
    let x_minus_lambda = BivariatePolynomial::x().sub(&BivariatePolynomial::lambda());

    let mut lhs = BivariatePolynomial::zero();
    for (k, pk) in op.coefficients().iter().enumerate() {
        let weight = pochhammer(r0, n - k as u32);
        let term = BivariatePolynomial::from_univariate(pk, Variable::Lambda)
            .mul(&x_minus_lambda.pow(k as u32))
            .scale(&weight);
        lhs = lhs.add(&term);
    }

    let q0: Poly<Rational> = Poly::from_roots(op.poles());
    let q1 = potential_numerator(op.poles(), &r[1..]);
    let q0x = BivariatePolynomial::from_univariate(&q0, Variable::X);
    let q1x = BivariatePolynomial::from_univariate(&q1, Variable::X);
    let dq0x = BivariatePolynomial::from_univariate(&q0.derivative(1), Variable::X);
    let shift = Rational::from_integer(BigInt::from(n as i64 - 1)) + r0;
    let inner = q0x
        .scale(&shift)
        .add(&x_minus_lambda.mul(&q1x.sub(&dq0x)));
    let rhs = inner.scale(&pochhammer(r0, n - 1));
    (lhs, rhs)
}
