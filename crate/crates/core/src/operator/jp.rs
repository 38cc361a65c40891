use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{binomial_general, Coefficient, Poly, Rational};
use crate::{Error, Result, C64};

/// Polynomial coefficients of an order-`n` Jordan-Pochhammer operator.
///
/// `coefficients()[0]` is `q0` (the leading coefficient) and
/// `coefficients()[k]` is `p_k`, multiplying the `(n-k)`-th derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct JPOperator<T> {
    r: Vec<Rational>,
    poles: Vec<T>,
    q0: Poly<T>,
    q1: Poly<T>,
    coefficients: Vec<Poly<T>>,
}

pub type ExactOperator = JPOperator<Rational>;
pub type NumericOperator = JPOperator<C64>;

/// Build the operator for poles `c_1..c_n` and parameters `r_0..r_n`.
///
/// `q0 = ∏(λ − c_j)`, `q1 = q0·Σ r_j/(λ − c_j)` and
/// `p_k = C(n+r0−2, k)·q0^(k) + C(n+r0−2, k−1)·q1^(k−1)`.
pub fn build_jp_operator<T: Coefficient>(poles: &[T], r: &[Rational]) -> Result<JPOperator<T>> {
    let n = poles.len();
    if n == 0 {
        return Err(Error::InvalidArgument("operator needs at least one pole".into()));
    }
    if r.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} parameters r_0..r_n, got {}",
            n + 1,
            r.len()
        )));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poles[i].coincides(&poles[j]) {
                return Err(Error::DuplicatePoles(i + 1, j + 1));
            }
        }
    }

    let q0 = Poly::from_roots(poles);
    let q1 = potential_numerator(poles, &r[1..]);

    let top = Rational::from_integer(BigInt::from(n as i64 - 2)) + &r[0];
    let mut coefficients = Vec::with_capacity(n + 1);
    coefficients.push(q0.clone());
    for k in 1..=n {
        let b0 = T::from_rational(&binomial_general(&top, k as i64));
        let b1 = T::from_rational(&binomial_general(&top, k as i64 - 1));
        let pk = q0.derivative(k).scale(&b0).add(&q1.derivative(k - 1).scale(&b1));
        coefficients.push(pk);
    }

    Ok(JPOperator {
        r: r.to_vec(),
        poles: poles.to_vec(),
        q0,
        q1,
        coefficients,
    })
}

/// `Σ_j r_j ∏_{k≠j}(λ − c_k)`, i.e. `q0·Σ r_j/(λ − c_j)` as a polynomial.
pub(crate) fn potential_numerator<T: Coefficient>(poles: &[T], r: &[Rational]) -> Poly<T> {
    let mut acc = Poly::zero();
    for (j, rj) in r.iter().enumerate() {
        if rj.is_zero() {
            continue;
        }
        let others: Vec<T> = poles
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, c)| c.clone())
            .collect();
        acc = acc.add(&Poly::from_roots(&others).scale(&T::from_rational(rj)));
    }
    acc
}

impl<T: Coefficient> JPOperator<T> {
    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn parameters(&self) -> &[Rational] {
        &self.r
    }

    pub fn poles(&self) -> &[T] {
        &self.poles
    }

    pub fn q0(&self) -> &Poly<T> {
        &self.q0
    }

    pub fn q1(&self) -> &Poly<T> {
        &self.q1
    }

    pub fn coefficients(&self) -> &[Poly<T>] {
        &self.coefficients
    }

    /// `p_k` for `k = 1..=n`.
    pub fn p(&self, k: usize) -> &Poly<T> {
        &self.coefficients[k]
    }

    /// Replace `p_k` (or `q0` for `k = 0`). Exists to exercise the verifiers
    /// against deliberately corrupted operators.
    pub fn with_coefficient(mut self, k: usize, poly: Poly<T>) -> Self {
        self.coefficients[k] = poly;
        self
    }

    /// Coefficient values `[q0(λ), p1(λ), …, pn(λ)]`.
    pub fn coefficient_values(&self, lambda: C64) -> Vec<C64> {
        self.coefficients.iter().map(|p| p.eval_complex(lambda)).collect()
    }
}

impl ExactOperator {
    pub fn to_numeric(&self) -> NumericOperator {
        let conv = |p: &Poly<Rational>| p.map(C64::from_rational);
        JPOperator {
            r: self.r.clone(),
            poles: self.poles.iter().map(C64::from_rational).collect(),
            q0: conv(&self.q0),
            q1: conv(&self.q1),
            coefficients: self.coefficients.iter().map(conv).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use num_traits::One;

    fn poly(cs: &[(i64, i64)]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    #[test]
    fn order_two_example() {
        let c = [ratio(0, 1), ratio(1, 1)];
        let r = vec![ratio(2, 5); 3];
        let op = build_jp_operator(&c, &r).unwrap();
        assert_eq!(op.q0(), &poly(&[(0, 1), (-1, 1), (1, 1)]));
        assert_eq!(op.q1(), &poly(&[(-2, 5), (4, 5)]));
        assert_eq!(op.p(1), &poly(&[(-4, 5), (8, 5)]));
        assert_eq!(op.p(2), &poly(&[(2, 25)]));
    }

    #[test]
    fn zero_parameters() {
        let c = [ratio(0, 1), ratio(1, 1)];
        let op = build_jp_operator(&c, &vec![Rational::zero(); 3]).unwrap();
        assert!(op.q1().is_zero());
        assert!(op.p(1).is_zero());
        assert!(op.p(2).is_zero());
    }

    #[test]
    fn q0_is_monic_of_degree_n_and_pk_degrees_bounded() {
        let c = [ratio(0, 1), ratio(1, 1), ratio(-1, 1), ratio(3, 2)];
        let r: Vec<_> = (0..5).map(|k| ratio(k + 1, 7)).collect();
        let op = build_jp_operator(&c, &r).unwrap();
        assert_eq!(op.q0().degree(), Some(4));
        assert_eq!(op.q0().coeff(4), Rational::one());
        for k in 1..=4 {
            assert!(op.p(k).degree().map_or(true, |d| d <= 4 - k), "p_{k}");
        }
    }

    #[test]
    fn duplicate_poles_rejected() {
        let c = [ratio(1, 2), ratio(1, 2)];
        let err = build_jp_operator(&c, &vec![ratio(1, 2); 3]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoles(1, 2));
        let cz = [C64::new(0.0, 1.0), C64::new(0.0, 1.0)];
        assert!(build_jp_operator(&cz, &vec![ratio(1, 2); 3]).is_err());
    }

    #[test]
    fn exact_and_numeric_backends_agree() {
        let c = [ratio(0, 1), ratio(1, 1), ratio(-1, 1)];
        let r = vec![ratio(1, 2); 4];
        let exact = build_jp_operator(&c, &r).unwrap();
        let cf: Vec<C64> = c.iter().map(C64::from_rational).collect();
        let numeric = build_jp_operator(&cf, &r).unwrap();
        let converted = exact.to_numeric();
        for lambda in [C64::new(0.3, 0.7), C64::new(-2.0, 0.1), C64::new(5.0, -3.0)] {
            let a = converted.coefficient_values(lambda);
            let b = numeric.coefficient_values(lambda);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() <= 1e-12 * x.norm().max(1e-300), "{x} vs {y}");
            }
        }
    }

    mod properties {
        use super::*;
        use crate::algebra::ratio;
        use proptest::prelude::*;

        fn setup() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
            (2usize..5).prop_flat_map(|n| {
                (
                    prop::collection::btree_set(-12i64..12, n).prop_map(|s| s.into_iter().map(|v| ratio(v, 3)).collect()),
                    prop::collection::vec((1i64..12, 2i64..13), n + 1)
                        .prop_map(|v| v.into_iter().map(|(p, q)| ratio(p, q)).collect()),
                )
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn exact_then_evaluated_matches_float_built((c, r) in setup(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
                let exact = build_jp_operator(&c, &r).unwrap();
                let cf: Vec<C64> = c.iter().map(C64::from_rational).collect();
                let numeric = build_jp_operator(&cf, &r).unwrap();
                let lambda = C64::new(re, im);
                let a = exact.to_numeric().coefficient_values(lambda);
                let b = numeric.coefficient_values(lambda);
                let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).norm() <= 1e-12 * scale);
                }
            }

            #[test]
            fn lemma_holds_for_random_parameters((c, r) in setup()) {
                prop_assert!(crate::operator::lemma_identity_check(&c, &r).unwrap().holds);
            }
        }
    }
}
