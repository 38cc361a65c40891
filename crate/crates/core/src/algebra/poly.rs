use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{rational_to_f64, Rational};
use crate::C64;

/// Field of polynomial coefficients: exact rationals or double precision
/// complex numbers. Operators are built once, generically, over either.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(q: &Rational) -> Self;

    fn from_u64(k: u64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(k)))
    }

    /// Whether two coefficients should be treated as the same point.
    fn coincides(&self, other: &Self) -> bool;

    fn to_complex(&self) -> C64;
}

impl Coefficient for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn coincides(&self, other: &Self) -> bool {
        self == other
    }

    fn to_complex(&self) -> C64 {
        C64::new(rational_to_f64(self), 0.0)
    }
}

impl Coefficient for C64 {
    fn from_rational(q: &Rational) -> Self {
        C64::new(rational_to_f64(q), 0.0)
    }

    fn coincides(&self, other: &Self) -> bool {
        (self - other).norm() <= 1e-12 * (1.0 + self.norm().max(other.norm()))
    }

    fn to_complex(&self) -> C64 {
        *self
    }
}

/// Dense univariate polynomial, coefficients in ascending degree, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monic linear factor `x − root`.
    pub fn linear_factor(root: &T) -> Self {
        Poly::new(vec![-root.clone(), T::one()])
    }

    /// `∏ (x − r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(T::one()), |acc, r| acc.mul(&Poly::linear_factor(r)))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// The `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(k, a)| {
                let falling = ((k - order + 1)..=k).fold(1u64, |acc, m| acc * m as u64);
                a.clone() * T::from_u64(falling)
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    /// Evaluate at a complex point after mapping coefficients to `C64`.
    pub fn eval_complex(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, a| acc * x + a.to_complex())
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn from_roots_is_monic() {
        let p = Poly::from_roots(&[ratio(0, 1), ratio(1, 1), ratio(-3, 2)]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.coeff(3), Rational::one());
        assert_eq!(p.eval(&ratio(-3, 2)), Rational::zero());
    }

    #[test]
    fn derivative_of_cubic() {
        // x^3 - 2x + 5 -> 3x^2 - 2 -> 6x
        let p = Poly::new(vec![ratio(5, 1), ratio(-2, 1), ratio(0, 1), ratio(1, 1)]);
        assert_eq!(p.derivative(1), Poly::new(vec![ratio(-2, 1), ratio(0, 1), ratio(3, 1)]));
        assert_eq!(p.derivative(2), Poly::new(vec![ratio(0, 1), ratio(6, 1)]));
        assert!(p.derivative(4).is_zero());
    }

    #[test]
    fn complex_backend_matches_exact() {
        let exact = Poly::from_roots(&[ratio(1, 3), ratio(-2, 1)]);
        let numeric: Poly<C64> = exact.map(C64::from_rational);
        let x = C64::new(0.3, -1.1);
        let a = exact.eval_complex(x);
        let b = numeric.eval(&x);
        assert!((a - b).norm() < 1e-14);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
            prop::collection::vec((-9i64..9, 1i64..5), 0..5)
                .prop_map(|cs| Poly::new(cs.into_iter().map(|(p, q)| ratio(p, q)).collect()))
        }

        fn point() -> impl Strategy<Value = C64> {
            (0.0f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
        }

        fn close(a: C64, b: C64, scale: f64) -> bool {
            (a - b).norm() <= 1e-12 * scale.max(1e-300)
        }

        proptest! {
            #[test]
            fn ring_axioms(p in small_poly(), q in small_poly(), r in small_poly()) {
                prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
                prop_assert_eq!(p.mul(&q), q.mul(&p));
                prop_assert_eq!(p.add(&q), q.add(&p));
                prop_assert!(p.sub(&p).is_zero());
            }

            #[test]
            fn leibniz_rule(p in small_poly(), q in small_poly()) {
                let lhs = p.mul(&q).derivative(1);
                let rhs = p.mul(&q.derivative(1)).add(&q.mul(&p.derivative(1)));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn evaluation_is_a_ring_map(p in small_poly(), q in small_poly(), x in point()) {
                let (a, b) = (p.eval_complex(x), q.eval_complex(x));
                let scale = |f: &Poly<Rational>| {
                    f.coeffs().iter().enumerate().map(|(k, c)| crate::algebra::rational_to_f64(c).abs() * x.norm().powi(k as i32)).sum::<f64>()
                };
                prop_assert!(close(p.add(&q).eval_complex(x), a + b, scale(&p) + scale(&q)));
                prop_assert!(close(p.mul(&q).eval_complex(x), a * b, scale(&p) * scale(&q)));
            }
        }
    }
}
