use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; fall back to a scaled quotient
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn factorial(k: u32) -> Rational {
    (1..=k).fold(Rational::one(), |acc, m| acc * Rational::from_integer(BigInt::from(m)))
}

/// Rising factorial `α(α+1)⋯(α+k−1)`; the empty product for `k = 0`.
pub fn pochhammer(alpha: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = alpha.clone();
    for _ in 0..k {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Rising factorial for floating arguments.
pub fn pochhammer_f64(alpha: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (alpha + m as f64))
}

/// Generalized binomial `α(α−1)⋯(α−k+1)/k!`, zero for negative `k`.
pub fn binomial_general(alpha: &Rational, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    let mut term = alpha.clone();
    for m in 1..=k {
        acc *= &term;
        acc /= Rational::from_integer(BigInt::from(m));
        term -= Rational::one();
    }
    acc
}

/// Euler's totient, via trial-division factorization.
///
/// Panics if `n == 0`.
pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for positive integers");
    let mut m = n;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}
