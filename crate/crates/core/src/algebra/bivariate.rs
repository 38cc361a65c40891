use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{rational_to_f64, Rational};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    Lambda,
}

/// Sparse polynomial in `x` and `λ` with exact rational coefficients.
///
/// Keys are `(deg_x, deg_λ)`; zero coefficients are never stored, so two
/// polynomials are equal exactly when their maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, deg_x: u32, deg_lambda: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_x, deg_lambda), c);
        }
        BivariatePolynomial { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn lambda() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// Embed a univariate polynomial in the given variable.
    pub fn from_univariate(p: &Poly<Rational>, var: Variable) -> Self {
        let mut out = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let k = k as u32;
            let (dx, dl) = match var {
                Variable::X => (k, 0),
                Variable::Lambda => (0, k),
            };
            out.add_term((dx, dl), c.clone());
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, deg_x: u32, deg_lambda: u32) -> Rational {
        self.terms
            .get(&(deg_x, deg_lambda))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum degree in each variable, `None` for the zero polynomial.
    pub fn degree_bounds(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let dx = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let dl = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        Some((dx, dl))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((ax, al), a) in &self.terms {
            for ((bx, bl), b) in &other.terms {
                out.add_term((ax + bx, al + bl), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, a) in &self.terms {
            out.add_term(*k, a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn partial_derivative(&self, var: Variable, order: u32) -> Self {
        let mut out = Self::zero();
        for (&(dx, dl), c) in &self.terms {
            let d = match var {
                Variable::X => dx,
                Variable::Lambda => dl,
            };
            if d < order {
                continue;
            }
            let falling = ((d - order + 1)..=d).fold(BigInt::one(), |acc, m| acc * BigInt::from(m));
            let key = match var {
                Variable::X => (dx - order, dl),
                Variable::Lambda => (dx, dl - order),
            };
            out.add_term(key, c * Rational::from_integer(falling));
        }
        out
    }

    /// Evaluate at complex `(x, λ)` by nested Horner schemes, `λ` inner.
    pub fn evaluate(&self, x: C64, lambda: C64) -> C64 {
        let Some((max_x, _)) = self.degree_bounds() else {
            return C64::new(0.0, 0.0);
        };
        let mut by_x: Vec<Vec<(u32, C64)>> = vec![Vec::new(); max_x as usize + 1];
        for (&(dx, dl), c) in &self.terms {
            by_x[dx as usize].push((dl, C64::new(rational_to_f64(c), 0.0)));
        }
        let horner_lambda = |row: &Vec<(u32, C64)>| {
            let Some(top) = row.iter().map(|t| t.0).max() else {
                return C64::new(0.0, 0.0);
            };
            let mut dense = vec![C64::new(0.0, 0.0); top as usize + 1];
            for &(dl, c) in row {
                dense[dl as usize] = c;
            }
            dense.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * lambda + c)
        };
        by_x
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, row| acc * x + horner_lambda(row))
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dl), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if dx > 0 {
                write!(f, "*x^{dx}")?;
            }
            if dl > 0 {
                write!(f, "*l^{dl}")?;
            }
        }
        Ok(())
    }
}
