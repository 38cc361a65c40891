use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jp::NumericOperator;
use crate::{Error, Result, C64};

/// Contour differentiation settings: samples on the circle of radius
/// `radius_fraction × clearance` about the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DerivativeScheme {
    pub radius_fraction: f64,
    pub samples: usize,
}

impl Default for DerivativeScheme {
    fn default() -> Self {
        DerivativeScheme {
            radius_fraction: 0.25,
            samples: 32,
        }
    }
}

impl DerivativeScheme {
    pub fn validate(&self, max_order: usize) -> Result<()> {
        if !(self.radius_fraction > 0.0 && self.radius_fraction <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "derivative radius fraction must lie in (0, 1/2] (got {})",
                self.radius_fraction
            )));
        }
        if self.samples < 4 * (max_order + 1) {
            return Err(Error::InvalidConfig(format!(
                "derivative scheme needs at least {} circle samples for order {} (got {})",
                4 * (max_order + 1),
                max_order,
                self.samples
            )));
        }
        Ok(())
    }
}

/// `f^(k)(λ)` for `k = 0..=max_order` from the trapezoidal discretization of
/// `k!/(2πi) ∮ f(z)(z−λ)^{−k−1} dz` on a circle about `λ`.
///
/// Samples are evaluated in parallel; the sums run in a fixed order.
pub fn cauchy_derivatives<F>(
    f: F,
    lambda: C64,
    max_order: usize,
    scheme: &DerivativeScheme,
    clearance: f64,
) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    scheme.validate(max_order)?;
    if !(clearance > 0.0 && clearance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "clearance must be positive and finite (got {clearance})"
        )));
    }
    let m = scheme.samples;
    let rho = scheme.radius_fraction * clearance;
    let values: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let z = lambda + C64::from_polar(rho, TAU * j as f64 / m as f64);
            let v = f(z)?;
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteSample(format!("{z}")))
            }
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(max_order + 1);
    let mut factorial = 1.0;
    for k in 0..=max_order {
        if k > 0 {
            factorial *= k as f64;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            // e^{-2πi jk/m}, with the index reduced first to keep the angle small
            let phase = C64::from_polar(1.0, -TAU * ((j * k) % m) as f64 / m as f64);
            acc += v * phase;
        }
        out.push(acc * factorial / (m as f64 * rho.powi(k as i32)));
    }
    Ok(out)
}

/// The terms `coefficient_k(λ) · f^(n−k)(λ)` and their sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorApplication {
    pub value: C64,
    pub terms: Vec<C64>,
}

impl OperatorApplication {
    /// `|L f| / max_k |term_k|`.
    pub fn normalized_residual(&self) -> f64 {
        let scale = self.terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            self.value.norm() / scale
        } else {
            self.value.norm()
        }
    }
}

/// `q0(λ) f^(n)(λ) + Σ_k p_k(λ) f^(n−k)(λ)` with contour derivatives.
pub fn apply_operator_numeric<F>(
    op: &NumericOperator,
    f: F,
    lambda: C64,
    scheme: &DerivativeScheme,
    clearance: f64,
) -> Result<OperatorApplication>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let n = op.order();
    let derivs = cauchy_derivatives(f, lambda, n, scheme, clearance)?;
    let coeffs = op.coefficient_values(lambda);
    Ok(combine(&coeffs, &derivs))
}

/// Combine coefficient values `[q0, p1, …, pn]` with derivatives `[f, f', …, f^(n)]`.
pub(crate) fn combine(coeffs: &[C64], derivs: &[C64]) -> OperatorApplication {
    let n = coeffs.len() - 1;
    let terms: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * derivs[n - k])
        .collect();
    let value = terms.iter().sum();
    OperatorApplication { value, terms }
}
