use serde::{Deserialize, Serialize};

use super::config::{Curve, ModelConfig};
use super::integral::PeriodFunction;
use crate::algebra::Rational;
use crate::operator::{apply_operator_numeric, build_jp_operator, DerivativeScheme};
use crate::paths::Path;
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result, C64};

/// The operator applied to a period function at one base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnihilationReport {
    pub lambda: C64,
    pub period: C64,
    pub value: C64,
    pub terms: Vec<C64>,
    /// `|L P| / max_k |term_k|`
    pub residual: f64,
}

/// Fails with `BranchNotClosed` unless `y` returns to its start value
/// around `cycle`.
pub fn check_closed_monodromy(period: &PeriodFunction, lambda: C64, exponent: i64) -> Result<()> {
    let path = period.path();
    if !path.is_closed() {
        return Err(Error::BranchNotClosed("cycle is not a closed path".into()));
    }
    let lt = period.lambda_trace(lambda)?;
    let mut factor = C64::new(1.0, 0.0);
    for t in period.c_traces().iter().chain(std::iter::once(&lt)) {
        let ratio = t.end_value()? / t.start_value()?;
        factor *= ratio.powi(exponent as i32);
    }
    if (factor - 1.0).norm() > 1e-9 {
        return Err(Error::BranchNotClosed(format!(
            "monodromy factor {factor} along the cycle"
        )));
    }
    Ok(())
}

/// Normalized residual of the order-`n` operator with `r_i = e/N` applied to
/// the period of `dx/y` over a closed, branch-neutral cycle.
pub fn annihilation_residual(
    config: &ModelConfig,
    curve: Curve,
    cycle: &Path,
    scheme: &DerivativeScheme,
    quad: &QuadratureConfig,
) -> Result<AnnihilationReport> {
    annihilation_residual_with_parameters(
        config,
        curve,
        cycle,
        &config.operator_parameters(curve),
        scheme,
        quad,
    )
}

/// As [`annihilation_residual`] with explicit operator parameters `r_0..r_n`.
pub fn annihilation_residual_with_parameters(
    config: &ModelConfig,
    curve: Curve,
    cycle: &Path,
    r: &[Rational],
    scheme: &DerivativeScheme,
    quad: &QuadratureConfig,
) -> Result<AnnihilationReport> {
    let lambda = config.lambda(curve);
    let period = PeriodFunction::new(config, curve, cycle.clone(), *quad)?;
    let exponent = config.curve_exponent(curve) as i64;
    check_closed_monodromy(&period, lambda, exponent)?;
    let op = build_jp_operator(config.c(), r)?;
    let clearance = clearance(config, lambda, cycle);
    let app = apply_operator_numeric(&op, |z| period.value(z), lambda, scheme, clearance)?;
    let residual = app.normalized_residual();
    Ok(AnnihilationReport {
        lambda,
        period: period.value(lambda)?,
        value: app.value,
        terms: app.terms,
        residual,
    })
}

/// Residuals of both operators applied to `P(λ₁)·Q(λ₂)`, with `P` and `Q`
/// periods of the two curves over `cycle1`, `cycle2`.
pub fn product_annihilation_residuals(
    config: &ModelConfig,
    cycle1: &Path,
    cycle2: &Path,
    scheme: &DerivativeScheme,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let p = PeriodFunction::new(config, Curve::First, cycle1.clone(), *quad)?;
    let q = PeriodFunction::new(config, Curve::Second, cycle2.clone(), *quad)?;
    check_closed_monodromy(&p, config.lambda1(), config.curve_exponent(Curve::First) as i64)?;
    check_closed_monodromy(&q, config.lambda2(), config.curve_exponent(Curve::Second) as i64)?;
    let (l1, l2) = (config.lambda1(), config.lambda2());
    let p0 = p.value(l1)?;
    let q0 = q.value(l2)?;

    let op1 = build_jp_operator(config.c(), &config.operator_parameters(Curve::First))?;
    let op2 = build_jp_operator(config.c(), &config.operator_parameters(Curve::Second))?;
    let a1 = apply_operator_numeric(
        &op1,
        |z| Ok(p.value(z)? * q0),
        l1,
        scheme,
        clearance(config, l1, cycle1),
    )?;
    let a2 = apply_operator_numeric(
        &op2,
        |z| Ok(p0 * q.value(z)?),
        l2,
        scheme,
        clearance(config, l2, cycle2),
    )?;
    Ok((a1.normalized_residual(), a2.normalized_residual()))
}

fn clearance(config: &ModelConfig, lambda: C64, cycle: &Path) -> f64 {
    config
        .c()
        .iter()
        .map(|cj| (cj - lambda).norm())
        .fold(cycle.distance_to(lambda), f64::min)
}
