use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::chain::{stokes_reduced_integral, u_substitution_integral, KFunction, TriangleChain};
use super::closed::difference_formula;
use crate::operator::{apply_operator_numeric, build_jp_operator, DerivativeScheme};
use crate::periods::{Curve, ModelConfig};
use crate::quadrature::QuadratureConfig;
use crate::{Result, C64};

/// `|a − b| / max(|a|, |b|)` for every pair of the four chain values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub operator_stokes: f64,
    pub operator_usub: f64,
    pub operator_closed: f64,
    pub stokes_usub: f64,
    pub stokes_closed: f64,
    pub usub_closed: f64,
}

fn rel(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale > 0.0 {
        (a - b).norm() / scale
    } else {
        0.0
    }
}

impl Residuals {
    pub fn from_values(a: C64, b: C64, c: C64, d: C64) -> Self {
        Residuals {
            operator_stokes: rel(a, b),
            operator_usub: rel(a, c),
            operator_closed: rel(a, d),
            stokes_usub: rel(b, c),
            stokes_closed: rel(b, d),
            usub_closed: rel(c, d),
        }
    }
}

/// The four values of the reduction chain for one `(j, l)` and component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityChainReport {
    pub j: usize,
    pub l: i64,
    pub component: Curve,
    /// Operator applied to `(1−ζ^A)·K` by contour differentiation.
    pub value_operator_applied: C64,
    pub value_stokes: C64,
    pub value_usub: C64,
    pub value_closed_form: C64,
    pub residuals: Residuals,
    /// Wall-clock seconds per stage; not serialized, so reports stay reproducible.
    #[serde(skip)]
    pub runtimes: [f64; 4],
}

/// Evaluate the chain for the difference `ξ_{c_j}^{(l)} − ξ_{c_1}^{(0)}`:
/// operator on the triangle integral, the Stokes boundary integral, its
/// `u`-substituted form, and the closed difference formula.
pub fn difference_chain_check(
    config: &ModelConfig,
    j: usize,
    l: i64,
    component: Curve,
    quad: &QuadratureConfig,
    scheme: &DerivativeScheme,
) -> Result<EqualityChainReport> {
    quad.validate()?;
    let chain = TriangleChain::new(config, j, l, 0)?;
    let factor = 1.0 - config.zeta_pow(config.exponent() as i64);
    let mut times = [0.0; 4];
    let mut timed = |k: usize, start: Instant| times[k] = secs(start.elapsed());

    let t = Instant::now();
    let kf = KFunction::new(&chain, component, &quad.rule());
    let op = build_jp_operator(config.c(), &config.operator_parameters(component))?;
    let app = apply_operator_numeric(
        &op,
        |z| kf.eval(z),
        config.lambda(component),
        scheme,
        chain.clearance(component),
    )?;
    let a = factor * app.value;
    timed(0, t);

    let t = Instant::now();
    let b = factor * stokes_reduced_integral(&chain, component, quad)?.value;
    timed(1, t);
    let t = Instant::now();
    let c = factor * u_substitution_integral(&chain, component, quad)?.value;
    timed(2, t);
    let t = Instant::now();
    let d = difference_formula(config, j, l, 0, component)?;
    timed(3, t);

    Ok(EqualityChainReport {
        j,
        l,
        component,
        value_operator_applied: a,
        value_stokes: b,
        value_usub: c,
        value_closed_form: d,
        residuals: Residuals::from_values(a, b, c, d),
        runtimes: times,
    })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}
