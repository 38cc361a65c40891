use super::config::{principal_root, Curve, ModelConfig};
use crate::paths::{BranchTrace, Path};
use crate::quadrature::{integrate_estimate, Estimate, QuadratureConfig};
use crate::{Error, Result, C64};

/// `∫ γ'(s) ds / y(γ(s))` with `y = ∏_p (γ − p)^{e/N}` over the branch
/// points `p ∈ {λ, c_1..c_n}` of the chosen curve and `e` its exponent.
///
/// Every root starts on the principal branch at `γ(0)` (on the first piece
/// when `p = γ(0)`) and is continued along the path.
pub fn curve_form_integral(
    config: &ModelConfig,
    curve: Curve,
    path: &Path,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    PeriodFunction::new(config, curve, path.clone(), *quad)?.evaluate(config.lambda(curve))
}

/// `λ ↦ ∫ dx/y` along a fixed path, with the `c_j` branches traced once.
///
/// The root of `(γ(0) − λ)` follows `λ` by continuity from its principal
/// value at the reference `λ`.
#[derive(Clone, Debug)]
pub struct PeriodFunction {
    path: Path,
    order: u32,
    exponent: i64,
    c_traces: Vec<BranchTrace>,
    reference: C64,
    reference_seed: Option<C64>,
    quad: QuadratureConfig,
}

impl PeriodFunction {
    pub fn new(config: &ModelConfig, curve: Curve, path: Path, quad: QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        let order = config.cover_degree();
        let c_traces = config
            .c()
            .iter()
            .map(|&cj| BranchTrace::principal(&path, cj, order))
            .collect::<Result<Vec<_>>>()?;
        let reference = config.lambda(curve);
        let start = path.start();
        let reference_seed = if start == reference {
            None
        } else {
            Some(principal_root(start - reference, order))
        };
        Ok(PeriodFunction {
            path,
            order,
            exponent: config.curve_exponent(curve) as i64,
            c_traces,
            reference,
            reference_seed,
            quad,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn c_traces(&self) -> &[BranchTrace] {
        &self.c_traces
    }

    /// Trace of `(z − λ)^{1/N}` along the path.
    pub fn lambda_trace(&self, lambda: C64) -> Result<BranchTrace> {
        match self.reference_seed {
            Some(seed) => {
                let start = self.path.start();
                let moved = seed * principal_root((start - lambda) / (start - self.reference), self.order);
                BranchTrace::continue_branch(&self.path, lambda, self.order, moved)
            }
            None => BranchTrace::principal(&self.path, lambda, self.order),
        }
    }

    pub fn evaluate(&self, lambda: C64) -> Result<Estimate> {
        let lt = self.lambda_trace(lambda)?;
        let mut traces: Vec<&BranchTrace> = self.c_traces.iter().collect();
        traces.push(&lt);
        integrate_traces(&self.path, &traces, self.exponent, &self.quad)
    }

    pub fn value(&self, lambda: C64) -> Result<C64> {
        Ok(self.evaluate(lambda)?.value)
    }
}

/// `∫ γ' ∏_t root_t^{−e} ds`, piece by piece.
pub(crate) fn integrate_traces(
    path: &Path,
    traces: &[&BranchTrace],
    exponent: i64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    let mut value = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for (k, piece) in path.pieces().iter().enumerate() {
        let est = integrate_estimate(quad, piece.s0, piece.s1, |p| {
            let q = crate::paths::PathParam {
                piece: k,
                s: p.x,
                from_start: p.from_a,
                from_end: p.from_b,
            };
            let mut v = path.derivative(&q);
            for t in traces {
                v *= t.power(&q, -exponent);
            }
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::SingularityOnPath(format!("{}", path.point(&q))))
            }
        })?;
        value += est.value;
        error += est.error;
    }
    Estimate { value, error }.check(quad.tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{beta, lauricella_fd_euler};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn canonical() -> ModelConfig {
        ModelConfig::new(5, 2, vec![c(0.0, 0.0), c(1.0, 0.0)], c(-0.7, 0.3), c(1.9, -0.4)).unwrap()
    }

    #[test]
    fn straight_period_matches_euler_oracle() {
        let cfg = canonical();
        let path = Path::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let q = QuadratureConfig::default();
        let v = curve_form_integral(&cfg, Curve::First, &path, &q).unwrap();
        let lambda = cfg.lambda1();
        // principal branches at x = 0: (x−1)^{1/5} = e^{iπ/5}(1−x)^{1/5}
        let phase = C64::from_polar(1.0, -std::f64::consts::PI * 0.4);
        let pre = phase * (-lambda).powf(-0.4);
        let third = c(0.6, 0.0);
        let fd = lauricella_fd_euler(third, &[c(0.4, 0.0)], c(1.2, 0.0), &[1.0 / lambda], &q).unwrap();
        let expected = pre * beta(third, third) * fd.value;
        assert!((v.value - expected).norm() < 1e-9 * expected.norm());
    }

    #[test]
    fn reversed_path_negates_with_same_branches() {
        let cfg = canonical();
        let path = Path::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let q = QuadratureConfig::default();
        let f = PeriodFunction::new(&cfg, Curve::First, path.clone(), q).unwrap();
        let fwd = f.evaluate(cfg.lambda1()).unwrap().value;
        let lt = f.lambda_trace(cfg.lambda1()).unwrap().reversed();
        let cts: Vec<BranchTrace> = f.c_traces().iter().map(|t| t.reversed()).collect();
        let mut refs: Vec<&BranchTrace> = cts.iter().collect();
        refs.push(&lt);
        let back = integrate_traces(&path.reversed(), &refs, 2, &q).unwrap().value;
        assert!((fwd + back).norm() < 1e-12 * fwd.norm());
    }

    #[test]
    fn doubling_the_level_is_within_tolerance() {
        let cfg = canonical();
        let path = Path::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let q = QuadratureConfig::default();
        let v1 = curve_form_integral(&cfg, Curve::Second, &path, &q).unwrap();
        let v2 = curve_form_integral(&cfg, Curve::Second, &path, &q.with_level(q.level + 1)).unwrap();
        assert!((v1.value - v2.value).norm() <= q.tolerance * v1.value.norm());
    }
}
