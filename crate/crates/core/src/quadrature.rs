//! Quadrature rules on finite intervals.
//!
//! The double-exponential (tanh-sinh) rule is the workhorse: every node is
//! reported together with its distances to both interval ends, computed
//! without cancellation, so integrands with algebraic endpoint singularities
//! can be evaluated accurately arbitrarily close to the singular end.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    DoubleExponential,
    GaussLegendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    /// Refinement level. Double exponential: step `2^-level` in the
    /// transformed variable. Gauss-Legendre: `2^(level+2)` nodes.
    pub level: u32,
    /// Target relative tolerance, checked against the difference between
    /// `level` and `level - 1`.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            scheme: Scheme::DoubleExponential,
            level: 6,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn new(scheme: Scheme, level: u32, tolerance: f64) -> Result<Self> {
        let cfg = QuadratureConfig {
            scheme,
            level,
            tolerance,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.level == 0 || self.level > 12 {
            return Err(Error::InvalidConfig(format!(
                "quadrature level must lie in 1..=12 (got {})",
                self.level
            )));
        }
        if !(self.tolerance >= 1e-13) {
            return Err(Error::InvalidConfig(format!(
                "quadrature tolerance must be at least 1e-13 (got {:e})",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn with_level(&self, level: u32) -> Self {
        QuadratureConfig { level, ..*self }
    }

    pub fn rule(&self) -> Rule {
        Rule::new(self.scheme, self.level)
    }

    /// The rule one level coarser, used for error estimates.
    pub fn coarse_rule(&self) -> Rule {
        Rule::new(self.scheme, self.level.saturating_sub(1).max(1))
    }
}

/// A node on the reference interval `[-1, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    /// `x + 1`
    pub left: f64,
    /// `1 - x`
    pub right: f64,
    pub weight: f64,
}

/// A node mapped to `[a, b]`.
#[derive(Clone, Copy, Debug)]
pub struct QuadPoint {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct Rule {
    nodes: Vec<Node>,
}

impl Rule {
    pub fn new(scheme: Scheme, level: u32) -> Self {
        match scheme {
            Scheme::DoubleExponential => Rule::tanh_sinh(level),
            Scheme::GaussLegendre => Rule::gauss_legendre(1usize << (level + 2)),
        }
    }

    /// Tanh-sinh rule with step `2^-level`, truncated once the node distance
    /// to the end underflows the double range.
    pub fn tanh_sinh(level: u32) -> Self {
        let h = 0.5f64.powi(level as i32);
        let mut half = Vec::new();
        let mut k = 0usize;
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            // 1 - tanh(u) = 2 / (1 + e^{2u}), free of cancellation
            let right = 2.0 / (1.0 + (2.0 * u).exp());
            let left = 2.0 - right;
            let cu = u.cosh();
            let weight = h * FRAC_PI_2 * t.cosh() / (cu * cu);
            if !(right > 1e-300) || !(weight > 0.0) {
                break;
            }
            half.push(Node {
                left,
                right,
                weight,
            });
            k += 1;
        }
        let mut nodes: Vec<Node> = half
            .iter()
            .skip(1)
            .rev()
            .map(|n| Node {
                left: n.right,
                right: n.left,
                weight: n.weight,
            })
            .collect();
        nodes.extend(half);
        Rule { nodes }
    }

    /// Gauss-Legendre rule with `n` nodes (Newton iteration on the
    /// three-term recurrence).
    pub fn gauss_legendre(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess for the i-th root, descending order
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5);
            let mut x = theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let weight = 2.0 / ((1.0 - x * x) * dp * dp);
            // 1 - x for x near 1 via sin^2 relation keeps endpoint distances accurate
            let right = 1.0 - x;
            let left = 1.0 + x;
            nodes.push(Node {
                left,
                right,
                weight,
            });
        }
        nodes.reverse();
        Rule { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes mapped to `[a, b]`, in ascending order.
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = QuadPoint> + '_ {
        let half = 0.5 * (b - a);
        self.nodes.iter().map(move |n| {
            let from_a = half * n.left;
            let from_b = half * n.right;
            let x = if from_a <= from_b { a + from_a } else { b - from_b };
            QuadPoint {
                x,
                from_a,
                from_b,
                weight: half * n.weight,
            }
        })
    }

    /// `∫_a^b f`, summed in node order.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<C64>
    where
        F: FnMut(&QuadPoint) -> Result<C64>,
    {
        let mut acc = C64::new(0.0, 0.0);
        for p in self.points(a, b) {
            acc += f(&p)? * p.weight;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A value with an error estimate from the coarser level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

impl Estimate {
    pub fn relative_error(&self) -> f64 {
        let scale = self.value.norm();
        if scale > 0.0 {
            self.error / scale
        } else {
            self.error
        }
    }

    /// Fails with `QuadratureNotConverged` if the relative error exceeds `tol`.
    pub fn check(self, tol: f64) -> Result<Self> {
        let rel = self.relative_error();
        if rel.is_finite() && rel <= tol {
            Ok(self)
        } else {
            Err(Error::QuadratureNotConverged {
                estimate: rel,
                tolerance: tol,
            })
        }
    }
}

/// `∫_a^b f` at the configured level with a coarse-level error estimate.
pub fn integrate_estimate<F>(cfg: &QuadratureConfig, a: f64, b: f64, mut f: F) -> Result<Estimate>
where
    F: FnMut(&QuadPoint) -> Result<C64>,
{
    let fine = cfg.rule().integrate(a, b, &mut f)?;
    let coarse = cfg.coarse_rule().integrate(a, b, &mut f)?;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn tanh_sinh_polynomial_and_exponential() {
        let rule = Rule::tanh_sinh(5);
        let v = rule.integrate(0.0, 2.0, |p| Ok(real(p.x * p.x))).unwrap();
        assert!((v.re - 8.0 / 3.0).abs() < 1e-14);
        let v = rule.integrate(-1.0, 1.0, |p| Ok(real(p.x.exp()))).unwrap();
        assert!((v.re - (1f64.exp() - (-1f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-4/5} (1-x)^{-3/5} dx = B(1/5, 2/5)
        let rule = Rule::tanh_sinh(6);
        let v = rule
            .integrate(0.0, 1.0, |p| Ok(real(p.from_a.powf(-0.8) * p.from_b.powf(-0.6))))
            .unwrap();
        // B(1/5, 2/5) = Γ(1/5)Γ(2/5)/Γ(3/5)
        let expected = 4.590843711998803 * 2.218159543757688 / 1.489192248812817;
        assert!((v.re - expected).abs() / expected < 1e-12, "{} vs {}", v.re, expected);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = Rule::gauss_legendre(16);
        let total: f64 = rule.nodes().iter().map(|n| n.weight).sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 31 is integrated exactly by 16 nodes
        let v = rule.integrate(0.0, 1.0, |p| Ok(real(p.x.powi(31)))).unwrap();
        assert!((v.re - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn coarse_levels_nest_and_estimate_shrinks() {
        let cfg = QuadratureConfig::default();
        let e = integrate_estimate(&cfg, 0.0, 1.0, |p| Ok(real(p.from_a.powf(-0.5)))).unwrap();
        assert!((e.value.re - 2.0).abs() < 1e-12);
        assert!(e.error < 1e-8);
        assert!(e.check(1e-8).is_ok());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(QuadratureConfig::new(Scheme::DoubleExponential, 0, 1e-10).is_err());
        assert!(QuadratureConfig::new(Scheme::DoubleExponential, 4, 1e-15).is_err());
        assert!(QuadratureConfig::new(Scheme::GaussLegendre, 4, 1e-10).is_ok());
    }
}
