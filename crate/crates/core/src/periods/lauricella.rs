use super::config::{principal_root, Curve, ModelConfig};
use super::gamma::beta;
use crate::quadrature::{integrate_estimate, Estimate, QuadratureConfig};
use crate::{Error, Result, C64};

/// Hard cap on the total degree `|m|` summed by the series.
pub const SERIES_MAX_DEGREE: usize = 20_000;

const CONVERGENCE_MARGIN: f64 = 0.95;

/// `F_D(a; b; c; x) = Σ_m (a)_{|m|} ∏(b_i)_{m_i} x_i^{m_i} / ((c)_{|m|} ∏ m_i!)`.
///
/// Terms are grouped by total degree: the degree-`d` slice of the
/// `b, x` part is the `t^d` coefficient `h_d` of `∏(1 − x_i t)^{−b_i}`, which
/// obeys `(d+1) h_{d+1} = Σ_k h_{d−k} Σ_i b_i x_i^{k+1}`. Summation stops
/// once a majorant bound on the remaining tail is below `tol` relative.
pub fn lauricella_fd_series(a: C64, b: &[C64], c: C64, x: &[C64], tol: f64) -> Result<C64> {
    if b.len() != x.len() {
        return Err(Error::InvalidArgument(format!(
            "F_D needs as many b as x ({} vs {})",
            b.len(),
            x.len()
        )));
    }
    for (index, xi) in x.iter().enumerate() {
        if !(xi.norm() < CONVERGENCE_MARGIN) {
            return Err(Error::SeriesDiverges {
                index,
                modulus: xi.norm(),
            });
        }
    }
    if c.im == 0.0 && c.re <= 0.0 && c.re.fract() == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "c must not be a nonpositive integer (got {c})"
        )));
    }
    let rho = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let beta_sum: f64 = b.iter().map(|v| v.norm()).sum();

    // power sums s_k = Σ b_i x_i^{k+1}
    let mut xpow: Vec<C64> = x.to_vec();
    let mut s: Vec<C64> = Vec::new();
    let mut h: Vec<C64> = vec![C64::new(1.0, 0.0)];
    let mut ratio = C64::new(1.0, 0.0); // (a)_d / (c)_d
    let mut majorant = 1.0; // |(a)_d/(c)_d| (β)_d ρ^d / d!
    let mut sum = C64::new(1.0, 0.0);
    for d in 0..SERIES_MAX_DEGREE {
        s.push(b.iter().zip(&xpow).map(|(bi, p)| bi * p).sum());
        for (p, xi) in xpow.iter_mut().zip(x) {
            *p *= xi;
        }
        let mut next = C64::new(0.0, 0.0);
        for k in 0..=d {
            next += h[d - k] * s[k];
        }
        next /= (d + 1) as f64;
        h.push(next);
        let df = d as f64;
        ratio *= (a + df) / (c + df);
        majorant *= ((a + df) / (c + df)).norm() * (beta_sum + df) / (df + 1.0) * rho;
        sum += ratio * next;

        // bound on the majorant ratio for all later degrees
        let dn = df + 1.0;
        if dn > c.norm() {
            let growth = (1.0 + (a - c).norm() / (dn - c.norm()))
                * (1.0 + (beta_sum - 1.0).max(0.0) / (dn + 1.0))
                * rho;
            if growth < 1.0 {
                let tail = majorant * growth / (1.0 - growth);
                if tail <= tol * sum.norm().max(f64::MIN_POSITIVE) {
                    return Ok(sum);
                }
            }
        }
        if rho == 0.0 || majorant == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::MaxTermsExceeded(SERIES_MAX_DEGREE))
}

/// `(1/B(a, c−a)) ∫₀¹ u^{a−1}(1−u)^{c−a−1} ∏(1 − x_i u)^{−b_i} du` by
/// double-exponential quadrature.
pub fn lauricella_fd_euler(
    a: C64,
    b: &[C64],
    c: C64,
    x: &[C64],
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    quad.validate()?;
    if b.len() != x.len() {
        return Err(Error::InvalidArgument(format!(
            "F_D needs as many b as x ({} vs {})",
            b.len(),
            x.len()
        )));
    }
    if !(a.re > 0.0 && (c - a).re > 0.0) {
        return Err(Error::InvalidArgument(
            "Euler representation needs Re(a) > 0 and Re(c − a) > 0".into(),
        ));
    }
    if let Some(xi) = x.iter().find(|v| v.im == 0.0 && v.re >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "x = {xi} lies on the cut [1, ∞)"
        )));
    }
    let e1 = a - 1.0;
    let e2 = c - a - 1.0;
    let est = integrate_estimate(quad, 0.0, 1.0, |p| {
        let mut v = (e1 * p.from_a.ln()).exp() * (e2 * p.from_b.ln()).exp();
        for (bi, xi) in b.iter().zip(x) {
            v *= (1.0 - xi * p.x).powc(-bi);
        }
        Ok(v)
    })?;
    let norm = beta(a, c - a);
    Estimate {
        value: est.value / norm,
        error: est.error / norm.norm(),
    }
    .check(quad.tolerance)
}

/// Lauricella data for the period of `dx/y` along the straight segment from
/// `c_1` to `c_2`: the period equals `prefactor · B(a, c−a) · F_D(a; b; c; x)`
/// with every root on the principal branch at `c_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentPeriodFd {
    pub prefactor: C64,
    pub a: C64,
    pub b: Vec<C64>,
    pub c: C64,
    pub x: Vec<C64>,
}

impl SegmentPeriodFd {
    /// Substituting `x = c_1 + (c_2 − c_1)u` leaves `u^{−r}(1−u)^{−r}` and one
    /// factor `(1 − x_p u)^{−r}` for each remaining branch point `p`, where
    /// `x_p = (c_2 − c_1)/(p − c_1)`.
    pub fn new(config: &ModelConfig, curve: Curve) -> Self {
        let big = config.cover_degree();
        let e = config.curve_exponent(curve) as i32;
        let r = e as f64 / big as f64;
        let (c1, c2) = (config.c()[0], config.c()[1]);
        let h = c2 - c1;
        let others: Vec<C64> = std::iter::once(config.lambda(curve))
            .chain(config.c()[2..].iter().copied())
            .collect();
        let mut prefactor = h * principal_root(h, big).powi(-e) * principal_root(c1 - c2, big).powi(-e);
        for p in &others {
            prefactor *= principal_root(c1 - p, big).powi(-e);
        }
        SegmentPeriodFd {
            prefactor,
            a: C64::new(1.0 - r, 0.0),
            b: vec![C64::new(r, 0.0); others.len()],
            c: C64::new(2.0 - 2.0 * r, 0.0),
            x: others.iter().map(|p| h / (p - c1)).collect(),
        }
    }

    fn scale(&self) -> C64 {
        self.prefactor * beta(self.a, self.c - self.a)
    }

    pub fn euler(&self, quad: &QuadratureConfig) -> Result<Estimate> {
        let fd = lauricella_fd_euler(self.a, &self.b, self.c, &self.x, quad)?;
        let k = self.scale();
        Ok(Estimate {
            value: k * fd.value,
            error: k.norm() * fd.error,
        })
    }

    /// Series evaluation; fails with `SeriesDiverges` unless every `|x_p| < 0.95`.
    pub fn series(&self, tol: f64) -> Result<C64> {
        Ok(self.scale() * lauricella_fd_series(self.a, &self.b, self.c, &self.x, tol)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    /// Direct multi-index sum over a box, for two variables.
    fn brute_two(a: C64, b: [C64; 2], c: C64, x: [C64; 2], m: usize) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        let mut t1 = C64::new(1.0, 0.0); // (b1)_i x1^i / i!
        for i in 0..m {
            let mut t2 = C64::new(1.0, 0.0);
            for j in 0..m {
                let mut ac = C64::new(1.0, 0.0);
                for k in 0..(i + j) {
                    ac *= (a + k as f64) / (c + k as f64);
                }
                total += ac * t1 * t2;
                t2 *= (b[1] + j as f64) * x[1] / (j as f64 + 1.0);
            }
            t1 *= (b[0] + i as f64) * x[0] / (i as f64 + 1.0);
        }
        total
    }

    #[test]
    fn zero_argument_gives_one() {
        let v = lauricella_fd_series(r(0.4), &[r(0.4), r(0.4)], r(1.2), &[r(0.0), r(0.0)], 1e-15)
            .unwrap();
        assert_eq!(v, r(1.0));
        let q = QuadratureConfig::default();
        let v = lauricella_fd_euler(r(0.4), &[r(0.4)], r(1.2), &[r(0.0)], &q).unwrap();
        assert!((v.value - r(1.0)).norm() < 1e-12);
        let v = lauricella_fd_euler(r(0.4), &[r(0.0), r(0.0)], r(1.2), &[r(0.3), r(-2.0)], &q)
            .unwrap();
        assert!((v.value - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn series_matches_direct_double_sum() {
        let a = C64::new(0.4, 0.1);
        let b = [r(0.4), C64::new(0.7, -0.2)];
        let c = r(1.3);
        let x = [C64::new(0.2, 0.1), C64::new(-0.3, 0.05)];
        let direct = brute_two(a, b, c, x, 80);
        let v = lauricella_fd_series(a, &b, c, &x, 1e-15).unwrap();
        assert!((v - direct).norm() < 1e-13);
    }

    #[test]
    fn permutation_symmetry() {
        let a = r(0.4);
        let b = [r(0.4), r(0.25), r(0.6)];
        let x = [C64::new(0.3, 0.2), r(-0.5), C64::new(0.1, -0.7)];
        let v1 = lauricella_fd_series(a, &b, r(1.2), &x, 1e-15).unwrap();
        let v2 = lauricella_fd_series(a, &[b[2], b[0], b[1]], r(1.2), &[x[2], x[0], x[1]], 1e-15)
            .unwrap();
        assert!((v1 - v2).norm() < 1e-13);
    }

    #[test]
    fn divergence_and_bad_c() {
        let err = lauricella_fd_series(r(0.4), &[r(0.4)], r(1.2), &[r(0.96)], 1e-12).unwrap_err();
        assert!(matches!(err, Error::SeriesDiverges { index: 0, .. }));
        assert!(lauricella_fd_series(r(0.4), &[r(0.4)], r(-2.0), &[r(0.1)], 1e-12).is_err());
    }

    #[test]
    fn series_and_euler_agree_on_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let q = QuadratureConfig::default();
        for _ in 0..10 {
            let x: Vec<C64> = (0..2)
                .map(|_| C64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-3.0..3.0)))
                .collect();
            let b = [r(0.4), r(0.4)];
            let s = lauricella_fd_series(r(0.4), &b, r(1.2), &x, 1e-15).unwrap();
            let e = lauricella_fd_euler(r(0.4), &b, r(1.2), &x, &q).unwrap();
            assert!((s - e.value).norm() < 1e-10 * s.norm(), "{x:?}");
        }
    }

    #[test]
    fn segment_period_matches_direct_quadrature() {
        let z = |re, im| C64::new(re, im);
        let q = QuadratureConfig::default();
        let cfgs = [
            ModelConfig::new(5, 2, vec![z(0.0, 0.0), z(1.0, 0.0)], z(-0.7, 0.3), z(1.9, -0.4)).unwrap(),
            ModelConfig::new(2, 1, vec![z(-1.0, 0.0), z(0.0, 0.0), z(1.0, 0.0)], z(-0.7, 0.3), z(1.9, -0.4))
                .unwrap(),
        ];
        for cfg in &cfgs {
            let path = crate::paths::Path::line(cfg.c()[0], cfg.c()[1]).unwrap();
            for curve in [Curve::First, Curve::Second] {
                let direct = crate::periods::curve_form_integral(cfg, curve, &path, &q).unwrap().value;
                let fd = SegmentPeriodFd::new(cfg, curve).euler(&q).unwrap().value;
                assert!((direct - fd).norm() < 1e-9 * direct.norm(), "n={} {curve:?}: {direct} vs {fd}", cfg.n());
            }
        }
    }
}