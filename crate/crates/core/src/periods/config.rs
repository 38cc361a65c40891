use std::f64::consts::TAU;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{ratio, Rational};
use crate::paths::{build_gamma, default_epsilon, BranchTrace, Path};
use crate::{Error, Result, C64};

/// Which factor of the surface: curve 1 carries `λ₁` and exponent `A`,
/// curve 2 carries `λ₂` and exponent `N − A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Curve {
    First,
    Second,
}

impl TryFrom<u8> for Curve {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Curve::First),
            2 => Ok(Curve::Second),
            _ => Err(format!("curve must be 1 or 2 (got {v})")),
        }
    }
}

impl From<Curve> for u8 {
    fn from(c: Curve) -> u8 {
        match c {
            Curve::First => 1,
            Curve::Second => 2,
        }
    }
}

/// Discrete and continuous data of one fiber, with chosen branches of
/// `(c_j − λ₁)^{1/N}` and `(c_j − λ₂)^{1/N}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelConfigSpec", into = "ModelConfigSpec")]
pub struct ModelConfig {
    cover_degree: u32,
    exponent: u32,
    c: Vec<C64>,
    lambda1: C64,
    lambda2: C64,
    seeds1: Vec<C64>,
    seeds2: Vec<C64>,
}

/// Serialized form; missing seeds are filled with the canonical choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfigSpec {
    #[serde(rename = "N")]
    pub cover_degree: u32,
    #[serde(rename = "A")]
    pub exponent: u32,
    pub c: Vec<C64>,
    pub lambda1: C64,
    pub lambda2: C64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds1: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds2: Option<Vec<C64>>,
}

impl TryFrom<ModelConfigSpec> for ModelConfig {
    type Error = Error;
    fn try_from(s: ModelConfigSpec) -> Result<Self> {
        let mut cfg = ModelConfig::new(s.cover_degree, s.exponent, s.c, s.lambda1, s.lambda2)?;
        if let Some(seeds) = s.seeds1 {
            cfg = cfg.with_seeds(Curve::First, seeds)?;
        }
        if let Some(seeds) = s.seeds2 {
            cfg = cfg.with_seeds(Curve::Second, seeds)?;
        }
        Ok(cfg)
    }
}

impl From<ModelConfig> for ModelConfigSpec {
    fn from(c: ModelConfig) -> Self {
        ModelConfigSpec {
            cover_degree: c.cover_degree,
            exponent: c.exponent,
            c: c.c,
            lambda1: c.lambda1,
            lambda2: c.lambda2,
            seeds1: Some(c.seeds1),
            seeds2: Some(c.seeds2),
        }
    }
}

impl ModelConfig {
    /// Validates the parameters and chooses canonical seeds: the principal
    /// root at `c_1`, continued along the unwound path from `c_1` to `c_j`.
    pub fn new(
        cover_degree: u32,
        exponent: u32,
        c: Vec<C64>,
        lambda1: C64,
        lambda2: C64,
    ) -> Result<Self> {
        validate_parameters(cover_degree, exponent, &c, lambda1, lambda2)?;
        let mut cfg = ModelConfig {
            cover_degree,
            exponent,
            c,
            lambda1,
            lambda2,
            seeds1: Vec::new(),
            seeds2: Vec::new(),
        };
        cfg.seeds1 = cfg.canonical_seeds(lambda1)?;
        cfg.seeds2 = cfg.canonical_seeds(lambda2)?;
        Ok(cfg)
    }

    fn canonical_seeds(&self, lambda: C64) -> Result<Vec<C64>> {
        let n = self.cover_degree;
        let mut out = vec![principal_root(self.c[0] - lambda, n)];
        for j in 2..=self.n() {
            let path = self.gamma(j, 0)?;
            out.push(BranchTrace::principal(&path, lambda, n)?.end_value()?);
        }
        Ok(out)
    }

    /// Replace the seeds of one curve; each must be an `N`-th root of its radicand.
    pub fn with_seeds(mut self, curve: Curve, seeds: Vec<C64>) -> Result<Self> {
        if seeds.len() != self.n() {
            return Err(Error::InvalidConfig(format!(
                "expected {} branch seeds for curve {}, got {}",
                self.n(),
                u8::from(curve),
                seeds.len()
            )));
        }
        let lambda = self.lambda(curve);
        for (j, (s, cj)) in seeds.iter().zip(&self.c).enumerate() {
            let radicand = cj - lambda;
            let rel = (s.powu(self.cover_degree) - radicand).norm() / radicand.norm();
            if !(rel <= 1e-9) {
                return Err(Error::InvalidConfig(format!(
                    "branch seed {} of curve {} is not an N-th root of c_{} − λ (relative mismatch {rel:e})",
                    j + 1,
                    u8::from(curve),
                    j + 1
                )));
            }
        }
        match curve {
            Curve::First => self.seeds1 = seeds,
            Curve::Second => self.seeds2 = seeds,
        }
        Ok(self)
    }

    /// The same configuration with `λ₁, λ₂` moved slightly; seeds follow by
    /// continuity, `seed·((c − λ')/(c − λ))^{1/N}` with the principal root.
    pub fn moved(&self, lambda1: C64, lambda2: C64) -> Result<Self> {
        validate_parameters(self.cover_degree, self.exponent, &self.c, lambda1, lambda2)?;
        let n = self.cover_degree;
        let follow = |seeds: &[C64], old: C64, new: C64| -> Vec<C64> {
            seeds
                .iter()
                .zip(&self.c)
                .map(|(s, cj)| s * principal_root((cj - new) / (cj - old), n))
                .collect()
        };
        Ok(ModelConfig {
            seeds1: follow(&self.seeds1, self.lambda1, lambda1),
            seeds2: follow(&self.seeds2, self.lambda2, lambda2),
            lambda1,
            lambda2,
            ..self.clone()
        })
    }

    pub fn cover_degree(&self) -> u32 {
        self.cover_degree
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Number of points `c_j`.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &[C64] {
        &self.c
    }

    pub fn lambda1(&self) -> C64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> C64 {
        self.lambda2
    }

    pub fn lambda(&self, curve: Curve) -> C64 {
        match curve {
            Curve::First => self.lambda1,
            Curve::Second => self.lambda2,
        }
    }

    pub fn seeds(&self, curve: Curve) -> &[C64] {
        match curve {
            Curve::First => &self.seeds1,
            Curve::Second => &self.seeds2,
        }
    }

    /// `ζ = e^{2πi/N}`.
    pub fn zeta(&self) -> C64 {
        C64::from_polar(1.0, TAU / self.cover_degree as f64)
    }

    /// `ζ^k`, reduced mod `N` first.
    pub fn zeta_pow(&self, k: i64) -> C64 {
        let n = self.cover_degree as i64;
        C64::from_polar(1.0, TAU * k.rem_euclid(n) as f64 / n as f64)
    }

    /// Integer exponent of `y` in the curve equation: `A` or `N − A`.
    pub fn curve_exponent(&self, curve: Curve) -> u32 {
        match curve {
            Curve::First => self.exponent,
            Curve::Second => self.cover_degree - self.exponent,
        }
    }

    /// Operator parameters `r_0 = … = r_n` equal to the curve exponent over `N`.
    pub fn operator_parameters(&self, curve: Curve) -> Vec<Rational> {
        let r = ratio(self.curve_exponent(curve) as i64, self.cover_degree as i64);
        vec![r; self.n() + 1]
    }

    /// All marked points `c_1..c_n, λ₁, λ₂`.
    pub fn points(&self) -> Vec<C64> {
        let mut p = self.c.clone();
        p.push(self.lambda1);
        p.push(self.lambda2);
        p
    }

    pub fn epsilon(&self) -> f64 {
        default_epsilon(&self.points())
    }

    /// The path from `c_1` to `c_j` (1-based) with `l` extra turns about `λ₂`.
    pub fn gamma(&self, j: usize, l: i64) -> Result<Path> {
        self.gamma_with_epsilon(j, l, self.epsilon())
    }

    pub fn gamma_with_epsilon(&self, j: usize, l: i64, eps: f64) -> Result<Path> {
        if j < 2 || j > self.n() {
            return Err(Error::InvalidIndex {
                index: j,
                max: self.n(),
            });
        }
        let mut obstacles = vec![self.lambda1, self.lambda2];
        for (k, ck) in self.c.iter().enumerate() {
            if k != 0 && k != j - 1 {
                obstacles.push(*ck);
            }
        }
        build_gamma(self.c[0], self.c[j - 1], &obstacles, Some(1), l, eps)
    }
}

pub(crate) fn principal_root(z: C64, n: u32) -> C64 {
    C64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

fn validate_parameters(
    cover: u32,
    a: u32,
    c: &[C64],
    lambda1: C64,
    lambda2: C64,
) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidConfig(m));
    if cover < 2 {
        return bad(format!("N ≥ 2 violated (N = {cover})"));
    }
    let n = c.len() as u64;
    if n < 2 {
        return bad(format!("n ≥ 2 violated (n = {n})"));
    }
    if (cover as u64).gcd(&(a as u64)) != 1 {
        return bad(format!("gcd(N, A) = 1 violated (N = {cover}, A = {a})"));
    }
    let (big, a64) = (cover as u64, a as u64);
    if big + 1 > a64 * (n + 1) {
        return bad(format!(
            "(N+1)/(n+1) ≤ A violated (N = {cover}, n = {n}, A = {a})"
        ));
    }
    if a64 * (n + 1) > n * big - 1 {
        return bad(format!(
            "A ≤ (nN−1)/(n+1) violated (N = {cover}, n = {n}, A = {a})"
        ));
    }
    let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
    if !c.iter().all(finite) || !finite(&lambda1) || !finite(&lambda2) {
        return bad("all points must be finite".into());
    }
    for i in 0..c.len() {
        for j in (i + 1)..c.len() {
            if c[i] == c[j] {
                return bad(format!("c_j distinct violated (c_{} = c_{})", i + 1, j + 1));
            }
        }
    }
    if let Some(j) = c.iter().position(|&x| x == lambda1) {
        return bad(format!("λ₁ ∉ {{c_j}} violated (λ₁ = c_{})", j + 1));
    }
    if let Some(j) = c.iter().position(|&x| x == lambda2) {
        return bad(format!("λ₂ ∉ {{c_j}} violated (λ₂ = c_{})", j + 1));
    }
    if lambda1 == lambda2 {
        return bad("λ₁ ≠ λ₂ violated".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn canonical() -> ModelConfig {
        ModelConfig::new(5, 2, vec![c(0.0, 0.0), c(1.0, 0.0)], c(-0.7, 0.3), c(1.9, -0.4)).unwrap()
    }

    #[test]
    fn canonical_seeds_are_roots() {
        let cfg = canonical();
        for curve in [Curve::First, Curve::Second] {
            for (s, cj) in cfg.seeds(curve).iter().zip(cfg.c()) {
                let r = cj - cfg.lambda(curve);
                assert!((s.powu(5) - r).norm() < 1e-12 * r.norm());
            }
        }
        // c_1 seeds are principal
        assert_eq!(cfg.seeds(Curve::First)[0], principal_root(c(0.7, -0.3), 5));
    }

    #[test]
    fn bounds_name_the_failing_clause() {
        let pts = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let l1 = c(-0.7, 0.3);
        let l2 = c(1.9, -0.4);
        let msg = |r: Result<ModelConfig>| match r.unwrap_err() {
            Error::InvalidConfig(m) => m,
            e => panic!("unexpected {e:?}"),
        };
        assert!(msg(ModelConfig::new(5, 1, pts.clone(), l1, l2)).contains("(N+1)/(n+1) ≤ A"));
        assert!(msg(ModelConfig::new(5, 4, pts.clone(), l1, l2)).contains("A ≤ (nN−1)/(n+1)"));
        assert!(msg(ModelConfig::new(4, 2, pts.clone(), l1, l2)).contains("gcd"));
        assert!(msg(ModelConfig::new(1, 1, pts.clone(), l1, l2)).contains("N ≥ 2"));
        assert!(msg(ModelConfig::new(5, 2, vec![c(0.0, 0.0)], l1, l2)).contains("n ≥ 2"));
        assert!(msg(ModelConfig::new(5, 2, pts.clone(), l1, l1)).contains("λ₁ ≠ λ₂"));
        assert!(msg(ModelConfig::new(5, 2, pts.clone(), pts[1], l2)).contains("λ₁ ∉"));
        assert!(msg(ModelConfig::new(5, 2, pts.clone(), l1, pts[0])).contains("λ₂ ∉"));
        assert!(msg(ModelConfig::new(5, 2, vec![pts[0], pts[0]], l1, l2)).contains("distinct"));
        let bad_seed = canonical().with_seeds(Curve::First, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(msg(bad_seed).contains("seed 1"));
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let cfg = canonical();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ModelConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        let minimal = r#"{"N":5,"A":2,"c":[[0,0],[1,0]],"lambda1":[-0.7,0.3],"lambda2":[1.9,-0.4]}"#;
        let parsed: ModelConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(parsed, cfg);
        let invalid = r#"{"N":5,"A":1,"c":[[0,0],[1,0]],"lambda1":[-0.7,0.3],"lambda2":[1.9,-0.4]}"#;
        let err = serde_json::from_str::<ModelConfig>(invalid).unwrap_err();
        assert!(err.to_string().contains("(N+1)/(n+1)"));
    }

    #[test]
    fn moved_seeds_stay_roots() {
        let cfg = canonical();
        let m = cfg.moved(c(-0.68, 0.31), c(1.9, -0.41)).unwrap();
        for curve in [Curve::First, Curve::Second] {
            for ((s, s0), cj) in m.seeds(curve).iter().zip(cfg.seeds(curve)).zip(m.c()) {
                let r = cj - m.lambda(curve);
                assert!((s.powu(5) - r).norm() < 1e-12 * r.norm());
                assert!((s - s0).norm() < 0.05);
            }
        }
    }

    proptest! {
        #[test]
        fn admissible_exponents_match_the_bounds(big in 2u32..12, a in 0u32..12, n in 2usize..6) {
            let pts: Vec<C64> = (0..n).map(|k| c(k as f64, 0.0)).collect();
            let res = ModelConfig::new(big, a, pts, c(-0.7, 0.3), c(1.9, -0.4));
            let ok = (big as u64).gcd(&(a as u64)) == 1
                && (big as f64 + 1.0) / (n as f64 + 1.0) <= a as f64
                && a as f64 <= (n as f64 * big as f64 - 1.0) / (n as f64 + 1.0);
            prop_assert_eq!(res.is_ok(), ok);
        }
    }
}
