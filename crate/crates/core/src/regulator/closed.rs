use serde::{Deserialize, Serialize};

use super::chain::poch_ratio;
use crate::algebra::{factorial, pochhammer, ratio, rational_to_f64};
use crate::periods::{Curve, ModelConfig};
use crate::{Error, Result, C64};

/// `(2−n)_k / k!`
fn binomial_weight(n: usize, k: u32) -> f64 {
    rational_to_f64(&(pochhammer(&ratio(2 - n as i64, 1), k) / factorial(k)))
}

/// Common prefactor `±N(1−ζ^A)ζ^{Ai}/(λ₂−λ₁)^{n−1}`; the second component
/// carries `(−1)^n`.
fn prefactor(config: &ModelConfig, sheet: i64, curve: Curve) -> C64 {
    let big = config.cover_degree() as f64;
    let a = config.exponent() as i64;
    let n = config.n();
    let z = config.zeta_pow(a);
    let sign = match curve {
        Curve::First => 1.0,
        Curve::Second if n % 2 == 0 => 1.0,
        Curve::Second => -1.0,
    };
    let d = (config.lambda2() - config.lambda1()).powi(n as i32 - 1);
    sign * big * (1.0 - z) * config.zeta_pow(a * sheet) / d
}

/// `Σ_k (2−n)_k/k! · (e/N)_{n−1}/(Nk+e) · ρ_j^{Nk+e}` with `ρ_j` the ratio of
/// seeds `(c_j−λ₂)^{1/N}/(c_j−λ₁)^{1/N}` (first curve, `e = A`) or its
/// reciprocal (second curve, `e = N−A`), times `ζ^{Al}`.
fn seed_sum(config: &ModelConfig, j: usize, l: i64, curve: Curve) -> C64 {
    let big = config.cover_degree() as i64;
    let e = config.curve_exponent(curve) as i64;
    let n = config.n();
    let s1 = config.seeds(Curve::First)[j - 1];
    let s2 = config.seeds(Curve::Second)[j - 1];
    let rho = match curve {
        Curve::First => s2 / s1,
        Curve::Second => s1 / s2,
    };
    let poch = poch_ratio(e, big, n as u32 - 1);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=(n as u32 - 2) {
        let m = big * k as i64 + e;
        acc += binomial_weight(n, k) * poch / m as f64 * rho.powi(m as i32);
    }
    acc * config.zeta_pow(config.exponent() as i64 * l)
}

fn check_index(config: &ModelConfig, j: usize) -> Result<()> {
    if j == 0 || j > config.n() {
        Err(Error::InvalidIndex {
            index: j,
            max: config.n(),
        })
    } else {
        Ok(())
    }
}

/// Closed form of the operator image of the normal function of `ξ_{c_j}^{(i)}`,
/// component `curve`.
pub fn closed_form_rhs(config: &ModelConfig, j: usize, sheet: i64, curve: Curve) -> Result<C64> {
    check_index(config, j)?;
    Ok(prefactor(config, sheet, curve) * seed_sum(config, j, 0, curve))
}

/// Closed form for the difference `ξ_{c_j}^{(i+l)} − ξ_{c_1}^{(i)}`.
pub fn difference_formula(
    config: &ModelConfig,
    j: usize,
    l: i64,
    sheet: i64,
    curve: Curve,
) -> Result<C64> {
    check_index(config, j)?;
    if j < 2 {
        return Err(Error::InvalidIndex {
            index: j,
            max: config.n(),
        });
    }
    Ok(prefactor(config, sheet, curve) * (seed_sum(config, j, l, curve) - seed_sum(config, 1, 0, curve)))
}

/// Single-cycle value recovered from differences, with the closed form for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuPairing {
    pub value: C64,
    pub closed_form: C64,
    pub residual: f64,
}

/// Recover the operator image for `ξ_{c_j}^{(i)}` from difference values:
/// summing the differences over `l` and using `Σ_l ξ_{c_j}^{(i+l)} = 0` gives
/// `−N` times the `c_1` value, and the `l = 0` difference then gives `c_j`.
pub fn nu_pairing(config: &ModelConfig, j: usize, sheet: i64, curve: Curve) -> Result<NuPairing> {
    check_index(config, j)?;
    let big = config.cover_degree() as i64;
    let jj = if j == 1 { 2 } else { j };
    let mut total = C64::new(0.0, 0.0);
    for l in 0..big {
        total += difference_formula(config, jj, l, sheet, curve)?;
    }
    let first = -total / big as f64;
    let value = if j == 1 {
        first
    } else {
        difference_formula(config, j, 0, sheet, curve)? + first
    };
    let closed_form = closed_form_rhs(config, j, sheet, curve)?;
    let residual = (value - closed_form).norm() / value.norm().max(closed_form.norm());
    Ok(NuPairing {
        value,
        closed_form,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn canonical() -> ModelConfig {
        ModelConfig::new(5, 2, vec![c(0.0, 0.0), c(1.0, 0.0)], c(-0.7, 0.3), c(1.9, -0.4)).unwrap()
    }

    #[test]
    fn n_equals_two_simplification() {
        let cfg = canonical();
        let s1 = cfg.seeds(Curve::First);
        let s2 = cfg.seeds(Curve::Second);
        for j in 1..=2 {
            for i in 0..5 {
                let got = closed_form_rhs(&cfg, j, i, Curve::First).unwrap();
                let z = cfg.zeta();
                let expected = (1.0 - z.powu(2)) * z.powu(2 * i as u32)
                    / (cfg.lambda2() - cfg.lambda1())
                    * (s2[j - 1] / s1[j - 1]).powu(2);
                assert!((got - expected).norm() < 1e-13 * expected.norm());
            }
        }
    }

    #[test]
    fn sheet_sum_and_shift() {
        let cfg = canonical();
        for curve in [Curve::First, Curve::Second] {
            for j in 1..=2 {
                let vals: Vec<C64> = (0..5)
                    .map(|i| closed_form_rhs(&cfg, j, i, curve).unwrap())
                    .collect();
                let sum: C64 = vals.iter().sum();
                assert!(sum.norm() < 1e-12 * vals[0].norm());
                for i in 0..4 {
                    assert!((vals[i + 1] - cfg.zeta_pow(2) * vals[i]).norm() < 1e-14 * vals[i].norm());
                }
            }
        }
    }

    #[test]
    fn nu_pairing_recovers_the_closed_form() {
        let cfg = ModelConfig::new(
            3,
            1,
            vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
            c(-0.7, 0.3),
            c(1.9, -0.4),
        )
        .unwrap();
        for curve in [Curve::First, Curve::Second] {
            for j in 1..=4 {
                for i in 0..3 {
                    let p = nu_pairing(&cfg, j, i, curve).unwrap();
                    assert!(p.residual < 1e-9, "j = {j}, i = {i}: {}", p.residual);
                }
            }
        }
        assert!(matches!(
            nu_pairing(&cfg, 0, 0, Curve::First),
            Err(Error::InvalidIndex { .. })
        ));
        assert!(matches!(
            nu_pairing(&cfg, 5, 0, Curve::First),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn winding_is_periodic_mod_n() {
        let cfg = canonical();
        for l in 0..3 {
            let a = difference_formula(&cfg, 2, l, 0, Curve::First).unwrap();
            let b = difference_formula(&cfg, 2, l + 5, 0, Curve::First).unwrap();
            assert_eq!(a, b);
        }
    }
}
