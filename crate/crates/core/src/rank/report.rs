use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{numerical_rank, sample_matrix, ModelTemplate, NumericalRank};
use crate::algebra::euler_totient;
use crate::periods::Curve;
use crate::regulator::nu_pairing;
use crate::{Error, Result, C64};

pub const ALGEBRAIC_JUSTIFICATION: &str = "Step (iv) is algebraic, not numeric. \
The image of ξ_{c_j}^{(i)} equals ζ^{Ai} times the image of ξ_{c_j}^{(0)}, so the \
subgroup generated by all ξ_{c_j}^{(i)} maps onto the Z[ζ]-span of the n functions F_{0,j}. \
Linear independence of F_{0,1}, ..., F_{0,n} over C forces every Z[ζ]-relation among them \
to vanish, so this span is a free Z[ζ]-module of rank n. Since Z[ζ] is free of rank φ(N) \
over Z, the subgroup has rank at least n·φ(N).";

pub const SCOPE_STATEMENT: &str = "Numerics certify only the nonvanishing and the \
C-linear independence of the operator images at the sampled parameters t = (λ₁, λ₂). \
The lower bound concerns indecomposable classes for very general t, which floating-point \
sampling cannot certify.";

/// `|F_{0,j}|` against an estimate of its evaluation noise at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonvanishingCertificate {
    pub j: usize,
    pub point: usize,
    pub component: Curve,
    pub modulus: f64,
    pub noise: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub template: ModelTemplate,
    pub points: Vec<(C64, C64)>,
    pub gap_threshold: f64,
    pub expected_rank: usize,
    pub numerical: NumericalRank,
    pub nonvanishing: Vec<NonvanishingCertificate>,
    pub totient: u64,
    pub bound: u64,
    pub justification: String,
    pub scope: String,
}

/// Evaluation noise of a closed-form value: its disagreement with the value
/// recovered from the difference formulas, floored at a few ulps.
fn noise_estimate(value: C64, recovered: C64) -> f64 {
    (value - recovered).norm().max(64.0 * f64::EPSILON * value.norm())
}

/// Numerical rank of the sampled family, nonvanishing certificates and the
/// resulting lower bound `rank·φ(N)`.
pub fn rank_lower_bound_report(
    template: &ModelTemplate,
    points: &[(C64, C64)],
    gap_threshold: f64,
) -> Result<RankReport> {
    let m = sample_matrix(template, points)?;
    let numerical = numerical_rank(&m.entries, gap_threshold)?;

    let mut nonvanishing = Vec::with_capacity(template.n());
    for j in 1..=template.n() {
        let mut best: Option<NonvanishingCertificate> = None;
        for (p, (l1, l2)) in points.iter().enumerate() {
            let cfg = template.at(*l1, *l2)?;
            for component in [Curve::First, Curve::Second] {
                let nu = nu_pairing(&cfg, j, 0, component)?;
                let modulus = nu.closed_form.norm();
                let noise = noise_estimate(nu.closed_form, nu.value);
                let better = best.as_ref().map_or(true, |b| modulus / noise > b.modulus / b.noise);
                if better {
                    best = Some(NonvanishingCertificate {
                        j,
                        point: p,
                        component,
                        modulus,
                        noise,
                        passed: modulus > 10.0 * noise,
                    });
                }
            }
        }
        nonvanishing.push(best.ok_or_else(|| Error::InvalidArgument("no sample points".into()))?);
    }

    let totient = euler_totient(template.cover_degree as u64);
    Ok(RankReport {
        template: template.clone(),
        points: points.to_vec(),
        gap_threshold,
        expected_rank: template.n(),
        bound: numerical.rank as u64 * totient,
        numerical,
        nonvanishing,
        totient,
        justification: ALGEBRAIC_JUSTIFICATION.into(),
        scope: SCOPE_STATEMENT.into(),
    })
}

impl RankReport {
    pub fn certified(&self) -> bool {
        self.numerical.rank == self.expected_rank && self.nonvanishing.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let t = &self.template;
        let mut s = String::new();
        let _ = writeln!(s, "cover degree N = {}, exponent A = {}, n = {}", t.cover_degree, t.exponent, t.n());
        let _ = writeln!(s, "sample points: {}", self.points.len());
        let sv: Vec<String> = self.numerical.singular_values.iter().map(|v| format!("{v:.3e}")).collect();
        let _ = writeln!(s, "singular values: {}", sv.join(", "));
        let gap = self.numerical.gap_ratio.map_or("none".to_string(), |g| format!("{g:.3e}"));
        let _ = writeln!(
            s,
            "numerical rank over C: {} (expected {}, gap ratio {gap}, threshold {:.1e})",
            self.numerical.rank, self.expected_rank, self.gap_threshold
        );
        for c in &self.nonvanishing {
            let _ = writeln!(
                s,
                "nonvanishing j = {}: |F| = {:.3e}, noise {:.3e} at point {} component {} [{}]",
                c.j,
                c.modulus,
                c.noise,
                c.point,
                u8::from(c.component),
                if c.passed { "ok" } else { "FAILED" }
            );
        }
        let _ = writeln!(s, "φ(N) = {}", self.totient);
        let _ = writeln!(s, "lower bound: {} · {} = {}", self.numerical.rank, self.totient, self.bound);
        let _ = writeln!(s, "{}", self.justification);
        let _ = writeln!(s, "{}", self.scope);
        s
    }
}
