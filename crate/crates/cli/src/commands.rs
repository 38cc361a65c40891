use pflab_core::algebra::{ratio, Poly, Rational};
use pflab_core::operator::{build_jp_operator, lemma_identity_check, JPOperator};
use pflab_core::paths::{pochhammer_contour, Path};
use pflab_core::periods::{
    annihilation_residual, curve_form_integral, product_annihilation_residuals, Curve, ModelConfig,
    SegmentPeriodFd,
};
use pflab_core::rank::{rank_lower_bound_report, ModelTemplate, RankReport};
use pflab_core::regulator::{difference_chain_check, EqualityChainReport};
use pflab_core::{Error, C64};
use serde::Serialize;

use crate::config::{OperatorCase, RunConfig};
use crate::exit::Failure;

/// Result of one command: its JSON payload, whether every check passed, and
/// an optional human-readable summary.
pub struct Outcome {
    pub result: serde_json::Value,
    pub passed: bool,
    pub summary: Option<String>,
}

impl Outcome {
    fn new<T: Serialize>(result: &T, passed: bool) -> Result<Self, Failure> {
        let result = serde_json::to_value(result)
            .map_err(|e| Failure::validation(format!("cannot serialize result: {e}")))?;
        Ok(Outcome {
            result,
            passed,
            summary: None,
        })
    }
}

fn strings(q: &[Rational]) -> Vec<String> {
    q.iter().map(ToString::to_string).collect()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

// verify-lemma

#[derive(Serialize)]
struct LemmaCase {
    c: Vec<String>,
    r: Vec<String>,
    holds: bool,
}

#[derive(Serialize)]
struct LemmaResult {
    cases: Vec<LemmaCase>,
    all_hold: bool,
}

/// `n ∈ {2, 3, 4}` with equal parameters `r ∈ {2/5, 1/2, 3/7}`, plus one case
/// with distinct parameters.
pub fn default_lemma_grid() -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let poles = [ratio(0, 1), ratio(1, 1), ratio(-1, 2), ratio(3, 1)];
    let mut out = Vec::new();
    for n in 2..=4 {
        for r in [ratio(2, 5), ratio(1, 2), ratio(3, 7)] {
            out.push((poles[..n].to_vec(), vec![r; n + 1]));
        }
    }
    out.push((
        vec![ratio(0, 1), ratio(2, 1), ratio(-1, 3)],
        vec![ratio(1, 3), ratio(2, 7), ratio(3, 5), ratio(1, 4)],
    ));
    out
}

pub fn verify_lemma(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let cases = if cfg.lemma.cases.is_empty() {
        default_lemma_grid()
    } else {
        cfg.lemma.cases.iter().map(OperatorCase::parse).collect::<Result<_, _>>()?
    };
    let mut out = Vec::with_capacity(cases.len());
    for (c, r) in &cases {
        let check = lemma_identity_check(c, r)?;
        out.push(LemmaCase {
            c: strings(c),
            r: strings(r),
            holds: check.holds,
        });
    }
    let all_hold = out.iter().all(|c| c.holds);
    Outcome::new(
        &LemmaResult {
            cases: out,
            all_hold,
        },
        all_hold,
    )
}

// operator

#[derive(Serialize)]
#[serde(untagged)]
enum Coefficients {
    Exact(Vec<Vec<String>>),
    Numeric(Vec<Vec<C64>>),
}

#[derive(Serialize)]
#[serde(untagged)]
enum Poles {
    Exact(Vec<String>),
    Numeric(Vec<C64>),
}

#[derive(Serialize)]
struct OperatorReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<Curve>,
    c: Poles,
    r: Vec<String>,
    order: usize,
    /// `q0, p1, …, pn`, each in ascending powers of `λ`.
    coefficients: Coefficients,
}

fn exact_report(curve: Option<Curve>, c: &[Rational], r: &[Rational]) -> Result<OperatorReport, Failure> {
    let op: JPOperator<Rational> = build_jp_operator(c, r)?;
    let coeffs = op.coefficients().iter().map(|p: &Poly<Rational>| strings(p.coeffs())).collect();
    Ok(OperatorReport {
        curve,
        c: Poles::Exact(strings(c)),
        r: strings(r),
        order: op.order(),
        coefficients: Coefficients::Exact(coeffs),
    })
}

pub fn operator(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let mut reports = Vec::new();
    if let Some(case) = &cfg.operator {
        let (c, r) = case.parse()?;
        reports.push(exact_report(None, &c, &r)?);
    } else {
        let model = cfg.model()?;
        let exact_c: Option<Vec<Rational>> = model
            .c()
            .iter()
            .map(|z| if z.im == 0.0 { Rational::from_float(z.re) } else { None })
            .collect();
        for curve in [Curve::First, Curve::Second] {
            let r = model.operator_parameters(curve);
            let report = match &exact_c {
                Some(c) => exact_report(Some(curve), c, &r)?,
                None => {
                    let op: JPOperator<C64> = build_jp_operator(model.c(), &r)?;
                    OperatorReport {
                        curve: Some(curve),
                        c: Poles::Numeric(model.c().to_vec()),
                        r: strings(&r),
                        order: op.order(),
                        coefficients: Coefficients::Numeric(
                            op.coefficients().iter().map(|p| p.coeffs().to_vec()).collect(),
                        ),
                    }
                }
            };
            reports.push(report);
        }
    }
    Outcome::new(&reports, true)
}

// periods

#[derive(Serialize)]
struct CurvePeriods {
    curve: Curve,
    period: C64,
    residual: f64,
    straight_period: C64,
    lauricella_euler: C64,
    /// Absent when some `|x_p| ≥ 0.95`, outside the series domain.
    #[serde(skip_serializing_if = "Option::is_none")]
    lauricella_series: Option<C64>,
    oracle_residual: f64,
}

#[derive(Serialize)]
struct BasePointPeriods {
    lambda1: C64,
    lambda2: C64,
    curves: Vec<CurvePeriods>,
    product_residuals: (f64, f64),
}

#[derive(Serialize)]
struct PeriodsResult {
    cycle_clearance: f64,
    base_points: Vec<BasePointPeriods>,
    residual_tolerance: f64,
    oracle_tolerance: f64,
}

/// Shift applied to both parameters for the default second base point.
const DEFAULT_SHIFT: C64 = C64::new(0.05, 0.05);

fn cycle_clearance(model: &ModelConfig, lambdas: &[C64]) -> f64 {
    let (a, b) = (model.c()[0], model.c()[1]);
    let segment = Path::line(a, b).expect("distinct poles");
    let obstacles = model.c()[2..].iter().chain(lambdas);
    let room = obstacles.map(|p| segment.distance_to(*p)).fold(f64::INFINITY, f64::min);
    (0.2 * (b - a).norm()).min(room / 3.0)
}

pub fn periods(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let model = cfg.model()?;
    let opts = &cfg.periods;
    let mut points = vec![(model.lambda1(), model.lambda2())];
    if opts.base_points.is_empty() {
        points.push((model.lambda1() + DEFAULT_SHIFT, model.lambda2() + DEFAULT_SHIFT));
    } else {
        points.extend_from_slice(&opts.base_points);
    }
    cfg.derivative.validate(model.n())?;
    let lambdas: Vec<C64> = points.iter().flat_map(|(a, b)| [*a, *b]).collect();
    let clearance = cycle_clearance(&model, &lambdas);
    let cycle = pochhammer_contour(model.c()[0], model.c()[1], clearance)?;
    let straight = Path::line(model.c()[0], model.c()[1])?;

    let mut passed = true;
    let mut base_points = Vec::with_capacity(points.len());
    for (l1, l2) in points {
        let at = model.moved(l1, l2)?;
        let mut curves = Vec::new();
        for curve in [Curve::First, Curve::Second] {
            let rep = annihilation_residual(&at, curve, &cycle, &cfg.derivative, &cfg.quadrature)?;
            let direct = curve_form_integral(&at, curve, &straight, &cfg.quadrature)?.value;
            let fd = SegmentPeriodFd::new(&at, curve);
            let euler = fd.euler(&cfg.quadrature)?.value;
            let series = match fd.series(1e-14) {
                Ok(v) => Some(v),
                Err(Error::SeriesDiverges { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let oracle_residual = series.map_or(rel(direct, euler), |s| rel(direct, euler).max(rel(euler, s)));
            passed &= rep.residual < opts.residual_tolerance && oracle_residual < opts.oracle_tolerance;
            curves.push(CurvePeriods {
                curve,
                period: rep.period,
                residual: rep.residual,
                straight_period: direct,
                lauricella_euler: euler,
                lauricella_series: series,
                oracle_residual,
            });
        }
        let product = product_annihilation_residuals(&at, &cycle, &cycle, &cfg.derivative, &cfg.quadrature)?;
        passed &= product.0 < opts.residual_tolerance && product.1 < opts.residual_tolerance;
        base_points.push(BasePointPeriods {
            lambda1: l1,
            lambda2: l2,
            curves,
            product_residuals: product,
        });
    }
    Outcome::new(
        &PeriodsResult {
            cycle_clearance: clearance,
            base_points,
            residual_tolerance: opts.residual_tolerance,
            oracle_tolerance: opts.oracle_tolerance,
        },
        passed,
    )
}

// chain

#[derive(Serialize)]
struct ChainEntry {
    #[serde(flatten)]
    report: EqualityChainReport,
    passed: bool,
}

pub fn chain(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let model = cfg.model()?;
    cfg.derivative.validate(model.n())?;
    let opts = &cfg.chain;
    let pairs: Vec<(usize, i64)> = if opts.pairs.is_empty() {
        (2..=model.n()).flat_map(|j| [(j, 0), (j, 1)]).collect()
    } else {
        opts.pairs.clone()
    };
    let mut entries = Vec::new();
    for (j, l) in pairs {
        for component in [Curve::First, Curve::Second] {
            let report = difference_chain_check(&model, j, l, component, &cfg.quadrature, &cfg.derivative)?;
            let r = &report.residuals;
            let passed = r.operator_stokes < opts.operator_tolerance
                && r.stokes_usub < opts.reduction_tolerance
                && r.usub_closed < opts.closed_form_tolerance;
            entries.push(ChainEntry { report, passed });
        }
    }
    let passed = entries.iter().all(|e| e.passed);
    Outcome::new(&entries, passed)
}

// rank

pub fn rank(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let model = cfg.model()?;
    let template = ModelTemplate::new(model.cover_degree(), model.exponent(), model.c().to_vec());
    let count = cfg.rank.points.unwrap_or(4 * template.n());
    let points = template.sample_points(count, cfg.seed);
    let report: RankReport = rank_lower_bound_report(&template, &points, cfg.rank.gap_threshold)?;
    let mut out = Outcome::new(&report, report.certified())?;
    out.summary = Some(report.to_text());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_holds() {
        let out = verify_lemma(&RunConfig::default()).unwrap();
        assert!(out.passed);
        assert_eq!(out.result["cases"].as_array().unwrap().len(), 10);
    }

    #[test]
    fn operator_prints_rational_strings() {
        let cfg = RunConfig {
            operator: Some(OperatorCase {
                c: vec!["0".into(), "1".into()],
                r: vec!["2/5".into(); 3],
            }),
            ..RunConfig::default()
        };
        let out = operator(&cfg).unwrap();
        // q0 = λ² − λ
        assert_eq!(out.result[0]["coefficients"][0], serde_json::json!(["0", "-1", "1"]));
        assert_eq!(out.result[0]["r"][0], "2/5");
    }

    #[test]
    fn duplicate_poles_are_a_validation_error() {
        let cfg = RunConfig {
            operator: Some(OperatorCase {
                c: vec!["1".into(), "1".into()],
                r: vec!["1/2".into(); 3],
            }),
            ..RunConfig::default()
        };
        assert_eq!(operator(&cfg).err().unwrap().code, crate::exit::VALIDATION);
    }
}
