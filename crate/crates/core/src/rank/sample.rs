use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::periods::{Curve, ModelConfig};
use crate::regulator::closed_form_rhs;
use crate::{Error, Result, C64};

/// Minimum distance of sampled parameters from the branch points and from
/// each other.
pub const SAMPLE_CLEARANCE: f64 = 0.3;

/// Model data without the parameter points `λ₁, λ₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTemplate {
    #[serde(rename = "N")]
    pub cover_degree: u32,
    #[serde(rename = "A")]
    pub exponent: u32,
    pub c: Vec<C64>,
}

impl ModelTemplate {
    pub fn new(cover_degree: u32, exponent: u32, c: Vec<C64>) -> Self {
        ModelTemplate {
            cover_degree,
            exponent,
            c,
        }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Full configuration at `(λ₁, λ₂)` with canonical seeds. Parameter
    /// failures on the points are reported as [`Error::InadmissiblePoint`].
    pub fn at(&self, lambda1: C64, lambda2: C64) -> Result<ModelConfig> {
        let point_problem = lambda1 == lambda2
            || self.c.iter().any(|cj| *cj == lambda1 || *cj == lambda2)
            || ![lambda1, lambda2].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if point_problem {
            return Err(Error::InadmissiblePoint(format!("({lambda1}, {lambda2})")));
        }
        ModelConfig::new(self.cover_degree, self.exponent, self.c.clone(), lambda1, lambda2).map_err(
            |e| match e {
                Error::GeometryInfeasible(msg) => {
                    Error::InadmissiblePoint(format!("({lambda1}, {lambda2}): {msg}"))
                }
                other => other,
            },
        )
    }

    /// Seeded sample points `(λ₁, λ₂)` in the annulus around the centroid of
    /// the branch points, each at distance `≥ 0.3` from every `c_j` and from
    /// its partner.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<(C64, C64)> {
        let n = self.c.len().max(1) as f64;
        let center = self.c.iter().sum::<C64>() / n;
        let spread = self.c.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        let (inner, outer) = (SAMPLE_CLEARANCE, spread + 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| loop {
            let r = rng.gen_range(inner..outer);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let z = center + C64::from_polar(r, t);
            if self.c.iter().all(|cj| (z - cj).norm() >= SAMPLE_CLEARANCE) {
                return z;
            }
        };
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let l1 = draw(&mut rng);
            let l2 = draw(&mut rng);
            if (l1 - l2).norm() >= SAMPLE_CLEARANCE {
                out.push((l1, l2));
            }
        }
        out
    }
}

/// Row label: branch point index `j` (1-based) and sheet `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLabel {
    pub j: usize,
    pub sheet: i64,
}

/// Column label: sample point index and operator component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub point: usize,
    pub component: Curve,
}

/// Values of the closed-form operator images. Each row is one normal
/// function `ξ_{c_j}^{(i)}`; each column is one component of its image at
/// one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMatrix {
    pub template: ModelTemplate,
    pub points: Vec<(C64, C64)>,
    pub rows: Vec<RowLabel>,
    pub columns: Vec<ColumnLabel>,
    pub entries: Vec<Vec<C64>>,
}

impl SampleMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    /// Same matrix with each column multiplied by the given factor.
    pub fn scale_columns(&self, factors: &[C64]) -> SampleMatrix {
        let mut out = self.clone();
        for row in &mut out.entries {
            for (z, f) in row.iter_mut().zip(factors) {
                *z *= f;
            }
        }
        out
    }
}

/// Sheets used for the rows. The second sheet is a `ζ^A` multiple of the
/// first and does not raise the rank over ℂ.
pub const SHEETS: [i64; 2] = [0, 1];

/// Evaluate the closed forms for every `j`, both sheets in [`SHEETS`] and both
/// components at each point.
pub fn sample_matrix(template: &ModelTemplate, points: &[(C64, C64)]) -> Result<SampleMatrix> {
    let n = template.n();
    if points.len() < 2 * n {
        return Err(Error::InvalidArgument(format!(
            "need at least {} sample points for n = {n}, got {}",
            2 * n,
            points.len()
        )));
    }
    let configs: Vec<ModelConfig> = points
        .par_iter()
        .map(|(l1, l2)| template.at(*l1, *l2))
        .collect::<Result<_>>()?;

    let rows: Vec<RowLabel> = (1..=n)
        .flat_map(|j| SHEETS.iter().map(move |&sheet| RowLabel { j, sheet }))
        .collect();
    let columns: Vec<ColumnLabel> = (0..points.len())
        .flat_map(|point| {
            [Curve::First, Curve::Second]
                .into_iter()
                .map(move |component| ColumnLabel { point, component })
        })
        .collect();

    // column-major evaluation, parallel over points
    let per_point: Vec<Vec<C64>> = configs
        .par_iter()
        .map(|cfg| {
            let mut col = Vec::with_capacity(2 * rows.len());
            for component in [Curve::First, Curve::Second] {
                for r in &rows {
                    col.push(closed_form_rhs(cfg, r.j, r.sheet, component)?);
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;

    let nr = rows.len();
    let entries: Vec<Vec<C64>> = (0..nr)
        .map(|r| {
            columns
                .iter()
                .map(|col| {
                    let offset = match col.component {
                        Curve::First => 0,
                        Curve::Second => nr,
                    };
                    per_point[col.point][offset + r]
                })
                .collect()
        })
        .collect();
    if entries.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFiniteSample("closed-form sample matrix".into()));
    }
    Ok(SampleMatrix {
        template: template.clone(),
        points: points.to_vec(),
        rows,
        columns,
        entries,
    })
}
