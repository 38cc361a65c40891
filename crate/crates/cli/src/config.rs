use std::path::{Path, PathBuf};

use pflab_core::algebra::Rational;
use pflab_core::operator::DerivativeScheme;
use pflab_core::periods::{ModelConfig, ModelConfigSpec};
use pflab_core::quadrature::QuadratureConfig;
use pflab_core::C64;
use serde::{Deserialize, Serialize};

use crate::exit::Failure;

/// Everything a command needs, read from one JSON file and adjusted by flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfigSpec>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub derivative: DerivativeScheme,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub lemma: LemmaOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorCase>,
    #[serde(default)]
    pub periods: PeriodOptions,
    #[serde(default)]
    pub chain: ChainOptions,
    #[serde(default)]
    pub rank: RankOptions,
}

/// Poles and parameters as rational strings such as `"2/5"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorCase {
    pub c: Vec<String>,
    pub r: Vec<String>,
}

impl OperatorCase {
    pub fn parse(&self) -> Result<(Vec<Rational>, Vec<Rational>), Failure> {
        Ok((parse_rationals(&self.c, "c")?, parse_rationals(&self.r, "r")?))
    }
}

fn parse_rationals(items: &[String], field: &str) -> Result<Vec<Rational>, Failure> {
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse::<Rational>()
                .map_err(|_| Failure::validation(format!("{field}: `{s}` is not a rational number")))
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaOptions {
    /// Cases to check; empty means the built-in grid.
    #[serde(default)]
    pub cases: Vec<OperatorCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeriodOptions {
    /// Extra `(λ₁, λ₂)` base points; the model's own point is always included.
    pub base_points: Vec<(C64, C64)>,
    pub residual_tolerance: f64,
    pub oracle_tolerance: f64,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions {
            base_points: Vec::new(),
            residual_tolerance: 1e-6,
            oracle_tolerance: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainOptions {
    /// `(j, l)` pairs; empty means `j = 2..=n`, `l ∈ {0, 1}`.
    pub pairs: Vec<(usize, i64)>,
    pub operator_tolerance: f64,
    pub reduction_tolerance: f64,
    pub closed_form_tolerance: f64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            pairs: Vec::new(),
            operator_tolerance: 1e-4,
            reduction_tolerance: 1e-6,
            closed_form_tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankOptions {
    /// Number of sample points; `None` means `4n`.
    pub points: Option<usize>,
    pub gap_threshold: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            points: None,
            gap_threshold: 1e6,
        }
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub quad_level: Option<u32>,
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, Failure> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::validation(format!("cannot read {}: {e}", p.display())))?;
                Self::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        if let Some(level) = overrides.quad_level {
            cfg.quadrature.level = level;
        }
        if let Some(tol) = overrides.tolerance {
            cfg.quadrature.tolerance = tol;
        }
        if overrides.output.is_some() {
            cfg.output.clone_from(&overrides.output);
        }
        cfg.quadrature.validate()?;
        cfg.derivative.validate(0)?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::validation(format!("invalid config: {e}")))
    }

    /// The validated model; every violated requirement is named.
    pub fn model(&self) -> Result<ModelConfig, Failure> {
        let spec = self
            .model
            .clone()
            .ok_or_else(|| Failure::validation("config has no `model` section".to_string()))?;
        Ok(ModelConfig::try_from(spec)?)
    }
}
