//! Sample matrices of the closed-form operator images and their rank.

mod report;
mod sample;
mod svd;

pub use report::{rank_lower_bound_report, NonvanishingCertificate, RankReport};
pub use sample::{
    sample_matrix, ColumnLabel, ModelTemplate, RowLabel, SampleMatrix, SAMPLE_CLEARANCE, SHEETS,
};
pub use svd::{svd, Svd};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericalRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_{rank+1}`; absent when there is no following value or it is zero.
    pub gap_ratio: Option<f64>,
}

/// Rank as the number of singular values within a factor `gap_threshold` of
/// the largest, accepted only if the next value is smaller by at least the
/// same factor.
pub fn numerical_rank(entries: &[Vec<C64>], gap_threshold: f64) -> Result<NumericalRank> {
    if !(gap_threshold > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "gap threshold must exceed 1, got {gap_threshold}"
        )));
    }
    let sv = svd(entries)?.singular_values;
    let top = sv[0];
    if top == 0.0 {
        return Ok(NumericalRank {
            rank: 0,
            singular_values: sv,
            gap_ratio: None,
        });
    }
    let rank = sv.iter().take_while(|s| **s >= top / gap_threshold).count();
    let gap_ratio = sv.get(rank).filter(|s| **s > 0.0).map(|s| sv[rank - 1] / s);
    if let Some(ratio) = gap_ratio {
        if ratio < gap_threshold {
            return Err(Error::NoClearGap(ratio));
        }
    }
    Ok(NumericalRank {
        rank,
        singular_values: sv,
        gap_ratio,
    })
}
