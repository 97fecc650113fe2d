//! Non-iterative filter baselines: ANOVA-F and mutual-information k-best,
//! and greedy mRMR.
//!
//! `cfs` is accepted as an alias for ANOVA-F k-best, since that is what the
//! comparison protocol calls CFS. Hall's merit-based CFS is not implemented.

mod anova;
mod mrmr;
mod mutual_info;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use anova::anova_f_scores;
pub use mrmr::{mrmr_select, mrmr_select_with};
pub use mutual_info::{discretize, mutual_info, mutual_info_scores, DEFAULT_BINS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMethod {
    AnovaF,
    MutualInfo,
    Mrmr,
}

impl RankingMethod {
    pub fn id(self) -> &'static str {
        match self {
            RankingMethod::AnovaF => "anova_f",
            RankingMethod::MutualInfo => "mi",
            RankingMethod::Mrmr => "mrmr",
        }
    }
}

impl fmt::Display for RankingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RankingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "anova_f" | "anova" | "f_classif" | "cfs" => Ok(RankingMethod::AnovaF),
            "mi" | "mutual_info" | "mutual_information" => Ok(RankingMethod::MutualInfo),
            "mrmr" => Ok(RankingMethod::Mrmr),
            other => Err(Error::InvalidConfig(format!("unknown ranking method {other:?}"))),
        }
    }
}

/// Per-feature scores and the induced ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeatures {
    pub method: RankingMethod,
    pub scores: Vec<f64>,
    /// Feature indices by descending score, ties by ascending index.
    pub order: Vec<usize>,
}

impl RankedFeatures {
    pub fn from_scores(method: RankingMethod, scores: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| match scores[b].total_cmp(&scores[a]) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        });
        Self { method, scores, order }
    }
}

/// First `k` features of the ranking.
pub fn k_best(ranked: &RankedFeatures, k: usize) -> Result<Vec<usize>> {
    let n = ranked.order.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(ranked.order[..k].to_vec())
}
