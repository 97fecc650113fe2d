//! Pairwise voting rules and majority aggregation.
//!
//! For a pair `(f1, f2)` the three correlations `A = rho(f1, f2)`,
//! `B = rho(f1, T)` and `C = rho(f2, T)` are each classified High or Low,
//! and the resulting triple picks one row of the rule table:
//!
//! | A | B | C | vote f1 | vote f2 |
//! |---|---|---|---------|---------|
//! | H | L | L | 0 | 0 |
//! | H | H | L | 1 | 0 |
//! | H | L | H | 0 | 1 |
//! | H | H | H | P | Q |
//! | L | H | L | 1 | 0 |
//! | L | L | H | 0 | 1 |
//! | L | H | H | 1 | 1 |
//! | L | L | L | 0 | 0 |
//!
//! `P = |B| >= |C|` and `Q = !P`: when two strongly related features are
//! both relevant, only the more relevant one is kept. The comparison uses
//! absolute values because High/Low is itself defined on `|rho|`; a feature
//! strongly anti-correlated with the target is as relevant as a positively
//! correlated one.
//!
//! Pairs are always evaluated with the lower index as `f1`, so on an exact
//! `|B| == |C|` tie the lower-indexed feature gets the vote.

use serde::{Deserialize, Serialize};

use crate::correlation::{CorrelationClass, CorrelationProfile, Threshold};
use crate::{Error, Result};

use CorrelationClass::{High as H, Low as L};

/// Classified correlations for one feature pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleInput {
    /// Class of rho(f1, f2).
    pub a: CorrelationClass,
    /// Class of rho(f1, T).
    pub b: CorrelationClass,
    /// Class of rho(f2, T).
    pub c: CorrelationClass,
    pub rho1t: f64,
    pub rho2t: f64,
}

impl RuleInput {
    pub fn from_correlations(theta: Threshold, rho12: f64, rho1t: f64, rho2t: f64) -> Self {
        Self {
            a: theta.classify(rho12),
            b: theta.classify(rho1t),
            c: theta.classify(rho2t),
            rho1t,
            rho2t,
        }
    }
}

/// Keep votes `(f1, f2)` for one pair, each 0 or 1.
pub fn vote_pair(input: &RuleInput) -> (u8, u8) {
    match (input.a, input.b, input.c) {
        (H, L, L) => (0, 0),
        (H, H, L) => (1, 0),
        (H, L, H) => (0, 1),
        (H, H, H) => {
            let p = input.rho1t.abs() >= input.rho2t.abs();
            (u8::from(p), u8::from(!p))
        }
        (L, H, L) => (1, 0),
        (L, L, H) => (0, 1),
        (L, H, H) => (1, 1),
        (L, L, L) => (0, 0),
    }
}

/// Keep votes per feature over all pairings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteTally {
    pub keep_votes: Vec<usize>,
    /// Votes each feature receives, `n - 1`.
    pub pair_count: usize,
}

impl VoteTally {
    pub fn discard_votes(&self, i: usize) -> usize {
        self.pair_count - self.keep_votes[i]
    }

    /// Strict majority of keep votes.
    pub fn is_kept(&self, i: usize) -> bool {
        self.keep_votes[i] > self.discard_votes(i)
    }

    pub fn kept(&self) -> Vec<usize> {
        (0..self.keep_votes.len()).filter(|&i| self.is_kept(i)).collect()
    }
}

/// Runs the rule table over every unordered feature pair.
pub fn tally_votes(profile: &CorrelationProfile, theta: Threshold) -> Result<VoteTally> {
    let n = profile.n();
    if n < 2 {
        return Err(Error::TooFewFeatures(n));
    }
    let relevance: Vec<CorrelationClass> = (0..n).map(|i| theta.classify(profile.p2t(i))).collect();
    let mut keep_votes = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let input = RuleInput {
                a: theta.classify(profile.p2p(i, j)),
                b: relevance[i],
                c: relevance[j],
                rho1t: profile.p2t(i),
                rho2t: profile.p2t(j),
            };
            let (vi, vj) = vote_pair(&input);
            keep_votes[i] += usize::from(vi);
            keep_votes[j] += usize::from(vj);
        }
    }
    Ok(VoteTally { keep_votes, pair_count: n - 1 })
}

/// Outcome of one selection run at a fixed threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub theta: f64,
    /// Kept feature indices, ascending.
    pub selected: Vec<usize>,
    pub tally: VoteTally,
    pub n_features_in: usize,
    pub n_features_out: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SelectionReport {
    pub fn with_provenance(mut self, dataset_hash: impl Into<String>, seed: u64) -> Self {
        self.dataset_hash = Some(dataset_hash.into());
        self.seed = Some(seed);
        self
    }

    pub fn dropped(&self) -> Vec<usize> {
        (0..self.n_features_in).filter(|i| self.selected.binary_search(i).is_err()).collect()
    }

    /// Plain-text listing of kept and dropped features with their votes.
    pub fn summary(&self, names: &[String]) -> String {
        use std::fmt::Write;
        let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("f{i}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "theta = {}: kept {} of {} features (majority needs > {} of {} votes)",
            self.theta,
            self.n_features_out,
            self.n_features_in,
            self.tally.pair_count / 2,
            self.tally.pair_count
        );
        for (label, group) in [("kept", self.selected.clone()), ("dropped", self.dropped())] {
            let _ = writeln!(out, "\n{label}:");
            for i in group {
                let _ = writeln!(
                    out,
                    "  {:>3}  {:<32} keep {:>3}  discard {:>3}",
                    i,
                    name(i),
                    self.tally.keep_votes[i],
                    self.tally.discard_votes(i)
                );
            }
        }
        out
    }
}

/// Features with strictly more keep than discard votes at `theta`.
pub fn select(profile: &CorrelationProfile, theta: Threshold) -> Result<SelectionReport> {
    let tally = tally_votes(profile, theta)?;
    let selected = tally.kept();
    Ok(SelectionReport {
        theta: theta.value(),
        n_features_in: profile.n(),
        n_features_out: selected.len(),
        selected,
        tally,
        dataset_hash: None,
        seed: None,
    })
}
