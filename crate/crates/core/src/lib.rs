//! Feature selection by correlation-aware pairwise voting (HCVR).
//!
//! Every pair of features is classified on three correlations (feature vs
//! feature, and each feature vs the target) as High or Low against a
//! threshold. A fixed rule table turns each triple into one keep/discard
//! vote per feature, and a feature survives when it collects a strict
//! majority of keep votes over its `n - 1` pairings. The threshold itself is
//! tuned by sweeping it upward and scoring a classifier on each surviving
//! subset.
//!
//! The crate also carries the filter baselines used for comparison
//! (ANOVA-F, mutual information, mRMR) and a small deterministic classifier
//! harness (CART, logistic SGD, Gaussian naive Bayes).

pub mod baselines;
pub mod classifier;
pub mod compare;
pub mod correlation;
pub mod dataset;
mod error;
pub mod pipeline;
pub mod seed;
pub mod sweep;
pub mod voting;

pub use error::{Error, Result};

pub use baselines::{anova_f_scores, k_best, mrmr_select, mutual_info_scores, RankedFeatures, RankingMethod};
pub use classifier::{evaluate, train, ClassifierKind, ClassifierSpec, EvalResult, Model};
pub use compare::{compare_methods, ComparisonTable, MethodConfig};
pub use correlation::{build_profile, classify, pearson, CorrelationClass, CorrelationProfile, Threshold};
pub use dataset::{load_csv, standardize, train_test_split, Dataset, LabelColumn, ScalerParams, SplitSpec};
pub use pipeline::{OutputFormat, RunConfig};
pub use sweep::{sweep, SweepConfig, SweepRecord, SweepTrace};
pub use voting::{select, tally_votes, vote_pair, RuleInput, SelectionReport, VoteTally};
