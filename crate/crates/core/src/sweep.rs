//! Threshold sweep: re-run selection from the full feature set at each
//! threshold on a grid and score a classifier on every surviving subset.
//!
//! Scoring uses an inner stratified train/validation split of the training
//! data, so test rows never influence the chosen threshold.

use std::cmp::Ordering;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{self, evaluate_majority, ClassifierSpec};
use crate::correlation::{build_profile, CorrelationProfile, Threshold};
use crate::dataset::{train_test_split, Dataset, SplitSpec};
use crate::voting::select;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub theta_min: f64,
    pub theta_max: f64,
    pub step: f64,
    /// Second pass over `[best - step, best + step]` at `step / 10`.
    #[serde(default)]
    pub refine: bool,
    pub validation_fraction: f64,
    /// Seed of the inner train/validation split.
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { theta_min: 0.0, theta_max: 0.5, step: 0.02, refine: false, validation_fraction: 0.2, seed: 42 }
    }
}

/// Rounds grid points so accumulated floating error does not leak into
/// reports (0.06 rather than 0.060000000000000005).
fn tidy(theta: f64) -> f64 {
    (theta * 1e10).round() / 1e10
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let (min, max, step) = (self.theta_min, self.theta_max, self.step);
        let ok = min.is_finite() && max.is_finite() && step.is_finite() && 0.0 <= min && min < max && max <= 1.0 && step > 0.0;
        if !ok {
            return Err(Error::InvalidRange { min, max, step });
        }
        Ok(())
    }

    /// `theta_min, theta_min + step, ...` up to and including `theta_max`.
    pub fn thetas(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(grid(self.theta_min, self.theta_max, self.step))
    }
}

fn grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    (0..)
        .map(|k| tidy(min + k as f64 * step))
        .take_while(|&t| t <= max + 1e-9)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub n_selected: usize,
    pub train_accuracy: f64,
    pub validation_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTrace {
    pub classifier_id: String,
    /// One record per grid threshold, ascending.
    pub records: Vec<SweepRecord>,
    pub best_theta: f64,
    pub best_n_selected: usize,
    /// Records of the optional refinement pass.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refinement: Vec<SweepRecord>,
}

impl SweepTrace {
    pub const CSV_HEADER: &'static str = "theta,n_selected,train_acc,val_acc";

    /// `theta,n_selected,train_acc,val_acc` rows for the main grid.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{},{},{:.6},{:.6}", r.theta, r.n_selected, r.train_accuracy, r.validation_accuracy);
        }
        out
    }

    pub fn record_at(&self, theta: f64) -> Option<&SweepRecord> {
        self.records.iter().chain(&self.refinement).find(|r| (r.theta - theta).abs() < 1e-9)
    }

    pub fn max_validation_accuracy(&self) -> f64 {
        self.records.iter().map(|r| r.validation_accuracy).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Ranking used to pick the best record: higher validation accuracy, then
/// fewer features, then smaller threshold.
fn better(a: &SweepRecord, b: &SweepRecord) -> Ordering {
    a.validation_accuracy
        .total_cmp(&b.validation_accuracy)
        .then_with(|| b.n_selected.cmp(&a.n_selected))
        .then_with(|| b.theta.total_cmp(&a.theta))
}

pub fn best_record(records: &[SweepRecord]) -> Option<&SweepRecord> {
    records.iter().max_by(|a, b| better(a, b))
}

/// Trains on the subset of `fit` and scores on `fit` and `val`. An empty
/// subset is scored as the majority-class predictor of `fit`.
pub fn score_subset(spec: &ClassifierSpec, fit: &Dataset, val: &Dataset, subset: &[usize]) -> Result<(f64, f64)> {
    if subset.is_empty() {
        return Ok((evaluate_majority(fit, fit).accuracy, evaluate_majority(fit, val).accuracy));
    }
    let model = classifier::train(spec, fit, subset)?;
    let train_acc = classifier::evaluate(&model, fit, subset)?.accuracy;
    let val_acc = classifier::evaluate(&model, val, subset)?.accuracy;
    Ok((train_acc, val_acc))
}

fn run_grid(thetas: &[f64], profile: &CorrelationProfile, spec: &ClassifierSpec, fit: &Dataset, val: &Dataset) -> Result<Vec<SweepRecord>> {
    thetas
        .par_iter()
        .map(|&theta| {
            let report = select(profile, Threshold::new(theta)?)?;
            let (train_accuracy, validation_accuracy) = score_subset(spec, fit, val, &report.selected)?;
            Ok(SweepRecord { theta, n_selected: report.n_features_out, train_accuracy, validation_accuracy })
        })
        .collect()
}

/// Sweeps the threshold grid for one classifier on `train`.
pub fn sweep(train: &Dataset, classifier: &ClassifierSpec, config: &SweepConfig) -> Result<SweepTrace> {
    let thetas = config.thetas()?;
    classifier.validate()?;
    let inner = SplitSpec { test_fraction: config.validation_fraction, seed: config.seed, stratified: true };
    let (fit, val) = train_test_split(train, &inner)?;
    let profile = build_profile(&fit)?;

    let records = run_grid(&thetas, &profile, classifier, &fit, &val)?;
    let mut best = best_record(&records).cloned().expect("grid is never empty");

    let mut refinement = Vec::new();
    if config.refine {
        let fine_step = config.step / 10.0;
        let lo = tidy((best.theta - config.step).max(0.0));
        let hi = tidy((best.theta + config.step).min(1.0));
        let fine = grid(lo, hi, fine_step);
        refinement = run_grid(&fine, &profile, classifier, &fit, &val)?;
        if let Some(r) = best_record(&refinement) {
            if better(r, &best) == Ordering::Greater {
                best = r.clone();
            }
        }
    }

    Ok(SweepTrace {
        classifier_id: classifier.id().to_string(),
        records,
        best_theta: best.theta,
        best_n_selected: best.n_selected,
        refinement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(theta: f64, n: usize, acc: f64) -> SweepRecord {
        SweepRecord { theta, n_selected: n, train_accuracy: 1.0, validation_accuracy: acc }
    }

    #[test]
    fn grid_boundaries() {
        let c = SweepConfig { theta_min: 0.0, theta_max: 0.4, step: 0.02, ..SweepConfig::default() };
        let t = c.thetas().unwrap();
        assert_eq!(t.len(), 21);
        assert_eq!(t[3], 0.06);
        assert_eq!(*t.last().unwrap(), 0.4);
        let single = SweepConfig { theta_max: 0.4, step: 0.5, ..SweepConfig::default() };
        assert_eq!(single.thetas().unwrap(), vec![0.0]);
    }

    #[test]
    fn invalid_ranges() {
        for (min, max, step) in [(0.3, 0.2, 0.02), (0.0, 1.2, 0.02), (-0.1, 0.2, 0.02), (0.0, 0.5, 0.0), (0.2, 0.2, 0.1)] {
            let c = SweepConfig { theta_min: min, theta_max: max, step, ..SweepConfig::default() };
            assert!(matches!(c.thetas(), Err(Error::InvalidRange { .. })));
        }
    }

    #[test]
    fn tie_break_prefers_fewer_features_then_smaller_theta() {
        let rs = vec![record(0.0, 10, 0.9), record(0.02, 8, 0.9), record(0.04, 8, 0.9), record(0.06, 3, 0.85)];
        assert_eq!(best_record(&rs).unwrap().theta, 0.02);
        let rs = vec![record(0.0, 10, 0.91), record(0.02, 8, 0.9)];
        assert_eq!(best_record(&rs).unwrap().theta, 0.0);
    }

    #[test]
    fn csv_layout() {
        let trace = SweepTrace {
            classifier_id: "decision_tree".into(),
            records: vec![record(0.0, 3, 0.5), record(0.02, 2, 0.75)],
            best_theta: 0.02,
            best_n_selected: 2,
            refinement: vec![],
        };
        assert_eq!(trace.to_csv(), "theta,n_selected,train_acc,val_acc\n0,3,1.000000,0.500000\n0.02,2,1.000000,0.750000\n");
    }
}
