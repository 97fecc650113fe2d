//! Classifier x selection-method comparison grid.
//!
//! Every selection runs on training rows only; the test rows are touched
//! once, to score the final model of each cell.

use std::fmt;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{anova_f_scores, k_best, mrmr_select_with, mutual_info_scores, DEFAULT_BINS};
use crate::classifier::{self, evaluate_majority, ClassifierSpec, EvalResult};
use crate::correlation::{build_profile, Threshold};
use crate::dataset::Dataset;
use crate::sweep::{sweep, SweepConfig};
use crate::voting::select;
use crate::{Error, Result};

/// One column of the comparison grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MethodConfig {
    /// Threshold tuned per classifier by a sweep, then applied to the full
    /// training set.
    Hcvr { sweep: SweepConfig },
    AnovaF { k: usize },
    MutualInfo { k: usize, n_bins: usize },
    Mrmr { k: usize, n_bins: usize },
}

impl MethodConfig {
    /// Builds a method from its name (`hcvr`, `anova_f`/`cfs`, `mi`, `mrmr`).
    pub fn parse(name: &str, k: usize, sweep: &SweepConfig) -> Result<Self> {
        match name.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "hcvr" => Ok(MethodConfig::Hcvr { sweep: sweep.clone() }),
            "anova_f" | "anova" | "cfs" | "f_classif" => Ok(MethodConfig::AnovaF { k }),
            "mi" | "mutual_info" => Ok(MethodConfig::MutualInfo { k, n_bins: DEFAULT_BINS }),
            "mrmr" => Ok(MethodConfig::Mrmr { k, n_bins: DEFAULT_BINS }),
            other => Err(Error::InvalidConfig(format!("unknown selection method {other:?}"))),
        }
    }

    /// Default lineup: HCVR against the three filters at `k`.
    pub fn default_lineup(k: usize, sweep: &SweepConfig) -> Vec<Self> {
        vec![
            MethodConfig::Hcvr { sweep: sweep.clone() },
            MethodConfig::AnovaF { k },
            MethodConfig::MutualInfo { k, n_bins: DEFAULT_BINS },
            MethodConfig::Mrmr { k, n_bins: DEFAULT_BINS },
        ]
    }

    /// Column label, e.g. `hcvr` or `mi_k10`.
    pub fn label(&self) -> String {
        match self {
            MethodConfig::Hcvr { .. } => "hcvr".into(),
            MethodConfig::AnovaF { k } => format!("anova_f_k{k}"),
            MethodConfig::MutualInfo { k, .. } => format!("mi_k{k}"),
            MethodConfig::Mrmr { k, .. } => format!("mrmr_k{k}"),
        }
    }

    /// Subset chosen by a filter method; `None` for HCVR, which depends on
    /// the classifier.
    fn filter_subset(&self, train: &Dataset) -> Result<Option<Vec<usize>>> {
        Ok(match *self {
            MethodConfig::Hcvr { .. } => None,
            MethodConfig::AnovaF { k } => Some(k_best(&anova_f_scores(train)?, k)?),
            MethodConfig::MutualInfo { k, n_bins } => Some(k_best(&mutual_info_scores(train, n_bins)?, k)?),
            MethodConfig::Mrmr { k, n_bins } => Some(mrmr_select_with(train, k, n_bins)?),
        })
    }
}

impl fmt::Display for MethodConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub accuracy: f64,
    pub precision: f64,
    pub n_selected: usize,
    /// Tuned threshold, HCVR cells only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub precision_undefined: bool,
    /// Selected feature indices.
    pub features: Vec<usize>,
}

/// Rows are classifiers, columns are selection methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub classifiers: Vec<String>,
    pub methods: Vec<String>,
    pub cells: Vec<Vec<Cell>>,
}

impl ComparisonTable {
    pub fn cell(&self, classifier: &str, method: &str) -> Option<&Cell> {
        let r = self.classifiers.iter().position(|c| c == classifier)?;
        let c = self.methods.iter().position(|m| m == method)?;
        Some(&self.cells[r][c])
    }

    /// One row per classifier; four columns per method:
    /// `<m>_accuracy,<m>_precision,<m>_n_selected,<m>_theta`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("classifier");
        for m in &self.methods {
            let _ = write!(out, ",{m}_accuracy,{m}_precision,{m}_n_selected,{m}_theta");
        }
        out.push('\n');
        for (name, row) in self.classifiers.iter().zip(&self.cells) {
            out.push_str(name);
            for cell in row {
                let theta = cell.theta.map(|t| t.to_string()).unwrap_or_default();
                let _ = write!(out, ",{:.6},{:.6},{},{}", cell.accuracy, cell.precision, cell.n_selected, theta);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Accuracy grid as percentages, HCVR cells annotated `(T=theta, count)`.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| classifier |");
        for m in &self.methods {
            let _ = write!(out, " {m} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.methods.len()));
        out.push('\n');
        for (name, row) in self.classifiers.iter().zip(&self.cells) {
            let _ = write!(out, "| {name} |");
            for cell in row {
                match cell.theta {
                    Some(t) => {
                        let _ = write!(out, " {:.2} (T={t}, {}) |", cell.accuracy * 100.0, cell.n_selected);
                    }
                    None => {
                        let _ = write!(out, " {:.2} ({}) |", cell.accuracy * 100.0, cell.n_selected);
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

fn score(spec: &ClassifierSpec, train: &Dataset, test: &Dataset, subset: &[usize]) -> Result<EvalResult> {
    if subset.is_empty() {
        return Ok(evaluate_majority(train, test));
    }
    let model = classifier::train(spec, train, subset)?;
    classifier::evaluate(&model, test, subset)
}

fn cell(result: EvalResult, features: Vec<usize>, theta: Option<f64>) -> Cell {
    Cell {
        accuracy: result.accuracy,
        precision: result.precision,
        n_selected: features.len(),
        theta,
        precision_undefined: result.precision_undefined,
        features,
    }
}

/// Fills the grid. Cells are computed in parallel and assembled in input
/// order.
pub fn compare_methods(train: &Dataset, test: &Dataset, specs: &[ClassifierSpec], methods: &[MethodConfig]) -> Result<ComparisonTable> {
    if specs.is_empty() {
        return Err(Error::InvalidConfig("at least one classifier is required".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidConfig("at least one selection method is required".into()));
    }
    if train.feature_names() != test.feature_names() {
        return Err(Error::InvalidDataset("train and test have different features".into()));
    }
    for s in specs {
        s.validate()?;
    }

    let filter_subsets = methods.iter().map(|m| m.filter_subset(train)).collect::<Result<Vec<_>>>()?;
    let needs_profile = methods.iter().any(|m| matches!(m, MethodConfig::Hcvr { .. }));
    let profile = if needs_profile { Some(build_profile(train)?) } else { None };

    let jobs: Vec<(usize, usize)> = (0..specs.len()).flat_map(|r| (0..methods.len()).map(move |c| (r, c))).collect();
    let flat: Vec<Cell> = jobs
        .par_iter()
        .map(|&(r, c)| {
            let spec = &specs[r];
            match (&methods[c], &filter_subsets[c]) {
                (MethodConfig::Hcvr { sweep: cfg }, _) => {
                    let trace = sweep(train, spec, cfg)?;
                    let profile = profile.as_ref().expect("profile built for HCVR");
                    let report = select(profile, Threshold::new(trace.best_theta)?)?;
                    let result = score(spec, train, test, &report.selected)?;
                    Ok(cell(result, report.selected, Some(trace.best_theta)))
                }
                (_, Some(subset)) => Ok(cell(score(spec, train, test, subset)?, subset.clone(), None)),
                (_, None) => unreachable!("filter methods always yield a subset"),
            }
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(specs.len());
    let mut it = flat.into_iter();
    for _ in specs {
        cells.push(it.by_ref().take(methods.len()).collect());
    }
    Ok(ComparisonTable {
        classifiers: specs.iter().map(|s| s.id().to_string()).collect(),
        methods: methods.iter().map(MethodConfig::label).collect(),
        cells,
    })
}
