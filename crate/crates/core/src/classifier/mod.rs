//! Small deterministic classifiers used to score feature subsets.
//!
//! Absolute accuracy is not meant to match any other library. What matters
//! is that every selection method is scored by the same models under the
//! same seeds.

mod logistic;
mod metrics;
mod naive_bayes;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::{Error, Result};

pub use logistic::LogisticSgd;
pub use metrics::EvalResult;
pub use naive_bayes::GaussianNb;
pub use tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    DecisionTree,
    LogisticSgd,
    GaussianNb,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::DecisionTree, ClassifierKind::LogisticSgd, ClassifierKind::GaussianNb];

    pub fn id(self) -> &'static str {
        match self {
            ClassifierKind::DecisionTree => "decision_tree",
            ClassifierKind::LogisticSgd => "logistic_sgd",
            ClassifierKind::GaussianNb => "gaussian_nb",
        }
    }

    /// Hyperparameters and their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            ClassifierKind::DecisionTree => &[("max_depth", 20.0), ("min_samples_split", 2.0), ("min_samples_leaf", 1.0)],
            ClassifierKind::LogisticSgd => &[("learning_rate", 0.01), ("epochs", 100.0), ("l2", 1e-4)],
            ClassifierKind::GaussianNb => &[("var_smoothing", 1e-9)],
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "decision_tree" | "dt" | "tree" | "cart" => Ok(ClassifierKind::DecisionTree),
            "logistic_sgd" | "sgd" | "logistic" | "lr" => Ok(ClassifierKind::LogisticSgd),
            "gaussian_nb" | "nb" | "gnb" | "naive_bayes" => Ok(ClassifierKind::GaussianNb),
            other => Err(Error::InvalidConfig(format!("unknown classifier {other:?}"))),
        }
    }
}

/// Classifier kind plus hyperparameter overrides and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    #[serde(default)]
    pub hyperparams: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind, seed: u64) -> Self {
        Self { kind, hyperparams: BTreeMap::new(), seed }
    }

    pub fn decision_tree() -> Self {
        Self::new(ClassifierKind::DecisionTree, 0)
    }

    pub fn logistic_sgd() -> Self {
        Self::new(ClassifierKind::LogisticSgd, 0)
    }

    pub fn gaussian_nb() -> Self {
        Self::new(ClassifierKind::GaussianNb, 0)
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.hyperparams.insert(name.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    /// Value of `name`: the override if present, else the default.
    pub fn param(&self, name: &str) -> f64 {
        self.hyperparams.get(name).copied().unwrap_or_else(|| {
            self.kind
                .defaults()
                .iter()
                .find(|(n, _)| *n == name)
                .map(|&(_, v)| v)
                .unwrap_or(f64::NAN)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, reason: &str| Err(Error::InvalidHyperparameter { name: name.into(), reason: reason.into() });
        for (name, &value) in &self.hyperparams {
            if !self.kind.defaults().iter().any(|(n, _)| n == name) {
                return bad(name, &format!("not a {} hyperparameter", self.kind));
            }
            if !value.is_finite() {
                return bad(name, "must be finite");
            }
        }
        let int_at_least = |name: &str, min: f64| {
            let v = self.param(name);
            if v < min || v.fract() != 0.0 {
                bad(name, &format!("must be an integer >= {min}"))
            } else {
                Ok(())
            }
        };
        match self.kind {
            ClassifierKind::DecisionTree => {
                int_at_least("max_depth", 1.0)?;
                int_at_least("min_samples_split", 2.0)?;
                int_at_least("min_samples_leaf", 1.0)?;
            }
            ClassifierKind::LogisticSgd => {
                if self.param("learning_rate") <= 0.0 {
                    return bad("learning_rate", "must be > 0");
                }
                int_at_least("epochs", 1.0)?;
                if self.param("l2") < 0.0 {
                    return bad("l2", "must be >= 0");
                }
            }
            ClassifierKind::GaussianNb => {
                if self.param("var_smoothing") < 0.0 {
                    return bad("var_smoothing", "must be >= 0");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Tree(DecisionTree),
    Logistic(LogisticSgd),
    NaiveBayes(GaussianNb),
}

/// A trained classifier bound to the feature subset it was fitted on.
#[derive(Debug, Clone)]
pub struct Model {
    subset: Vec<usize>,
    fitted: Fitted,
}

impl Model {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        match &self.fitted {
            Fitted::Tree(m) => m.predict(row),
            Fitted::Logistic(m) => m.predict(row),
            Fitted::NaiveBayes(m) => m.predict(row),
        }
    }

    /// Predictions for every row of `d`, reading the model's subset.
    pub fn predict(&self, d: &Dataset) -> Result<Vec<u8>> {
        check_subset(d, &self.subset)?;
        Ok(rows(d, &self.subset).iter().map(|r| self.predict_row(r)).collect())
    }

    pub fn as_tree(&self) -> Option<&DecisionTree> {
        match &self.fitted {
            Fitted::Tree(t) => Some(t),
            _ => None,
        }
    }
}

fn check_subset(d: &Dataset, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&index) = subset.iter().find(|&&j| j >= d.n_cols()) {
        return Err(Error::FeatureOutOfRange { index, n_cols: d.n_cols() });
    }
    Ok(())
}

/// Row-major copy of the subset columns.
fn rows(d: &Dataset, subset: &[usize]) -> Vec<Vec<f64>> {
    (0..d.n_rows()).map(|i| subset.iter().map(|&j| d.value(i, j)).collect()).collect()
}

/// Fits `spec` on the `feature_subset` columns of `train`.
pub fn train(spec: &ClassifierSpec, train: &Dataset, feature_subset: &[usize]) -> Result<Model> {
    spec.validate()?;
    check_subset(train, feature_subset)?;
    if !train.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let x = rows(train, feature_subset);
    let y = train.target();
    let fitted = match spec.kind {
        ClassifierKind::DecisionTree => Fitted::Tree(DecisionTree::fit(
            &x,
            y,
            TreeParams {
                max_depth: spec.param("max_depth") as usize,
                min_samples_split: spec.param("min_samples_split") as usize,
                min_samples_leaf: spec.param("min_samples_leaf") as usize,
            },
        )),
        ClassifierKind::LogisticSgd => Fitted::Logistic(LogisticSgd::fit(
            &x,
            y,
            spec.param("learning_rate"),
            spec.param("epochs") as usize,
            spec.param("l2"),
            spec.seed,
        )),
        ClassifierKind::GaussianNb => Fitted::NaiveBayes(GaussianNb::fit(&x, y, spec.param("var_smoothing"))),
    };
    Ok(Model { subset: feature_subset.to_vec(), fitted })
}

/// Scores `model` on `test`. `feature_subset` must equal the training subset.
pub fn evaluate(model: &Model, test: &Dataset, feature_subset: &[usize]) -> Result<EvalResult> {
    if feature_subset != model.subset() {
        return Err(Error::SubsetMismatch);
    }
    let predicted = model.predict(test)?;
    Ok(EvalResult::from_predictions(test.target(), &predicted))
}

/// Scores the constant majority-class predictor of `train` on `test`.
pub fn evaluate_majority(train: &Dataset, test: &Dataset) -> EvalResult {
    let label = train.majority_class();
    EvalResult::from_predictions(test.target(), &vec![label; test.n_rows()])
}
