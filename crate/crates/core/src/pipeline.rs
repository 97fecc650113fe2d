//! End-to-end runs driven by a serializable [`RunConfig`].
//!
//! Output layout inside `output_dir`:
//!
//! ```text
//! run-config.json      the config that produced the directory
//! selection.json       select: SelectionReport
//! selection.txt        select: kept/dropped listing with vote counts
//! sweep.csv            sweep: trace of the first classifier
//! sweep-<id>.csv       sweep: one trace per classifier
//! sweep.json           sweep: all traces
//! comparison.csv|json  compare: the classifier x method grid
//! baseline-<m>.json    baseline: RankedFeatures
//! ```
//!
//! Nothing written depends on wall-clock time, so rerunning a saved config
//! on the same data reproduces every file byte for byte.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{anova_f_scores, mrmr_select_with, mutual_info_scores, RankedFeatures, RankingMethod, DEFAULT_BINS};
use crate::classifier::{ClassifierKind, ClassifierSpec};
use crate::compare::{compare_methods, ComparisonTable, MethodConfig};
use crate::correlation::{build_profile, CorrelationProfile, ProfileCache, Threshold};
use crate::dataset::{load_csv, train_test_split, Dataset, LabelColumn, SplitSpec};
use crate::seed::{derive, Stream};
use crate::sweep::{sweep, SweepConfig, SweepTrace};
use crate::voting::{select, SelectionReport};
use crate::{Error, Result};

pub const CONFIG_FILE: &str = "run-config.json";
pub const SELECTION_FILE: &str = "selection.json";
pub const SELECTION_SUMMARY_FILE: &str = "selection.txt";
pub const SWEEP_CSV_FILE: &str = "sweep.csv";
pub const SWEEP_JSON_FILE: &str = "sweep.json";
pub const COMPARISON_STEM: &str = "comparison";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data_path: PathBuf,
    pub label_column: LabelColumn,
    pub has_header: bool,
    /// Master seed; the split, sweep and classifier seeds derive from it.
    pub seed: u64,
    pub split: SplitSpec,
    pub sweep: SweepConfig,
    pub classifiers: Vec<ClassifierSpec>,
    /// Method names: `hcvr`, `anova_f` (alias `cfs`), `mi`, `mrmr`.
    pub methods: Vec<String>,
    /// Feature count for the k-best and mRMR filters.
    pub k: usize,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Defaults: last column is the label, no header, stratified 80/20
    /// split, sweep over [0, 0.5] in steps of 0.02, all three classifiers,
    /// HCVR against the three filters at k = 10.
    pub fn new(data_path: impl Into<PathBuf>, seed: u64) -> Self {
        let mut cfg = Self {
            data_path: data_path.into(),
            label_column: LabelColumn::default(),
            has_header: false,
            seed,
            split: SplitSpec::default(),
            sweep: SweepConfig::default(),
            classifiers: ClassifierKind::ALL.iter().map(|&k| ClassifierSpec::new(k, 0)).collect(),
            methods: ["hcvr", "anova_f", "mi", "mrmr"].map(String::from).to_vec(),
            k: 10,
            output_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
        };
        cfg.reseed(seed);
        cfg
    }

    /// Sets the master seed and re-derives every dependent seed.
    pub fn reseed(&mut self, seed: u64) {
        self.seed = seed;
        self.split.seed = derive(seed, Stream::Split);
        self.sweep.seed = derive(seed, Stream::Validation);
        let classifier_seed = derive(seed, Stream::Classifier);
        for c in &mut self.classifiers {
            c.seed = classifier_seed;
        }
    }

    pub fn with_classifiers(mut self, kinds: &[ClassifierKind]) -> Self {
        let seed = derive(self.seed, Stream::Classifier);
        self.classifiers = kinds.iter().map(|&k| ClassifierSpec::new(k, seed)).collect();
        self
    }

    pub fn method_configs(&self) -> Result<Vec<MethodConfig>> {
        self.methods.iter().map(|m| MethodConfig::parse(m, self.k, &self.sweep)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.split.test_fraction > 0.0 && self.split.test_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.split.test_fraction));
        }
        self.sweep.validate()?;
        if self.classifiers.is_empty() {
            return Err(Error::InvalidConfig("no classifier configured".into()));
        }
        for c in &self.classifiers {
            c.validate()?;
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no selection method configured".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidK { k: 0, n: 0 });
        }
        self.method_configs()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::from_json(&fs::read_to_string(path)?)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.output_dir)?;
        let path = self.output_dir.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    pub fn write_config(&self) -> Result<PathBuf> {
        self.write(CONFIG_FILE, &self.to_json()?)
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        load_csv(&self.data_path, &self.label_column, self.has_header)
    }

    /// Loads the data and applies the configured split.
    pub fn train_test(&self) -> Result<(Dataset, Dataset)> {
        train_test_split(&self.load_dataset()?, &self.split)
    }

    /// Profile of `train`, through `$HCVR_CACHE_DIR` when set.
    pub fn profile(&self, train: &Dataset) -> Result<CorrelationProfile> {
        match ProfileCache::from_env() {
            Some(cache) => cache.get_or_build(train, &train.content_hash(), self.split.seed),
            None => build_profile(train),
        }
    }

    /// Selection at a fixed threshold on the training split.
    pub fn run_select(&self, theta: f64) -> Result<SelectionReport> {
        let theta = Threshold::new(theta)?;
        let (train, _) = self.train_test()?;
        let report = select(&self.profile(&train)?, theta)?.with_provenance(train.content_hash(), self.seed);
        self.write(SELECTION_FILE, &(serde_json::to_string_pretty(&report)? + "\n"))?;
        self.write(SELECTION_SUMMARY_FILE, &report.summary(train.feature_names()))?;
        self.write_config()?;
        Ok(report)
    }

    /// Threshold sweep for each configured classifier.
    pub fn run_sweep(&self) -> Result<Vec<SweepTrace>> {
        self.validate()?;
        let (train, _) = self.train_test()?;
        let traces = self
            .classifiers
            .iter()
            .map(|c| sweep(&train, c, &self.sweep))
            .collect::<Result<Vec<_>>>()?;
        for t in &traces {
            self.write(&format!("sweep-{}.csv", t.classifier_id), &t.to_csv())?;
        }
        self.write(SWEEP_CSV_FILE, &traces[0].to_csv())?;
        self.write(SWEEP_JSON_FILE, &(serde_json::to_string_pretty(&traces)? + "\n"))?;
        self.write_config()?;
        Ok(traces)
    }

    /// Classifier x method grid on the held-out split.
    pub fn run_compare(&self) -> Result<ComparisonTable> {
        self.validate()?;
        let (train, test) = self.train_test()?;
        let table = compare_methods(&train, &test, &self.classifiers, &self.method_configs()?)?;
        let body = match self.format {
            OutputFormat::Csv => table.to_csv(),
            OutputFormat::Json => table.to_json()?,
        };
        self.write(&format!("{COMPARISON_STEM}.{}", self.format.extension()), &body)?;
        self.write_config()?;
        Ok(table)
    }

    /// Full ranking of the training split by one filter. mRMR has no
    /// per-feature score, so its scores are `n - position` in pick order.
    pub fn run_baseline(&self, method: RankingMethod) -> Result<RankedFeatures> {
        let (train, _) = self.train_test()?;
        let ranked = match method {
            RankingMethod::AnovaF => anova_f_scores(&train)?,
            RankingMethod::MutualInfo => mutual_info_scores(&train, DEFAULT_BINS)?,
            RankingMethod::Mrmr => {
                let n = train.n_cols();
                let order = mrmr_select_with(&train, n, DEFAULT_BINS)?;
                let mut scores = vec![0.0; n];
                for (pos, &j) in order.iter().enumerate() {
                    scores[j] = (n - pos) as f64;
                }
                RankedFeatures { method, scores, order }
            }
        };
        self.write(&format!("baseline-{}.json", method.id()), &(serde_json::to_string_pretty(&ranked)? + "\n"))?;
        self.write_config()?;
        Ok(ranked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let mut cfg = RunConfig::new("data/x.csv", 7);
        cfg.sweep.step = 0.01;
        cfg.label_column = LabelColumn::Name("spam".into());
        cfg.classifiers[0] = cfg.classifiers[0].clone().with_param("max_depth", 5.0);
        let back = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn seeds_fan_out() {
        let a = RunConfig::new("x", 1);
        let b = RunConfig::new("x", 2);
        assert_ne!(a.split.seed, b.split.seed);
        assert_ne!(a.split.seed, a.sweep.seed);
        assert_eq!(a, RunConfig::new("x", 1));
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::new("x", 1);
        assert!(cfg.validate().is_ok());
        cfg.methods.clear();
        assert!(cfg.validate().unwrap_err().is_usage());
        let mut cfg = RunConfig::new("x", 1);
        cfg.methods.push("rfe".into());
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::new("x", 1);
        cfg.sweep.theta_max = 2.0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn format_parse() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
