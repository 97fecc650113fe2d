//! Tabular binary-classification datasets: loading, splitting, scaling.
//!
//! A [`Dataset`] is stored column-major since nearly everything downstream
//! (correlations, binning, per-feature scores) walks one feature at a time.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Immutable numeric feature matrix with a binary target.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
    target: Vec<u8>,
    feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from feature columns, checking every invariant.
    pub fn new(columns: Vec<Vec<f64>>, target: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        let n_rows = target.len();
        if n_rows == 0 {
            return Err(Error::EmptyDataset);
        }
        if columns.len() != feature_names.len() {
            return Err(Error::InvalidDataset(format!(
                "{} columns but {} feature names",
                columns.len(),
                feature_names.len()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "column {j} has {} rows, target has {n_rows}",
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::ParseError { row: i + 1, col: j + 1, value: col[i].to_string() });
            }
        }
        if let Some(i) = target.iter().position(|&t| t > 1) {
            return Err(Error::LabelError { row: i + 1, value: target[i].to_string() });
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate feature name {name:?}")));
            }
        }
        Ok(Self { columns, target, feature_names })
    }

    /// Convenience constructor with default `f0..f{n-1}` names.
    pub fn from_columns(columns: Vec<Vec<f64>>, target: Vec<u8>) -> Result<Self> {
        let names = default_names(columns.len());
        Self::new(columns, target, names)
    }

    pub fn from_rows(rows: &[Vec<f64>], target: Vec<u8>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); n_cols];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidDataset(format!("row {i} has {} values, expected {n_cols}", row.len())));
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::from_columns(columns, target)
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Number of rows labelled 0 and 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.target.iter().filter(|&&t| t == 1).count();
        [self.n_rows() - pos, pos]
    }

    /// Label of the larger class, 0 on a tie.
    pub fn majority_class(&self) -> u8 {
        let [neg, pos] = self.class_counts();
        u8::from(pos > neg)
    }

    pub fn has_both_classes(&self) -> bool {
        let [neg, pos] = self.class_counts();
        neg > 0 && pos > 0
    }

    /// Rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let columns = self.columns.iter().map(|c| indices.iter().map(|&i| c[i]).collect()).collect();
        let target = indices.iter().map(|&i| self.target[i]).collect();
        Self::new(columns, target, self.feature_names.clone())
    }

    /// Columns at `indices`, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        for &j in indices {
            if j >= self.n_cols() {
                return Err(Error::FeatureOutOfRange { index: j, n_cols: self.n_cols() });
            }
        }
        let columns = indices.iter().map(|&j| self.columns[j].clone()).collect();
        let names = indices.iter().map(|&j| self.feature_names[j].clone()).collect();
        Self::new(columns, self.target.clone(), names)
    }

    /// Vertical concatenation; feature names must agree.
    pub fn concat(&self, other: &Dataset) -> Result<Self> {
        if self.feature_names != other.feature_names {
            return Err(Error::InvalidDataset("cannot concatenate datasets with different features".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        let target = self.target.iter().chain(&other.target).copied().collect();
        Self::new(columns, target, self.feature_names.clone())
    }

    /// SHA-256 over names, values and labels; hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n_rows() as u64).to_le_bytes());
        hasher.update((self.n_cols() as u64).to_le_bytes());
        for name in &self.feature_names {
            hasher.update(name.as_bytes());
            hasher.update([0u8]);
        }
        for col in &self.columns {
            for v in col {
                hasher.update(v.to_bits().to_le_bytes());
            }
        }
        hasher.update(&self.target);
        hex::encode(hasher.finalize())
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|j| format!("f{j}")).collect()
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    /// Column index; negative values count from the end (`-1` is the last).
    Index(i64),
    Name(String),
}

impl Default for LabelColumn {
    fn default() -> Self {
        LabelColumn::Index(-1)
    }
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().parse::<i64>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.trim().to_string()),
        })
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Name(n) => f.write_str(n),
        }
    }
}

impl LabelColumn {
    fn resolve(&self, width: usize, header: Option<&[String]>) -> Result<usize> {
        match self {
            LabelColumn::Index(i) => {
                let idx = if *i < 0 { width as i64 + i } else { *i };
                if idx < 0 || idx >= width as i64 {
                    return Err(Error::MissingLabelColumn(i.to_string()));
                }
                Ok(idx as usize)
            }
            LabelColumn::Name(name) => header
                .and_then(|h| h.iter().position(|c| c == name))
                .ok_or_else(|| Error::MissingLabelColumn(name.clone())),
        }
    }
}

/// Reads a comma-separated numeric table.
///
/// Row and column numbers in [`Error::ParseError`] are 1-based and refer to
/// the physical file, header line included.
pub fn load_csv(path: impl AsRef<Path>, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut records = reader.records();

    let header: Option<Vec<String>> = if has_header {
        match records.next() {
            Some(rec) => Some(rec?.iter().map(str::to_string).collect()),
            None => return Err(Error::EmptyDataset),
        }
    } else {
        None
    };

    let mut label_idx = None;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut target = Vec::new();
    let first_line = if has_header { 2 } else { 1 };

    for (offset, rec) in records.enumerate() {
        let rec = rec?;
        let row = first_line + offset;
        let width = rec.len();
        let li = match label_idx {
            Some(li) => li,
            None => {
                let li = label.resolve(width, header.as_deref())?;
                columns = vec![Vec::new(); width - 1];
                label_idx = Some(li);
                li
            }
        };
        if width != columns.len() + 1 {
            return Err(Error::InvalidDataset(format!(
                "row {row} has {width} fields, expected {}",
                columns.len() + 1
            )));
        }
        let mut feature = 0;
        for (c, cell) in rec.iter().enumerate() {
            if c == li {
                target.push(parse_label(cell, row)?);
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::ParseError { row, col: c + 1, value: cell.to_string() })?;
            columns[feature].push(v);
            feature += 1;
        }
    }

    let Some(li) = label_idx else {
        return Err(Error::EmptyDataset);
    };
    let names = match header {
        Some(h) => h.into_iter().enumerate().filter(|&(c, _)| c != li).map(|(_, n)| n).collect(),
        None => default_names(columns.len()),
    };
    Dataset::new(columns, target, names)
}

fn parse_label(cell: &str, row: usize) -> Result<u8> {
    match cell.parse::<f64>() {
        Ok(0.0) => Ok(0),
        Ok(1.0) => Ok(1),
        _ => Err(Error::LabelError { row, value: cell.to_string() }),
    }
}

/// How to carve a held-out set from a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { test_fraction: 0.2, seed: 42, stratified: true }
    }
}

impl SplitSpec {
    pub fn new(test_fraction: f64, seed: u64) -> Self {
        Self { test_fraction, seed, ..Self::default() }
    }

    /// Test-set size for `n` rows: `ceil(n * test_fraction)`.
    pub fn n_test(&self, n: usize) -> Result<usize> {
        let f = self.test_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::InvalidFraction(f));
        }
        // The small offset keeps exact products such as 10 * 0.2 from
        // rounding up past their true value.
        let n_test = ((n as f64 * f) - 1e-9).ceil().max(0.0) as usize;
        if n_test == 0 || n_test >= n {
            return Err(Error::InvalidFraction(f));
        }
        Ok(n_test)
    }
}

/// Train and test row indices, each sorted ascending.
pub fn split_indices(d: &Dataset, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = d.n_rows();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let n_test = spec.n_test(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut test = Vec::with_capacity(n_test);
    let mut train = Vec::with_capacity(n - n_test);

    if spec.stratified {
        let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, &t) in d.target().iter().enumerate() {
            by_class[t as usize].push(i);
        }
        for (class, rows) in by_class.iter().enumerate() {
            if rows.len() < 2 {
                return Err(Error::StratifyError { class: class as u8, count: rows.len() });
            }
        }
        let quotas = apportion(n_test, [by_class[0].len(), by_class[1].len()], n);
        for (rows, quota) in by_class.iter_mut().zip(quotas) {
            rows.shuffle(&mut rng);
            test.extend_from_slice(&rows[..quota]);
            train.extend_from_slice(&rows[quota..]);
        }
    } else {
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut rng);
        test.extend_from_slice(&rows[..n_test]);
        train.extend_from_slice(&rows[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Largest-remainder split of `total` across classes in proportion to their
/// sizes. Ties in remainder go to the lower class.
fn apportion(total: usize, sizes: [usize; 2], n: usize) -> [usize; 2] {
    let exact = sizes.map(|s| s as f64 * total as f64 / n as f64);
    let mut quota = exact.map(|e| e.floor() as usize);
    let mut left = total - quota.iter().sum::<usize>();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())));
    for &c in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if quota[c] < sizes[c] {
            quota[c] += 1;
            left -= 1;
        }
    }
    quota
}

/// Row-disjoint train/test partition.
pub fn train_test_split(d: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(d, spec)?;
    Ok((d.select_rows(&train)?, d.select_rows(&test)?))
}

/// Per-column affine scaling fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl ScalerParams {
    /// Column means and population standard deviations. Constant columns
    /// get a std of exactly 0.
    pub fn fit(d: &Dataset) -> Self {
        let n = d.n_rows() as f64;
        let mut means = Vec::with_capacity(d.n_cols());
        let mut stds = Vec::with_capacity(d.n_cols());
        for col in d.columns() {
            let mean = col.iter().sum::<f64>() / n;
            let constant = col.iter().all(|&v| v == col[0]);
            let std = if constant {
                0.0
            } else {
                (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
            };
            means.push(if constant { col[0] } else { mean });
            stds.push(std);
        }
        Self { means, stds }
    }

    pub fn transform_value(&self, col: usize, v: f64) -> f64 {
        let std = self.stds[col];
        if std == 0.0 {
            0.0
        } else {
            (v - self.means[col]) / std
        }
    }

    pub fn transform(&self, d: &Dataset) -> Result<Dataset> {
        if d.n_cols() != self.means.len() {
            return Err(Error::LengthMismatch(d.n_cols(), self.means.len()));
        }
        let columns = d
            .columns()
            .iter()
            .enumerate()
            .map(|(j, col)| col.iter().map(|&v| self.transform_value(j, v)).collect())
            .collect();
        Dataset::new(columns, d.target().to_vec(), d.feature_names().to_vec())
    }

    /// Undoes [`transform`](Self::transform). Constant columns come back as
    /// their training value.
    pub fn inverse_transform(&self, d: &Dataset) -> Result<Dataset> {
        if d.n_cols() != self.means.len() {
            return Err(Error::LengthMismatch(d.n_cols(), self.means.len()));
        }
        let columns = d
            .columns()
            .iter()
            .enumerate()
            .map(|(j, col)| col.iter().map(|&z| z * self.stds[j] + self.means[j]).collect())
            .collect();
        Dataset::new(columns, d.target().to_vec(), d.feature_names().to_vec())
    }
}

/// Standardizes `train` to zero mean and unit variance per column and
/// applies the same parameters to each of `others`.
pub fn standardize(train: &Dataset, others: &[Dataset]) -> Result<(Dataset, Vec<Dataset>, ScalerParams)> {
    let params = ScalerParams::fit(train);
    let scaled = params.transform(train)?;
    let rest = others.iter().map(|d| params.transform(d)).collect::<Result<Vec<_>>>()?;
    Ok((scaled, rest, params))
}
