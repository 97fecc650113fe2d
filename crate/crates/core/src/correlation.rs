//! Pearson correlations between features (P2P) and between each feature and
//! the target (P2T).

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Pearson correlation coefficient, clamped to `[-1, 1]`.
///
/// Returns 0 when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples(x.len()));
    }
    if is_constant(x) || is_constant(y) {
        return Ok(0.0);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    Ok(clamp_unit(sxy / (sxx.sqrt() * syy.sqrt())))
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

fn clamp_unit(r: f64) -> f64 {
    r.clamp(-1.0, 1.0)
}

/// Correlation threshold in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&theta) {
            Ok(Self(theta))
        } else {
            Err(Error::InvalidThreshold(theta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// High iff `|rho| >= theta`.
    pub fn classify(self, rho: f64) -> CorrelationClass {
        if rho.abs() >= self.0 {
            CorrelationClass::High
        } else {
            CorrelationClass::Low
        }
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrelationClass {
    High,
    Low,
}

impl CorrelationClass {
    pub fn symbol(self) -> char {
        match self {
            CorrelationClass::High => 'H',
            CorrelationClass::Low => 'L',
        }
    }
}

pub fn classify(rho: f64, theta: f64) -> Result<CorrelationClass> {
    Ok(Threshold::new(theta)?.classify(rho))
}

/// Feature-feature correlation matrix plus feature-target correlations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    p2p: Vec<Vec<f64>>,
    p2t: Vec<f64>,
}

impl CorrelationProfile {
    /// Wraps precomputed correlations. The matrix must be square, symmetric,
    /// and every value must lie in `[-1, 1]`.
    pub fn from_parts(p2p: Vec<Vec<f64>>, p2t: Vec<f64>) -> Result<Self> {
        let n = p2t.len();
        if p2p.len() != n {
            return Err(Error::LengthMismatch(p2p.len(), n));
        }
        for (i, row) in p2p.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch(row.len(), n));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(-1.0..=1.0).contains(&v) || v != p2p[j][i] {
                    return Err(Error::InvalidDataset(format!("p2p[{i}][{j}] = {v} is not a valid symmetric correlation")));
                }
            }
        }
        if let Some(v) = p2t.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
            return Err(Error::InvalidDataset(format!("p2t value {v} outside [-1, 1]")));
        }
        Ok(Self { p2p, p2t })
    }

    pub fn n(&self) -> usize {
        self.p2t.len()
    }

    #[inline]
    pub fn p2p(&self, i: usize, j: usize) -> f64 {
        self.p2p[i][j]
    }

    #[inline]
    pub fn p2t(&self, i: usize) -> f64 {
        self.p2t[i]
    }

    pub fn p2p_matrix(&self) -> &[Vec<f64>] {
        &self.p2p
    }

    pub fn p2t_vector(&self) -> &[f64] {
        &self.p2t
    }
}

/// Centered copy of a column and its Euclidean norm, or `None` when the
/// column is constant.
fn centered(col: &[f64]) -> Option<(Vec<f64>, f64)> {
    if is_constant(col) {
        return None;
    }
    let mean = col.iter().sum::<f64>() / col.len() as f64;
    let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    Some((c, norm))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Computes all P2P and P2T correlations of `d`, treating the target as a
/// real-valued 0/1 column.
pub fn build_profile(d: &Dataset) -> Result<CorrelationProfile> {
    let n_rows = d.n_rows();
    if n_rows < 2 {
        return Err(Error::TooFewSamples(n_rows));
    }
    let n = d.n_cols();
    let cols: Vec<Option<(Vec<f64>, f64)>> = d.columns().par_iter().map(|c| centered(c)).collect();
    let target: Vec<f64> = d.target().iter().map(|&t| f64::from(t)).collect();
    let target = centered(&target);

    let corr = |a: &Option<(Vec<f64>, f64)>, b: &Option<(Vec<f64>, f64)>| match (a, b) {
        (Some((ca, na)), Some((cb, nb))) => clamp_unit(dot(ca, cb) / (na * nb)),
        _ => 0.0,
    };

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| corr(&cols[i], &cols[j])).collect())
        .collect();

    let mut p2p = vec![vec![0.0; n]; n];
    for i in 0..n {
        p2p[i][i] = if cols[i].is_some() { 1.0 } else { 0.0 };
        for (off, &v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            p2p[i][j] = v;
            p2p[j][i] = v;
        }
    }
    let p2t = cols.iter().map(|c| corr(c, &target)).collect();
    Ok(CorrelationProfile { p2p, p2t })
}

/// On-disk JSON cache of correlation profiles, keyed by dataset content hash
/// and split seed.
#[derive(Debug, Clone)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub const ENV_VAR: &'static str = "HCVR_CACHE_DIR";

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$HCVR_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(Self::ENV_VAR).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, dataset_hash: &str, seed: u64) -> PathBuf {
        self.dir.join(format!("profile-{dataset_hash}-{seed}.json"))
    }

    pub fn load(&self, dataset_hash: &str, seed: u64) -> Option<CorrelationProfile> {
        let text = fs::read_to_string(self.path(dataset_hash, seed)).ok()?;
        let raw: CorrelationProfile = serde_json::from_str(&text).ok()?;
        CorrelationProfile::from_parts(raw.p2p, raw.p2t).ok()
    }

    pub fn store(&self, dataset_hash: &str, seed: u64, profile: &CorrelationProfile) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.path(dataset_hash, seed), serde_json::to_string(profile)?)?;
        Ok(())
    }

    /// Returns the cached profile or builds and stores it.
    pub fn get_or_build(&self, d: &Dataset, dataset_hash: &str, seed: u64) -> Result<CorrelationProfile> {
        if let Some(p) = self.load(dataset_hash, seed) {
            if p.n() == d.n_cols() {
                return Ok(p);
            }
        }
        let p = build_profile(d)?;
        self.store(dataset_hash, seed, &p)?;
        Ok(p)
    }
}
