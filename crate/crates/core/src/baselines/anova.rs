use rayon::prelude::*;

use super::{RankedFeatures, RankingMethod};
use crate::dataset::Dataset;
use crate::{Error, Result};

/// One-way ANOVA F statistic of each feature grouped by the binary label.
///
/// A feature that is constant within each class but differs between them
/// has zero within-class variance; it scores `f64::MAX` so it ranks first
/// while staying finite. A feature with no between-class difference scores 0.
pub fn anova_f_scores(d: &Dataset) -> Result<RankedFeatures> {
    if !d.has_both_classes() {
        return Err(Error::SingleClass);
    }
    if d.n_rows() < 3 {
        return Err(Error::TooFewSamples(d.n_rows()));
    }
    let target = d.target();
    let scores = d.columns().par_iter().map(|col| f_statistic(col, target)).collect();
    Ok(RankedFeatures::from_scores(RankingMethod::AnovaF, scores))
}

fn f_statistic(col: &[f64], target: &[u8]) -> f64 {
    let n = col.len() as f64;
    let mut sums = [0.0; 2];
    let mut counts = [0usize; 2];
    for (&v, &t) in col.iter().zip(target) {
        sums[t as usize] += v;
        counts[t as usize] += 1;
    }
    let means = [sums[0] / counts[0] as f64, sums[1] / counts[1] as f64];
    let grand = (sums[0] + sums[1]) / n;
    let ss_between: f64 = (0..2).map(|g| counts[g] as f64 * (means[g] - grand).powi(2)).sum();
    let ss_within: f64 = col.iter().zip(target).map(|(&v, &t)| (v - means[t as usize]).powi(2)).sum();

    let within_constant = (0..2).all(|g| {
        let mut it = col.iter().zip(target).filter(|(_, &t)| t as usize == g).map(|(&v, _)| v);
        let first = it.next();
        it.all(|v| Some(v) == first)
    });
    if within_constant {
        return if means[0] == means[1] { 0.0 } else { f64::MAX };
    }
    let df_between = 1.0;
    let df_within = n - 2.0;
    let f = (ss_between / df_between) / (ss_within / df_within);
    if f.is_finite() {
        f
    } else {
        f64::MAX
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    /// Textbook one-way ANOVA written independently of `f_statistic`.
    fn oracle(groups: &[Vec<f64>]) -> f64 {
        let all: Vec<f64> = groups.iter().flatten().copied().collect();
        let n = all.len() as f64;
        let k = groups.len() as f64;
        let grand = all.iter().sum::<f64>() / n;
        let mut ssb = 0.0;
        let mut ssw = 0.0;
        for g in groups {
            let m = g.iter().sum::<f64>() / g.len() as f64;
            ssb += g.len() as f64 * (m - grand) * (m - grand);
            ssw += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
        }
        (ssb / (k - 1.0)) / (ssw / (n - k))
    }

    #[test]
    fn hand_computed_value() {
        let d = Dataset::from_columns(vec![vec![1.0, 2.0, 3.0, 4.0]], vec![0, 0, 1, 1]).unwrap();
        let r = anova_f_scores(&d).unwrap();
        assert_eq!(oracle(&[vec![1.0, 2.0], vec![3.0, 4.0]]), 8.0);
        assert_relative_eq!(r.scores[0], 8.0, max_relative = 1e-12);
    }

    #[test]
    fn perfect_separator_ranks_first() {
        let target = vec![0, 1, 0, 1, 1, 0, 0, 1];
        let label: Vec<f64> = target.iter().map(|&t| f64::from(t)).collect();
        let noisy = vec![0.3, 0.9, 0.2, 0.4, 0.8, 0.5, 0.1, 0.7];
        let d = Dataset::from_columns(vec![noisy, label], target).unwrap();
        let r = anova_f_scores(&d).unwrap();
        assert_eq!(r.order[0], 1);
        assert_eq!(r.scores[1], f64::MAX);
    }

    #[test]
    fn identical_distributions_score_zero() {
        let target = vec![0, 0, 0, 1, 1, 1];
        let same = vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0];
        let constant = vec![4.0; 6];
        let d = Dataset::from_columns(vec![same, constant], target).unwrap();
        let r = anova_f_scores(&d).unwrap();
        assert_eq!(r.scores, vec![0.0, 0.0]);
    }

    #[test]
    fn matches_oracle_on_uneven_groups() {
        let col = vec![3.1, 0.2, 5.5, 2.2, 9.0, 4.4, 1.0, 7.7, 6.1];
        let target = vec![0, 0, 1, 0, 1, 1, 0, 1, 0];
        let groups = [0u8, 1].map(|g| col.iter().zip(&target).filter(|(_, &t)| t == g).map(|(&v, _)| v).collect::<Vec<_>>());
        let d = Dataset::from_columns(vec![col], target).unwrap();
        assert_relative_eq!(anova_f_scores(&d).unwrap().scores[0], oracle(&groups), max_relative = 1e-12);
    }

    #[test]
    fn affine_invariance() {
        let col = vec![3.1, 0.2, 5.5, 2.2, 9.0, 4.4, 1.0, 7.7, 6.1];
        let target = vec![0, 0, 1, 0, 1, 1, 0, 1, 0];
        let moved: Vec<f64> = col.iter().map(|v| -3.5 * v + 12.0).collect();
        let d = Dataset::from_columns(vec![col, moved], target).unwrap();
        let s = anova_f_scores(&d).unwrap().scores;
        assert!((s[0] - s[1]).abs() <= 1e-9 * s[0].max(1.0));
    }

    #[test]
    fn single_class_rejected() {
        let d = Dataset::from_columns(vec![vec![1.0, 2.0, 3.0]], vec![1, 1, 1]).unwrap();
        assert!(matches!(anova_f_scores(&d), Err(Error::SingleClass)));
    }
}
