//! Gaussian naive Bayes for two classes.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    log_prior: [f64; 2],
    means: [Vec<f64>; 2],
    vars: [Vec<f64>; 2],
}

impl GaussianNb {
    /// Per-class means and population variances. `var_smoothing` times the
    /// largest feature variance is added to every variance so constant
    /// features do not produce zero denominators.
    pub fn fit(x: &[Vec<f64>], y: &[u8], var_smoothing: f64) -> Self {
        let k = x[0].len();
        let n = x.len() as f64;
        let overall_max_var = (0..k)
            .map(|j| {
                let mean = x.iter().map(|r| r[j]).sum::<f64>() / n;
                x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n
            })
            .fold(0.0, f64::max);
        let epsilon = (var_smoothing * overall_max_var).max(f64::MIN_POSITIVE);

        let mut log_prior = [0.0; 2];
        let mut means = [vec![0.0; k], vec![0.0; k]];
        let mut vars = [vec![0.0; k], vec![0.0; k]];
        for class in 0..2u8 {
            let rows: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &t)| t == class).map(|(r, _)| r).collect();
            let c = class as usize;
            let count = rows.len() as f64;
            log_prior[c] = (count / n).ln();
            for j in 0..k {
                let mean = rows.iter().map(|r| r[j]).sum::<f64>() / count;
                let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / count;
                means[c][j] = mean;
                vars[c][j] = var + epsilon;
            }
        }
        Self { log_prior, means, vars }
    }

    pub fn log_joint(&self, row: &[f64]) -> [f64; 2] {
        let mut out = self.log_prior;
        for (c, score) in out.iter_mut().enumerate() {
            for ((&v, &m), &s2) in row.iter().zip(&self.means[c]).zip(&self.vars[c]) {
                *score -= 0.5 * (2.0 * PI * s2).ln() + (v - m).powi(2) / (2.0 * s2);
            }
        }
        out
    }

    pub fn predict(&self, row: &[f64]) -> u8 {
        let [neg, pos] = self.log_joint(row);
        u8::from(pos > neg)
    }
}
