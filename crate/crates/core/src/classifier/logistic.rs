//! Logistic regression trained by plain stochastic gradient descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Linear model on standardized inputs. Scaling parameters are fitted on
/// the training rows and stored with the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticSgd {
    means: Vec<f64>,
    stds: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticSgd {
    /// One pass per epoch over a freshly shuffled row order, constant step
    /// size, L2 penalty on the weights only.
    pub fn fit(x: &[Vec<f64>], y: &[u8], learning_rate: f64, epochs: usize, l2: f64, seed: u64) -> Self {
        let n = x.len();
        let k = x[0].len();
        let mut means = vec![0.0; k];
        let mut stds = vec![0.0; k];
        for j in 0..k {
            let mean = x.iter().map(|r| r[j]).sum::<f64>() / n as f64;
            let var = x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
            means[j] = mean;
            stds[j] = var.sqrt();
        }
        let mut model = Self { means, stds, weights: vec![0.0; k], bias: 0.0 };
        let scaled: Vec<Vec<f64>> = x.iter().map(|r| model.scale(r)).collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let row = &scaled[i];
                let err = sigmoid(model.margin(row)) - f64::from(y[i]);
                for (w, &v) in model.weights.iter_mut().zip(row) {
                    *w -= learning_rate * (err * v + l2 * *w);
                }
                model.bias -= learning_rate * err;
            }
        }
        model
    }

    fn scale(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }

    fn margin(&self, scaled: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(scaled).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn probability(&self, row: &[f64]) -> f64 {
        sigmoid(self.margin(&self.scale(row)))
    }

    pub fn predict(&self, row: &[f64]) -> u8 {
        u8::from(self.probability(row) >= 0.5)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}
