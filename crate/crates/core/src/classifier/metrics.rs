use serde::{Deserialize, Serialize};

/// Binary classification scores with label 1 as the positive class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub accuracy: f64,
    pub precision: f64,
    /// `confusion[actual][predicted]`.
    pub confusion: [[usize; 2]; 2],
    pub n_test: usize,
    /// Set when nothing was predicted positive and precision fell back to 0.
    pub precision_undefined: bool,
}

impl EvalResult {
    pub fn from_predictions(actual: &[u8], predicted: &[u8]) -> Self {
        assert_eq!(actual.len(), predicted.len(), "label vectors differ in length");
        let mut confusion = [[0usize; 2]; 2];
        for (&a, &p) in actual.iter().zip(predicted) {
            confusion[a as usize][p as usize] += 1;
        }
        Self::from_confusion(confusion)
    }

    pub fn from_confusion(confusion: [[usize; 2]; 2]) -> Self {
        let n_test = confusion.iter().flatten().sum::<usize>();
        let tp = confusion[1][1];
        let tn = confusion[0][0];
        let fp = confusion[0][1];
        let accuracy = if n_test == 0 { 0.0 } else { (tp + tn) as f64 / n_test as f64 };
        let precision_undefined = tp + fp == 0;
        let precision = if precision_undefined { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        Self { accuracy, precision, confusion, n_test, precision_undefined }
    }

    pub fn correct(&self) -> usize {
        self.confusion[0][0] + self.confusion[1][1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let y = [0, 1, 1, 0, 1, 0, 0, 1, 1, 0];
        let r = EvalResult::from_predictions(&y, &y);
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.confusion[0][0] + r.confusion[1][1], 10);
        assert_eq!(r.precision, 1.0);
    }

    #[test]
    fn no_positive_predictions() {
        let r = EvalResult::from_predictions(&[1, 0, 1], &[0, 0, 0]);
        assert_eq!(r.precision, 0.0);
        assert!(r.precision_undefined);
        assert!((r.accuracy - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn recomputable_from_confusion() {
        let r = EvalResult::from_predictions(&[1, 1, 0, 0, 1], &[1, 0, 1, 0, 1]);
        assert_eq!(r.confusion, [[1, 1], [1, 2]]);
        assert_eq!(EvalResult::from_confusion(r.confusion), r);
        assert!((r.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.accuracy - 0.6).abs() < 1e-15);
    }
}
