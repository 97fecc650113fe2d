use rayon::prelude::*;

use super::mutual_info::{discretize, mutual_info, target_labels, DEFAULT_BINS};
use crate::dataset::Dataset;
use crate::{Error, Result};

/// Greedy mRMR with the difference criterion and the default bin count.
pub fn mrmr_select(d: &Dataset, k: usize) -> Result<Vec<usize>> {
    mrmr_select_with(d, k, DEFAULT_BINS)
}

/// Greedy forward selection maximizing `relevance(f) - mean redundancy(f, s)`
/// over already picked `s`, both measured as mutual information on
/// discretized columns. The first pick is the most relevant feature. Ties go
/// to the lower index. Returns indices in pick order.
pub fn mrmr_select_with(d: &Dataset, k: usize, n_bins: usize) -> Result<Vec<usize>> {
    let n = d.n_cols();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if n_bins < 2 {
        return Err(Error::InvalidBins(n_bins));
    }
    let binned: Vec<Vec<usize>> = d.columns().par_iter().map(|c| discretize(c, n_bins)).collect();
    let target = target_labels(d);
    let relevance: Vec<f64> = binned.par_iter().map(|b| mutual_info(b, &target)).collect();

    let mut picked = Vec::with_capacity(k);
    let mut is_picked = vec![false; n];
    // Running sum of redundancy against every picked feature.
    let mut redundancy = vec![0.0; n];

    while picked.len() < k {
        let candidates: Vec<usize> = (0..n).filter(|&j| !is_picked[j]).collect();
        let m = picked.len() as f64;
        let best = candidates
            .iter()
            .map(|&j| {
                let score = if picked.is_empty() { relevance[j] } else { relevance[j] - redundancy[j] / m };
                (j, score)
            })
            .fold(None, |acc: Option<(usize, f64)>, (j, s)| match acc {
                Some((_, bs)) if bs >= s => acc,
                _ => Some((j, s)),
            })
            .map(|(j, _)| j)
            .expect("at least one candidate remains");

        picked.push(best);
        is_picked[best] = true;
        let newest = &binned[best];
        let updates: Vec<(usize, f64)> = candidates
            .par_iter()
            .filter(|&&j| j != best)
            .map(|&j| (j, mutual_info(&binned[j], newest)))
            .collect();
        for (j, r) in updates {
            redundancy[j] += r;
        }
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::baselines::mutual_info_scores;

    /// Target, a 10%-noisy proxy A, an exact copy B of A, and an
    /// independently 25%-noisy proxy C.
    fn redundant_dataset() -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 2000;
        let target: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let flip = |t: u8, p: f64, rng: &mut ChaCha8Rng| f64::from(if rng.gen::<f64>() < p { 1 - t } else { t });
        let a: Vec<f64> = target.iter().map(|&t| flip(t, 0.10, &mut rng)).collect();
        let b = a.clone();
        let c: Vec<f64> = target.iter().map(|&t| flip(t, 0.25, &mut rng)).collect();
        Dataset::from_columns(vec![a, b, c], target).unwrap()
    }

    /// Scores every remaining candidate from scratch.
    fn exhaustive_next(d: &Dataset, picked: &[usize]) -> usize {
        let target = target_labels(d);
        let bins: Vec<Vec<usize>> = d.columns().iter().map(|c| discretize(c, DEFAULT_BINS)).collect();
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for j in 0..d.n_cols() {
            if picked.contains(&j) {
                continue;
            }
            let rel = mutual_info(&bins[j], &target);
            let red: f64 = picked.iter().map(|&s| mutual_info(&bins[j], &bins[s])).sum::<f64>();
            let score = if picked.is_empty() { rel } else { rel - red / picked.len() as f64 };
            if score > best.1 {
                best = (j, score);
            }
        }
        best.0
    }

    #[test]
    fn redundant_copy_is_demoted() {
        let d = redundant_dataset();
        let picks = mrmr_select(&d, 3).unwrap();
        assert_eq!(picks, vec![0, 2, 1]);
        assert_eq!(exhaustive_next(&d, &[]), 0);
        assert_eq!(exhaustive_next(&d, &[0]), 2);
        // Plain relevance would have taken the copy second.
        let mi = mutual_info_scores(&d, DEFAULT_BINS).unwrap();
        assert_eq!(&mi.order[..2], &[0, 1]);
    }

    #[test]
    fn k_one_and_k_all() {
        let d = redundant_dataset();
        let mi = mutual_info_scores(&d, DEFAULT_BINS).unwrap();
        assert_eq!(mrmr_select(&d, 1).unwrap(), vec![mi.order[0]]);
        let all = mrmr_select(&d, 3).unwrap();
        assert_eq!(all[0], mi.order[0]);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn invalid_k() {
        let d = redundant_dataset();
        assert!(matches!(mrmr_select(&d, 0), Err(Error::InvalidK { .. })));
        assert!(matches!(mrmr_select(&d, 4), Err(Error::InvalidK { k: 4, n: 3 })));
    }

    #[test]
    fn prefix_property_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 300;
        let target: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let cols: Vec<Vec<f64>> = (0..8)
            .map(|j| target.iter().map(|&t| f64::from(t) * (j as f64 / 8.0) + rng.gen::<f64>()).collect())
            .collect();
        let d = Dataset::from_columns(cols, target).unwrap();
        let full = mrmr_select(&d, 8).unwrap();
        for k in 1..8 {
            assert_eq!(mrmr_select(&d, k).unwrap(), full[..k]);
        }
    }
}
