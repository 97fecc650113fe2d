use rayon::prelude::*;

use super::{RankedFeatures, RankingMethod};
use crate::dataset::Dataset;
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 10;

/// Equal-frequency discretization into at most `n_bins` bins.
///
/// Each value is binned by the sorted position of its first occurrence, so
/// equal values always share a bin and heavy ties collapse bins together.
/// Bin ids are compacted to `0..k`.
pub fn discretize(values: &[f64], n_bins: usize) -> Vec<usize> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut raw = vec![0usize; n];
    let mut first_pos = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && values[i] != values[order[pos - 1]] {
            first_pos = pos;
        }
        raw[i] = first_pos * n_bins / n;
    }
    let mut remap = vec![usize::MAX; n_bins];
    let mut next = 0;
    for &i in &order {
        let b = raw[i];
        if remap[b] == usize::MAX {
            remap[b] = next;
            next += 1;
        }
    }
    raw.into_iter().map(|b| remap[b]).collect()
}

/// Mutual information in nats between two discrete label sequences.
pub fn mutual_info(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "sequences differ in length");
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut joint = vec![0usize; ka * kb];
    let mut pa = vec![0usize; ka];
    let mut pb = vec![0usize; kb];
    for (&x, &y) in a.iter().zip(b) {
        joint[x * kb + y] += 1;
        pa[x] += 1;
        pb[y] += 1;
    }
    let nf = n as f64;
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let c = joint[x * kb + y];
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / nf * (c * nf / (pa[x] as f64 * pb[y] as f64)).ln();
        }
    }
    mi.max(0.0)
}

pub(crate) fn target_labels(d: &Dataset) -> Vec<usize> {
    d.target().iter().map(|&t| t as usize).collect()
}

/// MI between each discretized feature and the target.
pub fn mutual_info_scores(d: &Dataset, n_bins: usize) -> Result<RankedFeatures> {
    if n_bins < 2 {
        return Err(Error::InvalidBins(n_bins));
    }
    let target = target_labels(d);
    let scores = d
        .columns()
        .par_iter()
        .map(|col| mutual_info(&discretize(col, n_bins), &target))
        .collect();
    Ok(RankedFeatures::from_scores(RankingMethod::MutualInfo, scores))
}
