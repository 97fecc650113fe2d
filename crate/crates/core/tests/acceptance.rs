//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hcvr_core::baselines::{mrmr_select, mutual_info_scores, DEFAULT_BINS};
use hcvr_core::classifier::{evaluate, train};
use hcvr_core::correlation::CorrelationClass::{self, High, Low};
use hcvr_core::{
    anova_f_scores, build_profile, pearson, select, sweep, tally_votes, vote_pair, ClassifierKind, ClassifierSpec,
    CorrelationProfile, Dataset, RunConfig, RuleInput, Threshold,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spambase() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/spambase.data")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// 1 -------------------------------------------------------------------------

type Row = (CorrelationClass, CorrelationClass, CorrelationClass, f64, f64, (u8, u8));

fn rule_table() -> Outcome {
    // (A, B, C, rho1t, rho2t) -> expected (f1, f2)
    let rows: [Row; 10] = [
        (High, Low, Low, 0.0, 0.0, (0, 0)),
        (High, High, Low, 0.5, 0.0, (1, 0)),
        (High, Low, High, 0.0, 0.5, (0, 1)),
        (High, High, High, 0.6, 0.5, (1, 0)),
        (High, High, High, 0.5, 0.6, (0, 1)),
        (High, High, High, 0.5, 0.5, (1, 0)),
        (Low, High, Low, 0.5, 0.0, (1, 0)),
        (Low, Low, High, 0.0, 0.5, (0, 1)),
        (Low, High, High, 0.5, 0.6, (1, 1)),
        (Low, Low, Low, 0.0, 0.0, (0, 0)),
    ];
    let mut bad = Vec::new();
    for (a, b, c, rho1t, rho2t, want) in rows {
        let got = vote_pair(&RuleInput { a, b, c, rho1t, rho2t });
        if got != want {
            bad.push(format!("{}{}{} -> {got:?}", a.symbol(), b.symbol(), c.symbol()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "8 rows + H/H/H branches exact".into() } else { bad.join("; ") })
}

// 2 -------------------------------------------------------------------------

fn naive_votes(p2p: &[Vec<f64>], p2t: &[f64], theta: f64) -> Vec<usize> {
    let n = p2t.len();
    let mut keep = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if i >= j {
                continue;
            }
            let a = p2p[i][j].abs() >= theta;
            let b = p2t[i].abs() >= theta;
            let c = p2t[j].abs() >= theta;
            let (ki, kj) = if !b && !c {
                (false, false)
            } else if b && !c {
                (true, false)
            } else if !b && c {
                (false, true)
            } else if !a {
                (true, true)
            } else if p2t[i].abs() >= p2t[j].abs() {
                (true, false)
            } else {
                (false, true)
            };
            keep[i] += ki as usize;
            keep[j] += kj as usize;
        }
    }
    keep
}

fn random_profile(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = rng.gen_range(2..=8);
    // Coarse grid so values often land exactly on the threshold.
    let draw = |rng: &mut ChaCha8Rng| f64::from(rng.gen_range(-20i32..=20)) / 20.0;
    let mut p2p = vec![vec![0.0; n]; n];
    for i in 0..n {
        p2p[i][i] = 1.0;
        for j in (i + 1)..n {
            let v = draw(rng);
            p2p[i][j] = v;
            p2p[j][i] = v;
        }
    }
    let p2t = (0..n).map(|_| draw(rng)).collect();
    (p2p, p2t)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let (p2p, p2t) = random_profile(&mut rng);
        let theta = f64::from(rng.gen_range(0..=20)) / 20.0;
        let n = p2t.len();
        let profile = CorrelationProfile::from_parts(p2p.clone(), p2t.clone()).expect("valid profile");
        let t = Threshold::new(theta).expect("valid theta");
        let want = naive_votes(&p2p, &p2t, theta);
        let tally = tally_votes(&profile, t).expect("tally");
        let want_kept: Vec<usize> = (0..n).filter(|&i| 2 * want[i] > n - 1).collect();
        let got_kept = select(&profile, t).expect("select").selected;
        if tally.keep_votes != want || got_kept != want_kept {
            return outcome(false, format!("case {case}: n={n} theta={theta} votes {:?} vs {want:?}", tally.keep_votes));
        }
    }
    outcome(true, "200 random profiles match the naive enumerator")
}

// 3 -------------------------------------------------------------------------

fn spambase_counts() -> Outcome {
    let cfg = RunConfig::new(spambase(), 42);
    let (train, _) = cfg.train_test().expect("load spambase");
    let profile = build_profile(&train).expect("profile");
    let n02 = select(&profile, Threshold::new(0.02).unwrap()).unwrap().n_features_out;
    let n04 = select(&profile, Threshold::new(0.04).unwrap()).unwrap().n_features_out;
    outcome(
        (42..=48).contains(&n02) && (51..=57).contains(&n04),
        format!("|select(0.02)| = {n02} in [42, 48], |select(0.04)| = {n04} in [51, 57]"),
    )
}

// 4 -------------------------------------------------------------------------

fn non_monotone() -> Outcome {
    let mut seen = Vec::new();
    for seed in 1..=5 {
        let cfg = RunConfig::new(spambase(), seed);
        let (train, _) = cfg.train_test().expect("load spambase");
        let trace = sweep(&train, &cfg.classifiers[0], &cfg.sweep).expect("sweep");
        let a = trace.record_at(0.02).expect("0.02 on grid").n_selected;
        let b = trace.record_at(0.04).expect("0.04 on grid").n_selected;
        seen.push(format!("seed {seed}: {a} vs {b}"));
        if a < b {
            return outcome(true, format!("inversion at {}", seen.join(", ")));
        }
    }
    outcome(false, format!("no inversion: {}", seen.join(", ")))
}

// 5 -------------------------------------------------------------------------

fn high_theta_collapse() -> Outcome {
    let cfg = RunConfig::new(spambase(), 42);
    let (train, _) = cfg.train_test().expect("load spambase");
    let trace = sweep(&train, &cfg.classifiers[0], &cfg.sweep).expect("sweep");
    let max = trace.max_validation_accuracy();
    let high: Vec<f64> = trace.records.iter().filter(|r| r.theta >= 0.4 - 1e-12).map(|r| r.validation_accuracy).collect();
    let worst_gap = high.iter().map(|&a| max - a).fold(f64::INFINITY, f64::min);
    outcome(
        !high.is_empty() && worst_gap >= 0.05,
        format!("max val acc {:.4}, smallest drop at theta >= 0.4 is {:.2} points", max, worst_gap * 100.0),
    )
}

// 6 -------------------------------------------------------------------------

fn accuracy(spec: &ClassifierSpec, train_set: &Dataset, test: &Dataset, subset: &[usize]) -> f64 {
    let model = train(spec, train_set, subset).expect("train");
    evaluate(&model, test, subset).expect("evaluate").accuracy
}

fn relative_performance() -> Outcome {
    let cfg = RunConfig::new(spambase(), 42).with_classifiers(&[ClassifierKind::DecisionTree]);
    let spec = &cfg.classifiers[0];
    let (train_set, test) = cfg.train_test().expect("load spambase");
    let trace = sweep(&train_set, spec, &cfg.sweep).expect("sweep");
    let profile = build_profile(&train_set).expect("profile");
    let selected = select(&profile, Threshold::new(trace.best_theta).unwrap()).unwrap().selected;
    let k = selected.len();
    let n = train_set.n_cols();

    let hcvr = accuracy(spec, &train_set, &test, &selected);
    let full = accuracy(spec, &train_set, &test, &(0..n).collect::<Vec<_>>());
    let random: Vec<f64> = (1..=10u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut subset = sample(&mut rng, n, k).into_vec();
            subset.sort_unstable();
            accuracy(spec, &train_set, &test, &subset)
        })
        .collect();
    let random_mean = random.iter().sum::<f64>() / random.len() as f64;

    let a = hcvr >= full - 0.03;
    let b = hcvr >= random_mean + 0.03;
    outcome(
        a && b,
        format!(
            "theta {} ({k} features): hcvr {:.2}, full {:.2} (a {}), random mean {:.2} (b {})",
            trace.best_theta,
            hcvr * 100.0,
            full * 100.0,
            if a { "ok" } else { "fail" },
            random_mean * 100.0,
            if b { "ok" } else { "fail" },
        ),
    )
}

// 7 -------------------------------------------------------------------------

fn baseline_sanity() -> Outcome {
    let target: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
    let copy: Vec<f64> = target.iter().map(|&t| f64::from(t)).collect();
    let mi_data = Dataset::from_columns(vec![copy], target.clone()).unwrap();
    let mi = mutual_info_scores(&mi_data, DEFAULT_BINS).unwrap().scores[0];
    let mi_ok = (mi - std::f64::consts::LN_2).abs() <= 1e-6;

    let constant = vec![3.5; 100];
    let same_means: Vec<f64> = (0..100).map(|i| f64::from((i / 2) % 2)).collect();
    let f = anova_f_scores(&Dataset::from_columns(vec![constant, same_means], target).unwrap()).unwrap().scores;
    let f_ok = f[0] == 0.0 && f[1] == 0.0;

    let cfg = RunConfig::new(spambase(), 42);
    let (train_set, _) = cfg.train_test().expect("load spambase");
    let full = mrmr_select(&train_set, 10).unwrap();
    let prefix_ok = (1..=10).all(|k| mrmr_select(&train_set, k).unwrap() == full[..k]);

    outcome(
        mi_ok && f_ok && prefix_ok,
        format!("MI {mi:.9} vs ln 2, ANOVA-F {:?}, mRMR prefix k=1..10 {}", f, if prefix_ok { "ok" } else { "broken" }),
    )
}

// 8 -------------------------------------------------------------------------

fn correlation_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows = 20;
    let mut columns: Vec<Vec<f64>> = (0..8).map(|_| (0..rows).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
    columns[7] = vec![2.0; rows];
    let target: Vec<u8> = (0..rows).map(|i| (i % 3 == 0) as u8).collect();
    let t: Vec<f64> = target.iter().map(|&v| f64::from(v)).collect();
    let d = Dataset::from_columns(columns.clone(), target).unwrap();
    let profile = build_profile(&d).unwrap();

    let mut max_err: f64 = 0.0;
    for i in 0..8 {
        max_err = max_err.max((profile.p2t(i) - pearson(&columns[i], &t).unwrap()).abs());
        for j in 0..8 {
            if i != j {
                max_err = max_err.max((profile.p2p(i, j) - pearson(&columns[i], &columns[j]).unwrap()).abs());
            }
        }
    }

    let mut scale_err: f64 = 0.0;
    for _ in 0..50 {
        let a = rng.gen_range(0.01..100.0);
        let b = rng.gen_range(-100.0..100.0);
        let scaled: Vec<f64> = columns[0].iter().map(|&x| a * x + b).collect();
        scale_err = scale_err.max((pearson(&scaled, &columns[1]).unwrap() - pearson(&columns[0], &columns[1]).unwrap()).abs());
    }

    let zero = pearson(&columns[7], &columns[0]).unwrap() == 0.0 && profile.p2p(7, 0) == 0.0 && profile.p2t(7) == 0.0;
    outcome(
        max_err <= 1e-12 && scale_err <= 1e-9 && zero,
        format!("matrix vs scalar {max_err:.1e}, scale invariance {scale_err:.1e}, zero-variance -> 0 {zero}"),
    )
}

// 9 -------------------------------------------------------------------------

fn reproducibility() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let outputs: Vec<Vec<u8>> = dirs
        .iter()
        .map(|dir| {
            let mut cfg = RunConfig::new(spambase(), 42);
            cfg.output_dir = dir.path().to_path_buf();
            cfg.run_compare().expect("compare");
            std::fs::read(dir.path().join("comparison.csv")).expect("comparison.csv")
        })
        .collect();
    outcome(outputs[0] == outputs[1], format!("comparison.csv {} bytes, identical {}", outputs[0].len(), outputs[0] == outputs[1]))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("rule table fidelity", Duration::from_secs(1), rule_table),
        ("brute-force oracle equivalence", Duration::from_secs(10), oracle_equivalence),
        ("SPAMBASE feature counts", Duration::from_secs(5), spambase_counts),
        ("non-monotonicity tolerated", Duration::MAX, non_monotone),
        ("high-theta collapse", Duration::MAX, high_theta_collapse),
        ("relative performance", Duration::from_secs(300), relative_performance),
        ("baseline sanity", Duration::MAX, baseline_sanity),
        ("correlation engine", Duration::MAX, correlation_engine),
        ("reproducibility", Duration::MAX, reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if elapsed > *budget {
            out.pass = false;
            out.detail.push_str(&format!("; over budget of {budget:?}"));
        }
        failed += usize::from(!out.pass);
        println!(
            "criterion {} {} {name}: {} [{:.2?}]",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
