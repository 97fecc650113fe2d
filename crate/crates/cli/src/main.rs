//! `hcvr` command-line tool.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 1 for
//! runtime failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hcvr_core::baselines::RankingMethod;
use hcvr_core::pipeline::{COMPARISON_STEM, CONFIG_FILE, SELECTION_FILE, SWEEP_JSON_FILE};
use hcvr_core::{ClassifierKind, ComparisonTable, Error, LabelColumn, OutputFormat, RunConfig, SelectionReport, SweepTrace};

#[derive(Debug, Parser)]
#[command(name = "hcvr", version, about = "Correlation-aware voting feature selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select features at a fixed threshold.
    Select {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: f64,
    },
    /// Sweep the threshold and score each subset with a classifier.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        /// Comma-separated classifiers; the first one is written to sweep.csv.
        #[arg(long, default_value = "decision_tree")]
        classifier: String,
    },
    /// Rank features with one filter baseline.
    Baseline {
        #[command(flatten)]
        common: Common,
        /// anova_f (alias cfs), mi, or mrmr.
        #[arg(long, default_value = "anova_f")]
        method: String,
    },
    /// Compare HCVR with the filter baselines across classifiers.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value = "decision_tree,logistic_sgd,gaussian_nb")]
        classifier: String,
        #[arg(long, default_value = "hcvr,anova_f,mi,mrmr")]
        methods: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Summarize the outputs found in a run directory.
    Report {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Input CSV. Required unless --config is given.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Label column: index (negative counts from the end) or header name.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    label: String,
    /// The first CSV row is a header.
    #[arg(long)]
    header: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    test_fraction: Option<f64>,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Rerun a saved run-config.json; other data flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print only machine-readable data on stdout and nothing on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct Range {
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.5)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// Add a finer pass around the best threshold.
    #[arg(long)]
    refine: bool,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load_file(path)?,
            None => {
                let data = self
                    .data
                    .clone()
                    .ok_or_else(|| Error::InvalidConfig("--data is required (or pass --config)".into()))?;
                let mut cfg = RunConfig::new(data, self.seed);
                cfg.label_column = self.label.parse::<LabelColumn>().unwrap_or_default();
                cfg.has_header = self.header;
                if let Some(f) = self.test_fraction {
                    cfg.split.test_fraction = f;
                }
                cfg.format = self.format.parse::<OutputFormat>()?;
                cfg
            }
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        } else if self.config.is_none() {
            cfg.output_dir = PathBuf::from("out");
        }
        Ok(cfg)
    }

    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

impl Range {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.sweep.theta_min = self.theta_min;
        cfg.sweep.theta_max = self.theta_max;
        cfg.sweep.step = self.step;
        cfg.sweep.refine = self.refine;
    }
}

fn classifiers(list: &str) -> Result<Vec<ClassifierKind>> {
    let kinds = split_list(list).iter().map(|s| s.parse()).collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        return Err(Error::InvalidConfig("no classifier given".into()).into());
    }
    Ok(kinds)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select { common, theta } => {
            let cfg = common.config()?;
            let report = cfg.run_select(theta)?;
            common.note(format!("wrote {}", cfg.output_dir.join(SELECTION_FILE).display()));
            if common.quiet {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                let names = cfg.load_dataset()?.feature_names().to_vec();
                print!("{}", report.summary(&names));
            }
        }
        Command::Sweep { common, range, classifier } => {
            let mut cfg = common.config()?;
            if common.config.is_none() {
                range.apply(&mut cfg);
                cfg = cfg.with_classifiers(&classifiers(&classifier)?);
            }
            cfg.validate()?;
            common.note(format!("sweeping theta over [{}, {}] step {}", cfg.sweep.theta_min, cfg.sweep.theta_max, cfg.sweep.step));
            let traces = cfg.run_sweep()?;
            common.note(format!("wrote {}", cfg.output_dir.join(SWEEP_JSON_FILE).display()));
            if common.quiet {
                print!("{}", traces[0].to_csv());
            } else {
                for t in &traces {
                    print_trace(t);
                }
            }
        }
        Command::Baseline { common, method } => {
            let cfg = common.config()?;
            let method: RankingMethod = method.parse()?;
            let ranked = cfg.run_baseline(method)?;
            if common.quiet {
                println!("{}", serde_json::to_string(&ranked)?);
            } else {
                let names = cfg.load_dataset()?.feature_names().to_vec();
                println!("{} ranking (top 10):", method);
                for &j in ranked.order.iter().take(10) {
                    println!("  {:>3}  {:<32} {:.6}", j, names[j], ranked.scores[j]);
                }
            }
        }
        Command::Compare { common, range, classifier, methods, k } => {
            let mut cfg = common.config()?;
            if common.config.is_none() {
                range.apply(&mut cfg);
                cfg = cfg.with_classifiers(&classifiers(&classifier)?);
                cfg.methods = split_list(&methods);
                cfg.k = k;
            }
            cfg.validate()?;
            common.note(format!("comparing {} method(s) across {} classifier(s)", cfg.methods.len(), cfg.classifiers.len()));
            let table = cfg.run_compare()?;
            common.note(format!("wrote {}", cfg.output_dir.join(format!("{COMPARISON_STEM}.{}", cfg.format.extension())).display()));
            if common.quiet {
                match cfg.format {
                    OutputFormat::Csv => print!("{}", table.to_csv()),
                    OutputFormat::Json => print!("{}", table.to_json()?),
                }
            } else {
                print!("{}", table.to_markdown());
            }
        }
        Command::Report { out } => report(&out)?,
    }
    Ok(())
}

fn print_trace(t: &SweepTrace) {
    println!("{}: best theta {} ({} features)", t.classifier_id, t.best_theta, t.best_n_selected);
    println!("  theta  n_sel  train_acc  val_acc");
    for r in &t.records {
        println!("  {:<6} {:>5}  {:>9.4}  {:>7.4}", r.theta, r.n_selected, r.train_accuracy, r.validation_accuracy);
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Option<T>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?))
}

fn report(out: &Path) -> Result<()> {
    if !out.is_dir() {
        return Err(Error::FileNotFound(out.to_path_buf()).into());
    }
    let mut found = false;
    if let Some(cfg) = read_json::<RunConfig>(&out.join(CONFIG_FILE))? {
        found = true;
        println!("data: {} (seed {})", cfg.data_path.display(), cfg.seed);
    }
    if let Some(sel) = read_json::<SelectionReport>(&out.join(SELECTION_FILE))? {
        found = true;
        println!("selection: theta {} kept {} of {} -> {:?}", sel.theta, sel.n_features_out, sel.n_features_in, sel.selected);
    }
    if let Some(traces) = read_json::<Vec<SweepTrace>>(&out.join(SWEEP_JSON_FILE))? {
        found = true;
        for t in &traces {
            println!(
                "sweep {}: best theta {} with {} features, peak validation accuracy {:.4}",
                t.classifier_id,
                t.best_theta,
                t.best_n_selected,
                t.max_validation_accuracy()
            );
        }
    }
    if let Some(table) = read_json::<ComparisonTable>(&out.join(format!("{COMPARISON_STEM}.json")))? {
        found = true;
        print!("{}", table.to_markdown());
    } else if out.join(format!("{COMPARISON_STEM}.csv")).exists() {
        found = true;
        print!("{}", fs::read_to_string(out.join(format!("{COMPARISON_STEM}.csv")))?);
    }
    if !found {
        anyhow::bail!("no run outputs found in {}", out.display());
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_usage() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
