use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::gold::generate_gold_map;
use super::inject::{inject_omissions, Omission};
use super::noise::{synthesize_noisy_map, NoiseParams};
use super::scoring::{patience_recall, precision, score};
use super::{derive_seed, SimError};
use crate::bitext_map::BitextMap;
use crate::detector::{detect, Axis, DetectOptions, Method};
use crate::geometry::Threshold;

/// A config value that may be given once or as a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Shape of the synthetic gold map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoldConfig {
    pub width: u64,
    pub slope_ratio: f64,
    pub spacing: f64,
    pub jitter: f64,
}

impl Default for GoldConfig {
    fn default() -> Self {
        Self {
            width: 700_000,
            slope_ratio: 1.103,
            spacing: 139.0,
            jitter: 0.0,
        }
    }
}

/// Everything a run needs. Missing keys take their defaults: both methods,
/// sentence- and paragraph-length omissions, ten trials of a hundred
/// omissions each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub length: OneOrMany<u64>,
    pub method: OneOrMany<Method>,
    /// Defaults to 37 with noise and 15 without.
    pub threshold_degrees: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub omissions: usize,
    pub min_gap: u64,
    pub patience: Vec<usize>,
    pub gold: GoldConfig,
    pub noise: NoiseParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            length: OneOrMany::Many(vec![139, 553]),
            method: OneOrMany::Many(vec![Method::Basic, Method::Adomit]),
            threshold_degrees: None,
            trials: 10,
            seed: 1,
            omissions: 100,
            min_gap: 1000,
            patience: vec![3, 4, 5],
            gold: GoldConfig::default(),
            noise: NoiseParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn threshold(&self) -> Result<Threshold, SimError> {
        let degrees = self
            .threshold_degrees
            .unwrap_or(if self.noise == NoiseParams::none() {
                15.0
            } else {
                37.0
            });
        Threshold::from_degrees(degrees).map_err(|e| SimError::InvalidParameter(e.to_string()))
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.trials == 0 {
            return Err(SimError::InvalidParameter(
                "trials must be at least 1".into(),
            ));
        }
        if self.omissions == 0 {
            return Err(SimError::InvalidParameter(
                "omissions must be at least 1".into(),
            ));
        }
        if self.length.to_vec().is_empty() || self.method.to_vec().is_empty() {
            return Err(SimError::InvalidParameter(
                "length and method need at least one value".into(),
            ));
        }
        if self.patience.is_empty() || self.patience.contains(&0) {
            return Err(SimError::InvalidParameter(
                "patience levels must be positive".into(),
            ));
        }
        self.noise.validate()
    }
}

/// One trial of one method at one omission length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub flagged: usize,
    pub pattern: String,
    pub recall: BTreeMap<usize, f64>,
    pub precision: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatienceSummary {
    pub patience: usize,
    pub mean_recall: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Set when there are too few trials for an interval.
    pub ci_degenerate: bool,
}

/// Results for one (method, length) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockResult {
    pub method: Method,
    pub length: u64,
    pub threshold_degrees: f64,
    pub trials: usize,
    pub summaries: Vec<PatienceSummary>,
    pub trial_results: Vec<TrialResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub blocks: Vec<BlockResult>,
}

/// Run every (method, length) cell of `config`.
///
/// All methods see the same noisy maps for a given length and trial, so
/// their recall differences come from detection alone. Trials run in
/// parallel; results are ordered by trial index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, SimError> {
    config.validate()?;
    let threshold = config.threshold()?;
    let methods = config.method.to_vec();
    let mut cells: BTreeMap<(usize, u64), Vec<TrialResult>> = BTreeMap::new();

    for &length in &config.length.to_vec() {
        let per_trial = (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(config, threshold, &methods, length, trial))
            .collect::<Result<Vec<_>, SimError>>()?;
        for results in per_trial {
            for (m, result) in results.into_iter().enumerate() {
                cells.entry((m, length)).or_default().push(result);
            }
        }
    }

    let mut blocks = Vec::new();
    for (m, &method) in methods.iter().enumerate() {
        for &length in &config.length.to_vec() {
            let trial_results = cells.remove(&(m, length)).unwrap_or_default();
            let summaries = config
                .patience
                .iter()
                .map(|&k| {
                    let values: Vec<f64> = trial_results.iter().map(|t| t.recall[&k]).collect();
                    summarize(k, &values)
                })
                .collect();
            blocks.push(BlockResult {
                method,
                length,
                threshold_degrees: threshold.degrees(),
                trials: trial_results.len(),
                summaries,
                trial_results,
            });
        }
    }
    Ok(ExperimentResult {
        seed: config.seed,
        blocks,
    })
}

/// [`run_experiment`] once per threshold.
pub fn run_sweep(
    config: &ExperimentConfig,
    thresholds: &[f64],
) -> Result<Vec<ExperimentResult>, SimError> {
    if thresholds.is_empty() {
        return Err(SimError::InvalidParameter(
            "threshold sweep needs at least one threshold".into(),
        ));
    }
    thresholds
        .iter()
        .map(|&t| {
            run_experiment(&ExperimentConfig {
                threshold_degrees: Some(t),
                ..config.clone()
            })
        })
        .collect()
}

/// Rebuild the noisy map and true omissions of the trial logged with
/// `seed` for omissions of `length`.
pub fn replay_trial(
    config: &ExperimentConfig,
    length: u64,
    seed: u64,
) -> Result<(BitextMap, Vec<Omission>), SimError> {
    let g = &config.gold;
    let gold = generate_gold_map(
        g.width,
        g.slope_ratio,
        g.spacing,
        g.jitter,
        derive_seed(seed, 1),
    )?;
    let (modified, truth) = inject_omissions(
        &gold,
        config.omissions,
        length,
        config.min_gap,
        derive_seed(seed, 2),
    )?;
    let noisy = synthesize_noisy_map(&modified, &truth, &config.noise, derive_seed(seed, 3))?;
    Ok((noisy, truth))
}

fn run_trial(
    config: &ExperimentConfig,
    threshold: Threshold,
    methods: &[Method],
    length: u64,
    trial: usize,
) -> Result<Vec<TrialResult>, SimError> {
    let seed = derive_seed(derive_seed(config.seed, length), trial as u64);
    let (noisy, truth) = replay_trial(config, length, seed)?;

    methods
        .iter()
        .map(|&method| {
            let options = DetectOptions {
                threshold,
                method,
                axis: Axis::Translation,
                min_length: 0,
            };
            let report = detect(&noisy, options)?;
            let pattern = score(&report, &truth);
            let recall = config
                .patience
                .iter()
                .map(|&k| Ok((k, patience_recall(&pattern, truth.len(), k)?)))
                .collect::<Result<_, SimError>>()?;
            Ok(TrialResult {
                trial,
                seed,
                flagged: pattern.len(),
                pattern: pattern.to_string(),
                recall,
                precision: precision(&pattern),
            })
        })
        .collect()
}

/// Mean with a two-sided 95% Student's t interval.
fn summarize(patience: usize, values: &[f64]) -> PatienceSummary {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return PatienceSummary {
            patience,
            mean_recall: mean,
            ci_low: mean,
            ci_high: mean,
            ci_degenerate: true,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    let half = t * (var / n as f64).sqrt();
    PatienceSummary {
        patience,
        mean_recall: mean,
        ci_low: mean - half,
        ci_high: mean + half,
        ci_degenerate: false,
    }
}

impl ExperimentResult {
    pub fn write_text<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            writeln!(
                out,
                "method {}  length {}  threshold {}  trials {}  seed {}",
                b.method, b.length, b.threshold_degrees, b.trials, self.seed
            )?;
            for s in &b.summaries {
                if s.ci_degenerate {
                    writeln!(
                        out,
                        "  patience {}: mean recall {:.4}  95% CI degenerate (fewer than 2 trials)",
                        s.patience, s.mean_recall
                    )?;
                } else {
                    writeln!(
                        out,
                        "  patience {}: mean recall {:.4}  95% CI [{:.4}, {:.4}]",
                        s.patience, s.mean_recall, s.ci_low, s.ci_high
                    )?;
                }
            }
            for t in &b.trial_results {
                let recalls: Vec<String> = t
                    .recall
                    .iter()
                    .map(|(k, r)| format!("k{k}={r:.2}"))
                    .collect();
                writeln!(
                    out,
                    "  trial {} seed {}: flagged {}  {}",
                    t.trial,
                    t.seed,
                    t.flagged,
                    recalls.join(" ")
                )?;
            }
        }
        Ok(())
    }

    /// JSON lines: a `summary` record per (method, length, patience), then a
    /// `trial` record per trial carrying its full pattern.
    pub fn write_records<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        for b in &self.blocks {
            for s in &b.summaries {
                let record = serde_json::json!({
                    "kind": "summary",
                    "method": b.method,
                    "length": b.length,
                    "threshold_degrees": b.threshold_degrees,
                    "patience": s.patience,
                    "mean_recall": s.mean_recall,
                    "ci_low": s.ci_low,
                    "ci_high": s.ci_high,
                    "ci_degenerate": s.ci_degenerate,
                    "trials": b.trials,
                    "seed": self.seed,
                });
                writeln!(out, "{record}")?;
            }
        }
        for b in &self.blocks {
            for t in &b.trial_results {
                let record = serde_json::json!({
                    "kind": "trial",
                    "method": b.method,
                    "length": b.length,
                    "threshold_degrees": b.threshold_degrees,
                    "trial": t.trial,
                    "seed": t.seed,
                    "flagged": t.flagged,
                    "recall": t.recall,
                    "precision": t.precision,
                    "pattern": t.pattern,
                });
                writeln!(out, "{record}")?;
            }
        }
        Ok(())
    }
}

/// Recall-versus-threshold table, one row per (threshold, method, length).
pub fn write_sweep_text<W: Write + ?Sized>(
    out: &mut W,
    results: &[ExperimentResult],
) -> io::Result<()> {
    let Some(first) = results.first().and_then(|r| r.blocks.first()) else {
        return Ok(());
    };
    write!(out, "{:>9}  {:<6}  {:>6}", "threshold", "method", "length")?;
    for s in &first.summaries {
        write!(out, "  {:>24}", format!("recall@{}", s.patience))?;
    }
    writeln!(out)?;
    for r in results {
        for b in &r.blocks {
            write!(
                out,
                "{:>9}  {:<6}  {:>6}",
                b.threshold_degrees, b.method, b.length
            )?;
            for s in &b.summaries {
                write!(
                    out,
                    "  {:>24}",
                    format!("{:.4} [{:.4}, {:.4}]", s.mean_recall, s.ci_low, s.ci_high)
                )?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
