use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_complement, sample_sequence, ComplementSequence, SequenceSample};
use crate::sumset::{density, gap_stats, s_fold_sumset, SumsetBitmap};

use super::config::{BCutoff, ExperimentConfig, Scenario, ThresholdKind, Window};
use super::scan::{
    above_cutoff, basis_eps_scan_with, basis_order_scan_with, complement_scan_with_cutoff,
    dyadic_counts, good_bad_classifier, separated_distinct_scan, DyadicCount,
};
use super::threshold::threshold_b;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub lo: u64,
    pub hi: u64,
    pub exceptional: Vec<u64>,
    pub exceptional_count: u64,
    pub dyadic: Vec<DyadicCount>,
    /// Density of the unrestricted sumset `sA` in the window.
    pub density: f64,
    /// Largest `(b_{i+1} - b_i) / ln b_i` over consecutive members of `sA`
    /// in the window.
    pub max_gap_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial_id: u64,
    pub seed: u64,
    pub sample_size: u64,
    pub windows: Vec<WindowReport>,
    /// Exceptional count in `[⌈N/2⌉, N]`, good-filtered when the config asks.
    pub x_n: Option<u64>,
    pub x_n_unfiltered: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowAggregate {
    pub lo: u64,
    pub hi: u64,
    pub mean_density: f64,
    pub mean_exceptional: f64,
    pub trials_with_zero: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: u64,
    pub x_mean: Option<f64>,
    /// Sample variance; `None` with fewer than two trials.
    pub x_variance: Option<f64>,
    /// Fraction of trials with `X_N < x_mean / 2`.
    pub x_below_half_mean_fraction: Option<f64>,
    pub windows: Vec<WindowAggregate>,
}

impl Aggregate {
    pub fn from_reports(reports: &[TrialReport]) -> Aggregate {
        let trials = reports.len() as u64;
        let xs: Vec<f64> = reports
            .iter()
            .filter_map(|r| r.x_n)
            .map(|x| x as f64)
            .collect();
        let (x_mean, x_variance, x_below_half_mean_fraction) =
            if xs.is_empty() || xs.len() != reports.len() {
                (None, None, None)
            } else {
                let k = xs.len() as f64;
                let mean = xs.iter().sum::<f64>() / k;
                let var = (xs.len() > 1)
                    .then(|| xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0));
                let below = xs.iter().filter(|&&x| x < mean / 2.0).count() as f64 / k;
                (Some(mean), var, Some(below))
            };
        let window_count = reports.first().map_or(0, |r| r.windows.len());
        let windows = (0..window_count)
            .map(|i| {
                let ws: Vec<&WindowReport> = reports.iter().map(|r| &r.windows[i]).collect();
                let k = ws.len() as f64;
                WindowAggregate {
                    lo: ws[0].lo,
                    hi: ws[0].hi,
                    mean_density: ws.iter().map(|w| w.density).sum::<f64>() / k,
                    mean_exceptional: ws.iter().map(|w| w.exceptional_count as f64).sum::<f64>()
                        / k,
                    trials_with_zero: ws.iter().filter(|w| w.exceptional_count == 0).count() as u64,
                }
            })
            .collect();
        Aggregate {
            trials,
            x_mean,
            x_variance,
            x_below_half_mean_fraction,
            windows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub config: ExperimentConfig,
    pub reports: Vec<TrialReport>,
    pub aggregate: Aggregate,
}

impl ScenarioResult {
    /// Sorts by trial id and recomputes the aggregate.
    pub fn from_reports(config: ExperimentConfig, mut reports: Vec<TrialReport>) -> Self {
        reports.sort_by_key(|r| r.trial_id);
        let aggregate = Aggregate::from_reports(&reports);
        ScenarioResult {
            config,
            reports,
            aggregate,
        }
    }
}

/// The complement `B` of a complement scenario, `None` otherwise.
pub fn scenario_complement(config: &ExperimentConfig) -> Result<Option<ComplementSequence>> {
    match config.scenario {
        Scenario::Complement { threshold, .. } => {
            let spec = threshold_b(threshold, config.s, config.limit)?;
            Ok(Some(build_complement(&spec, config.limit)?))
        }
        _ => Ok(None),
    }
}

fn exceptional_in(
    config: &ExperimentConfig,
    sample: &SequenceSample,
    sumset: &SumsetBitmap,
    distinct: Option<&SumsetBitmap>,
    b: Option<&ComplementSequence>,
    window: Window,
) -> Result<Vec<u64>> {
    let elements = sample.elements();
    Ok(match config.scenario {
        Scenario::BasisOrder {
            c,
            require_distinct: false,
        } => basis_order_scan_with(sumset, elements, c, window),
        Scenario::BasisOrder {
            c,
            require_distinct: true,
        } => separated_distinct_scan(elements, config.s, c, window),
        Scenario::BasisEps { epsilon } => basis_eps_scan_with(sumset, elements, epsilon, window),
        Scenario::Complement { threshold, cutoff } => {
            let (distinct, b) = distinct
                .zip(b)
                .ok_or_else(|| Error::domain("complement scan without B"))?;
            match (cutoff, threshold) {
                (BCutoff::All, _) => complement_scan_with_cutoff(distinct, b, window, |n| n),
                (BCutoff::Proof, ThresholdKind::Above { c }) => {
                    complement_scan_with_cutoff(distinct, b, window, above_cutoff(b, c, config.s))
                }
                (BCutoff::Proof, ThresholdKind::AtPlus) => {
                    complement_scan_with_cutoff(distinct, b, window, |n| n / 2)
                }
                (BCutoff::Proof, _) => {
                    return Err(Error::config(
                        "b_cutoff",
                        "proof cutoff needs kind `above` or `at_plus`",
                    ))
                }
            }
        }
    })
}

/// Scans one sample. `b` is required for complement scenarios; the sample
/// must match the config's `s` and `N`.
pub fn evaluate_trial(
    config: &ExperimentConfig,
    sample: &SequenceSample,
    b: Option<&ComplementSequence>,
) -> Result<TrialReport> {
    if sample.s() != config.s || sample.limit() != config.limit {
        return Err(Error::domain(format!(
            "sample (s = {}, N = {}) does not match config (s = {}, N = {})",
            sample.s(),
            sample.limit(),
            config.s,
            config.limit
        )));
    }
    let s = config.s;
    let limit = config.limit;
    let sumset = s_fold_sumset(sample.elements(), s, limit, false);
    let is_complement = matches!(config.scenario, Scenario::Complement { .. });
    let distinct = is_complement.then(|| s_fold_sumset(sample.elements(), s, limit, true));

    let mut windows = Vec::with_capacity(config.windows.len());
    for &w in &config.windows {
        let exceptional = exceptional_in(config, sample, &sumset, distinct.as_ref(), b, w)?;
        let max_gap_ratio = gap_stats(&sumset, w.lo, w.hi)
            .ok()
            .and_then(|g| g.max_ratio);
        windows.push(WindowReport {
            lo: w.lo,
            hi: w.hi,
            exceptional_count: exceptional.len() as u64,
            dyadic: dyadic_counts(&exceptional, w),
            exceptional,
            density: density(&sumset, w.lo, w.hi)?,
            max_gap_ratio,
        });
    }

    let (x_n, x_n_unfiltered) = if is_complement {
        let half = Window::upper_half(limit);
        let exceptional = match config.windows.iter().position(|&w| w == half) {
            Some(i) => windows[i].exceptional.clone(),
            None => exceptional_in(config, sample, &sumset, distinct.as_ref(), b, half)?,
        };
        let unfiltered = exceptional.len() as u64;
        let filtered = if config.good_filter {
            let b = b.ok_or_else(|| Error::domain("complement scan without B"))?;
            let mut k = 0;
            for &n in &exceptional {
                if good_bad_classifier(n, limit, b, s)? {
                    k += 1;
                }
            }
            k
        } else {
            unfiltered
        };
        (Some(filtered), Some(unfiltered))
    } else {
        (None, None)
    };

    Ok(TrialReport {
        trial_id: sample.trial_id(),
        seed: sample.seed(),
        sample_size: sample.len() as u64,
        windows,
        x_n,
        x_n_unfiltered,
    })
}

/// Samples trial `trial_id` and scans it.
pub fn run_trial(
    config: &ExperimentConfig,
    trial_id: u64,
    b: Option<&ComplementSequence>,
) -> Result<TrialReport> {
    let sample = sample_sequence(config.s, config.limit, config.seed, trial_id)?;
    evaluate_trial(config, &sample, b)
}

/// Runs trials `0..trials` in parallel; reports come back sorted by trial id.
pub fn run_monte_carlo(config: &ExperimentConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let b = scenario_complement(config)?;
    let reports = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t, b.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioResult::from_reports(config.clone(), reports))
}

/// [`run_monte_carlo`] restricted to complement scenarios, where `X_N` is defined.
pub fn x_n_statistic(config: &ExperimentConfig) -> Result<ScenarioResult> {
    if !matches!(config.scenario, Scenario::Complement { .. }) {
        return Err(Error::domain(
            "X_N is defined for complement scenarios only",
        ));
    }
    run_monte_carlo(config)
}
