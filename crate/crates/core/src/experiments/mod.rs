//! Seeded scans for exceptional integers and the Monte Carlo driver.
//!
//! Three scenarios are supported: the basis of order `s + 1` with a small
//! part below `(c log n)^s`, the same with a small part at most `n^ε`, and
//! additive complements `B` of the distinct-parts sumset. Results are
//! reported per window and per dyadic sub-window `[2^k, 2^{k+1})`.

mod config;
mod driver;
mod scan;
mod threshold;

pub use config::{BCutoff, ExperimentConfig, Scenario, ThresholdKind, Window};
pub use driver::{
    evaluate_trial, run_monte_carlo, run_trial, scenario_complement, x_n_statistic, Aggregate,
    ScenarioResult, TrialReport, WindowAggregate, WindowReport,
};
pub use scan::{
    basis_order_eps_scan, basis_order_scan, complement_scan, complement_scan_with_cutoff,
    dyadic_counts, good_bad_classifier, DyadicCount,
};
pub use threshold::threshold_b;
