use serde::{Deserialize, Serialize};

use crate::constants::lambda;
use crate::error::{Error, Result};
use crate::model::Slack;

/// Inclusive integer window `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: u64,
    pub hi: u64,
}

impl Window {
    pub fn new(lo: u64, hi: u64) -> Self {
        Window { lo, hi }
    }

    /// `[⌈N/2⌉, N]`.
    pub fn upper_half(limit: u64) -> Self {
        Window {
            lo: limit.div_ceil(2).max(1),
            hi: limit,
        }
    }

    pub fn check(self, limit: u64) -> Result<()> {
        if self.lo < 1 || self.lo > self.hi || self.hi > limit {
            return Err(Error::domain(format!(
                "window [{}, {}] not inside [1, {limit}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn contains(self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

/// Growth class of the complement counting function `B(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdKind {
    /// `B(n) = ⌊c log n⌋` with `c > λ_s^{-1}`.
    Above { c: f64 },
    /// `B(n) = ⌊c log n⌋` with `0 < c < λ_s^{-1}`.
    Below { c: f64 },
    /// `B(n) = ⌊λ_s^{-1} log n + 2 λ_s^{-1} log log n⌋`.
    AtPlus,
    /// `B(n) = ⌊λ_s^{-1} log n - t(n)⌋`.
    AtMinus { slack: Slack },
}

/// Which elements of `B` may be used to represent `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BCutoff {
    /// Every `b ∈ B` with `b < n`.
    #[default]
    All,
    /// Only `b < m(n)`: `m(n)` from `B(m) = ⌊(c + λ_s^{-1})/2 · log n⌋` for
    /// `Above`, and `m = n/2` for `AtPlus`.
    Proof,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum Scenario {
    BasisOrder {
        c: f64,
        require_distinct: bool,
    },
    BasisEps {
        epsilon: f64,
    },
    Complement {
        threshold: ThresholdKind,
        cutoff: BCutoff,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub s: u32,
    #[serde(rename = "N")]
    pub limit: u64,
    pub trials: u64,
    pub seed: u64,
    pub scenario: Scenario,
    pub windows: Vec<Window>,
    /// Restrict `X_N` to integers that are good for `N`.
    pub good_filter: bool,
}

impl ExperimentConfig {
    /// Config with default trials (10), seed (0) and window `[N/2, N]`.
    pub fn new(s: u32, limit: u64, scenario: Scenario) -> Self {
        ExperimentConfig {
            s,
            limit,
            trials: 10,
            seed: 0,
            scenario,
            windows: vec![Window::upper_half(limit)],
            good_filter: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 2 {
            return Err(Error::config(
                "s",
                format!("must be at least 2, got {}", self.s),
            ));
        }
        if self.limit < 1 {
            return Err(Error::config("N", "must be at least 1"));
        }
        if self.trials < 1 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.windows.is_empty() {
            return Err(Error::config("windows", "at least one window required"));
        }
        for w in &self.windows {
            w.check(self.limit)
                .map_err(|e| Error::config("windows", e.to_string()))?;
        }
        let inv_lambda = 1.0 / lambda(self.s)?;
        match self.scenario {
            Scenario::BasisOrder { c, .. } => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::config("c", format!("must be positive, got {c}")));
                }
            }
            Scenario::BasisEps { epsilon } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(Error::config(
                        "epsilon",
                        format!("must lie in (0, 1), got {epsilon}"),
                    ));
                }
            }
            Scenario::Complement { threshold, cutoff } => {
                match threshold {
                    ThresholdKind::Above { c } if !(c > inv_lambda && c.is_finite()) => {
                        return Err(Error::config(
                            "c",
                            format!("kind `above` needs c > 1/λ_s = {inv_lambda}, got {c}"),
                        ));
                    }
                    ThresholdKind::Below { c } if !(c > 0.0 && c < inv_lambda) => {
                        return Err(Error::config(
                            "c",
                            format!("kind `below` needs 0 < c < 1/λ_s = {inv_lambda}, got {c}"),
                        ));
                    }
                    ThresholdKind::AtMinus { slack } => {
                        let coef = match slack {
                            Slack::LogLog { coef } | Slack::LogLogOverLog { coef } => coef,
                        };
                        if !(coef >= 0.0) || !coef.is_finite() {
                            return Err(Error::config(
                                "t_coef",
                                format!("must be non-negative, got {coef}"),
                            ));
                        }
                    }
                    _ => {}
                }
                if cutoff == BCutoff::Proof
                    && !matches!(
                        threshold,
                        ThresholdKind::Above { .. } | ThresholdKind::AtPlus
                    )
                {
                    return Err(Error::config(
                        "b_cutoff",
                        "`proof` applies only to kinds `above` and `at_plus`",
                    ));
                }
            }
        }
        Ok(())
    }
}
