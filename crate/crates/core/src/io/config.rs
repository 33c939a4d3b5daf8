use serde::de::DeserializeOwned;
use toml::Table;

use crate::error::{Error, Result};
use crate::experiments::{BCutoff, ExperimentConfig, Scenario, ThresholdKind, Window};
use crate::model::Slack;

const KEYS: &[&str] = &[
    "scenario",
    "s",
    "N",
    "trials",
    "seed",
    "c",
    "epsilon",
    "require_distinct",
    "kind",
    "t_form",
    "t_coef",
    "b_cutoff",
    "good_filter",
    "windows",
];

struct Doc {
    table: Table,
}

impl Doc {
    fn get<T: DeserializeOwned>(&mut self, key: &str) -> Result<Option<T>> {
        match self.table.remove(key) {
            None => Ok(None),
            Some(v) => v
                .try_into()
                .map(Some)
                .map_err(|e| Error::config(key, e.to_string().trim().to_string())),
        }
    }

    fn require<T: DeserializeOwned>(&mut self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::config(key, "missing"))
    }

    fn reject_rest(&self, scenario: &str) -> Result<()> {
        match self.table.keys().next() {
            Some(k) => Err(Error::config(
                k.as_str(),
                format!("not used by scenario `{scenario}`"),
            )),
            None => Ok(()),
        }
    }
}

/// Parses a TOML run description into a validated [`ExperimentConfig`].
///
/// Keys: `scenario` (`basis_order`, `basis_eps` or `complement`), `s`, `N`,
/// and optionally `trials` (10), `seed` (0), `windows` (`[[⌈N/2⌉, N]]`).
/// `basis_order` takes `c` and `require_distinct` (false); `basis_eps`
/// takes `epsilon`; `complement` takes `kind` (`above`, `below`, `at_plus`,
/// `at_minus`), `c` for `above`/`below`, `t_form` (`loglog` or
/// `loglog_over_log`) and `t_coef` (4) for `at_minus`, `b_cutoff` (`all` or
/// `proof`) and `good_filter` (false).
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    if let Some(k) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::config(k.as_str(), "unknown key"));
    }
    let mut doc = Doc { table };
    let scenario_name: String = doc.require("scenario")?;
    let s: u32 = doc.require("s")?;
    let limit: u64 = doc.require("N")?;
    let trials: Option<u64> = doc.get("trials")?;
    let seed: Option<u64> = doc.get("seed")?;
    let windows: Option<Vec<[u64; 2]>> = doc.get("windows")?;

    let scenario = match scenario_name.as_str() {
        "basis_order" => Scenario::BasisOrder {
            c: doc.require("c")?,
            require_distinct: doc.get("require_distinct")?.unwrap_or(false),
        },
        "basis_eps" => Scenario::BasisEps {
            epsilon: doc.require("epsilon")?,
        },
        "complement" => {
            let kind: String = doc.require("kind")?;
            let threshold = match kind.as_str() {
                "above" => ThresholdKind::Above {
                    c: doc.require("c")?,
                },
                "below" => ThresholdKind::Below {
                    c: doc.require("c")?,
                },
                "at_plus" => ThresholdKind::AtPlus,
                "at_minus" => {
                    let coef = doc.get("t_coef")?.unwrap_or(4.0);
                    let form: Option<String> = doc.get("t_form")?;
                    let slack = match form.as_deref().unwrap_or("loglog") {
                        "loglog" => Slack::LogLog { coef },
                        "loglog_over_log" => Slack::LogLogOverLog { coef },
                        other => {
                            return Err(Error::config("t_form", format!("unknown form `{other}`")))
                        }
                    };
                    ThresholdKind::AtMinus { slack }
                }
                other => return Err(Error::config("kind", format!("unknown kind `{other}`"))),
            };
            let cutoff = match doc.get::<String>("b_cutoff")?.as_deref() {
                None | Some("all") => BCutoff::All,
                Some("proof") => BCutoff::Proof,
                Some(other) => {
                    return Err(Error::config(
                        "b_cutoff",
                        format!("unknown cutoff `{other}`"),
                    ))
                }
            };
            Scenario::Complement { threshold, cutoff }
        }
        other => {
            return Err(Error::config(
                "scenario",
                format!("unknown scenario `{other}`"),
            ))
        }
    };
    let good_filter = if matches!(scenario, Scenario::Complement { .. }) {
        doc.get("good_filter")?.unwrap_or(false)
    } else {
        false
    };
    doc.reject_rest(&scenario_name)?;

    let mut config = ExperimentConfig::new(s, limit, scenario);
    if let Some(t) = trials {
        config.trials = t;
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(ws) = windows {
        config.windows = ws.into_iter().map(|[lo, hi]| Window::new(lo, hi)).collect();
    }
    config.good_filter = good_filter;
    config.validate()?;
    Ok(config)
}
