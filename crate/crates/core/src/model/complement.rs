use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack `t(n)` subtracted by [`CountingFunction::AtMinus`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Slack {
    /// `t(n) = coef · λ^{-1} · log log n`.
    LogLog { coef: f64 },
    /// `t(n) = coef · λ^{-1} · log log n / log n`.
    LogLogOverLog { coef: f64 },
}

/// Target counting function `F(n)` for a complement sequence.
///
/// `log log x` is read as `max(0, ln ln x)` so the threshold forms are
/// finite and non-negative on all of `[1, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CountingFunction {
    Zero,
    Identity,
    /// `c · ln n`.
    Log {
        c: f64,
    },
    /// `λ^{-1} ln n + 2 λ^{-1} log log n`.
    AtPlus {
        inv_lambda: f64,
    },
    /// `max(0, λ^{-1} ln n - t(n))`.
    AtMinus {
        inv_lambda: f64,
        slack: Slack,
    },
}

fn loglog(x: f64) -> f64 {
    if x > std::f64::consts::E {
        x.ln().ln()
    } else {
        0.0
    }
}

impl CountingFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            CountingFunction::Zero => 0.0,
            CountingFunction::Identity => x,
            CountingFunction::Log { c } => c * x.ln(),
            CountingFunction::AtPlus { inv_lambda } => {
                inv_lambda * x.ln() + 2.0 * inv_lambda * loglog(x)
            }
            CountingFunction::AtMinus { inv_lambda, slack } => {
                let t = match slack {
                    Slack::LogLog { coef } => coef * inv_lambda * loglog(x),
                    Slack::LogLogOverLog { coef } => {
                        if x > 1.0 {
                            coef * inv_lambda * loglog(x) / x.ln()
                        } else {
                            0.0
                        }
                    }
                };
                (inv_lambda * x.ln() - t).max(0.0)
            }
        }
    }
}

/// A counting function plus whether its running maximum is used.
///
/// The envelope `F̃(n) = max_{k <= n} F(k)` turns a target that dips at small
/// `n` into a non-decreasing one without changing its growth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementSpec {
    pub function: CountingFunction,
    #[serde(default)]
    pub envelope: bool,
}

impl ComplementSpec {
    pub fn plain(function: CountingFunction) -> Self {
        ComplementSpec {
            function,
            envelope: false,
        }
    }

    /// `F(1), …, F(N)`.
    pub fn values(&self, limit: u64) -> Vec<f64> {
        let mut out = Vec::with_capacity(limit as usize);
        let mut running = f64::NEG_INFINITY;
        for n in 1..=limit {
            let mut v = self.function.eval(n as f64);
            if self.envelope {
                running = running.max(v);
                v = running;
            }
            out.push(v);
        }
        out
    }
}

/// Deterministic set `B ⊆ [1, N]` realizing a target counting function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementSequence {
    pub spec: ComplementSpec,
    #[serde(rename = "N")]
    pub limit: u64,
    elements: Vec<u64>,
}

impl ComplementSequence {
    /// Explicit element list, mainly for tests and hand-built scenarios.
    pub fn from_elements(spec: ComplementSpec, limit: u64, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        elements.retain(|&b| b >= 1 && b <= limit);
        ComplementSequence {
            spec,
            limit,
            elements,
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `B(n) = |{b ∈ B : b <= n}|`.
    pub fn counting(&self, n: u64) -> u64 {
        self.elements.partition_point(|&b| b <= n) as u64
    }

    /// Elements strictly below `bound`.
    pub fn below(&self, bound: u64) -> &[u64] {
        &self.elements[..self.elements.partition_point(|&b| b < bound)]
    }
}

/// Realizes `B` from `F`: `n` is in `B` when `⌊F(n)⌋ > ⌊F(n-1)⌋`, and `1`
/// is in `B` when `⌊F(1)⌋ >= 1`.
pub fn build_complement(spec: &ComplementSpec, limit: u64) -> Result<ComplementSequence> {
    let values = spec.values(limit);
    let mut elements = Vec::new();
    let mut prev_value = f64::NEG_INFINITY;
    let mut prev_floor = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        let n = i as u64 + 1;
        if !v.is_finite() {
            return Err(Error::domain(format!(
                "counting target not finite at n = {n}"
            )));
        }
        if v < prev_value {
            return Err(Error::domain(format!(
                "counting target decreases at n = {n} ({prev_value} -> {v})"
            )));
        }
        let fl = v.floor();
        if (n == 1 && fl >= 1.0) || (n > 1 && fl > prev_floor) {
            elements.push(n);
        }
        prev_value = v;
        prev_floor = fl;
    }
    Ok(ComplementSequence {
        spec: *spec,
        limit,
        elements,
    })
}
