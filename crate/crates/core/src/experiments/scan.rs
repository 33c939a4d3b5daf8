use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lemmasums::{proof_cutoff, small_part_cutoff};
use crate::model::ComplementSequence;
use crate::sumset::{s_fold_sumset, DistinctLayers, SumsetBitmap};

use super::config::Window;

/// Exceptional count inside one dyadic sub-window `[2^k, 2^{k+1}) ∩ window`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicCount {
    pub k: u32,
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
}

/// Splits `window` at powers of two and counts `exceptional` in each piece.
pub fn dyadic_counts(exceptional: &[u64], window: Window) -> Vec<DyadicCount> {
    let mut out = Vec::new();
    let mut k = 63 - window.lo.leading_zeros();
    loop {
        let start = 1u64 << k;
        if start > window.hi {
            break;
        }
        let lo = start.max(window.lo);
        let hi = start
            .checked_mul(2)
            .map_or(u64::MAX, |v| v - 1)
            .min(window.hi);
        let a = exceptional.partition_point(|&n| n < lo);
        let b = exceptional.partition_point(|&n| n <= hi);
        out.push(DyadicCount {
            k,
            lo,
            hi,
            count: (b - a) as u64,
        });
        if k == 63 {
            break;
        }
        k += 1;
    }
    out
}

/// Largest integer strictly below `x` (for `x > 0`), saturating at 0.
fn below(x: f64) -> u64 {
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        (x.ceil() as u64).saturating_sub(1)
    }
}

/// `n` in the window with no `a ∈ A`, `a <= small_max(n)`, `n - a ∈ S`.
pub(crate) fn exceptional_with_small_part(
    sumset: &SumsetBitmap,
    elements: &[u64],
    window: Window,
    small_max: impl Fn(u64) -> u64,
) -> Vec<u64> {
    (window.lo..=window.hi)
        .filter(|&n| {
            let bound = small_max(n).min(n.saturating_sub(1));
            !elements
                .iter()
                .take_while(|&&a| a <= bound)
                .any(|&a| sumset.contains(n - a))
        })
        .collect()
}

/// Integers in the window with no representation `a_1 + … + a_{s+1}`,
/// `a_i ∈ A`, whose smallest part is below `(c log n)^s`.
///
/// With `require_distinct` the representation must also satisfy
/// `a_1 > … > a_s > (c log n)^s`, which is the index set used in the
/// probabilistic argument.
pub fn basis_order_scan(
    elements: &[u64],
    s: u32,
    c: f64,
    window: Window,
    require_distinct: bool,
) -> Result<Vec<u64>> {
    check_scan(s, window)?;
    if !(c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    if require_distinct {
        return Ok(separated_distinct_scan(elements, s, c, window));
    }
    let sumset = s_fold_sumset(elements, s, window.hi, false);
    Ok(basis_order_scan_with(&sumset, elements, c, window))
}

pub(crate) fn basis_order_scan_with(
    sumset: &SumsetBitmap,
    elements: &[u64],
    c: f64,
    window: Window,
) -> Vec<u64> {
    let s = sumset.s;
    exceptional_with_small_part(sumset, elements, window, |n| {
        below(small_part_cutoff(n, s, c))
    })
}

/// Proof-mode scan. `n` is processed from the top of the window down so the
/// admissible large parts `{a ∈ A : a > (c log n)^s}` only grow; each enters
/// the distinct-parts layers once.
pub(crate) fn separated_distinct_scan(
    elements: &[u64],
    s: u32,
    c: f64,
    window: Window,
) -> Vec<u64> {
    let mut sorted: Vec<u64> = elements
        .iter()
        .copied()
        .filter(|&a| a >= 1 && a <= window.hi)
        .collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut layers = DistinctLayers::new(s, window.hi);
    let mut next_large = sorted.len();
    let mut exceptional = Vec::new();
    for n in (window.lo..=window.hi).rev() {
        let cutoff = small_part_cutoff(n, s, c);
        while next_large > 0 && (sorted[next_large - 1] as f64) > cutoff {
            next_large -= 1;
            layers.push(sorted[next_large]);
        }
        let top = layers.top();
        let represented = sorted
            .iter()
            .take_while(|&&a| (a as f64) < cutoff && a < n)
            .any(|&a| top.contains(n - a));
        if !represented {
            exceptional.push(n);
        }
    }
    exceptional.reverse();
    exceptional
}

/// Integers in the window with no representation `a_1 + … + a_{s+1}`,
/// `a_i ∈ A`, whose smallest part is at most `n^ε`.
pub fn basis_order_eps_scan(
    elements: &[u64],
    s: u32,
    epsilon: f64,
    window: Window,
) -> Result<Vec<u64>> {
    check_scan(s, window)?;
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let sumset = s_fold_sumset(elements, s, window.hi, false);
    Ok(basis_eps_scan_with(&sumset, elements, epsilon, window))
}

pub(crate) fn basis_eps_scan_with(
    sumset: &SumsetBitmap,
    elements: &[u64],
    epsilon: f64,
    window: Window,
) -> Vec<u64> {
    exceptional_with_small_part(sumset, elements, window, |n| {
        (n as f64).powf(epsilon).floor() as u64
    })
}

/// Integers `n` in the window not of the form `a_1 + … + a_s + b` with
/// distinct `a_i ∈ A` and `b ∈ B`, `b < n`.
pub fn complement_scan(
    elements: &[u64],
    b: &ComplementSequence,
    s: u32,
    window: Window,
) -> Result<Vec<u64>> {
    check_scan(s, window)?;
    let distinct = s_fold_sumset(elements, s, window.hi, true);
    Ok(complement_scan_with_cutoff(&distinct, b, window, |n| n))
}

/// As [`complement_scan`] on a precomputed distinct-parts sumset, using only
/// `b < bound(n)` (and always `b < n`).
pub fn complement_scan_with_cutoff(
    distinct: &SumsetBitmap,
    b: &ComplementSequence,
    window: Window,
    bound: impl Fn(u64) -> u64,
) -> Vec<u64> {
    (window.lo..=window.hi)
        .filter(|&n| {
            let limit = bound(n).min(n);
            !b.below(limit).iter().any(|&bb| distinct.contains(n - bb))
        })
        .collect()
}

/// `m(n)` bound for the proof cutoff of `Above{c}`; `None` pushes the bound
/// to 0 (no usable `b`).
pub(crate) fn above_cutoff(b: &ComplementSequence, c: f64, s: u32) -> impl Fn(u64) -> u64 + '_ {
    move |n| proof_cutoff(b, n, c, s).ok().flatten().unwrap_or(0)
}

/// `true` iff `|n - b| > (log N)^{4s}` for every `b ∈ B`.
pub fn good_bad_classifier(n: u64, limit: u64, b: &ComplementSequence, s: u32) -> Result<bool> {
    if 2 * n < limit || n > limit {
        return Err(Error::domain(format!(
            "n = {n} outside [N/2, N] for N = {limit}"
        )));
    }
    let radius = (limit as f64).ln().powi(4 * s as i32);
    let elems = b.elements();
    let i = elems.partition_point(|&x| x < n);
    let nearest = [i.checked_sub(1), Some(i)]
        .into_iter()
        .flatten()
        .filter_map(|j| elems.get(j))
        .map(|&x| x.abs_diff(n))
        .min();
    Ok(nearest.is_none_or(|d| d as f64 > radius))
}

fn check_scan(s: u32, window: Window) -> Result<()> {
    if s < 1 {
        return Err(Error::domain("s must be at least 1"));
    }
    if window.lo < 1 || window.lo > window.hi {
        return Err(Error::domain(format!(
            "empty window [{}, {}]",
            window.lo, window.hi
        )));
    }
    Ok(())
}
