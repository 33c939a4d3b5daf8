//! s-fold sumsets, representation counts and gap statistics.
//!
//! The unrestricted sumset `sA` is built by repeated shifted-OR of the
//! current bitmap by every element of `A`. The distinct-parts sumset uses a
//! layered subset-sum: layer `j` holds the sums of `j` pairwise distinct
//! elements seen so far, and each new element updates the layers from the
//! top down so it is used at most once.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};

/// Upper bound on `|A|^s` accepted by [`naive_sumset`].
pub const NAIVE_GUARD: u128 = 100_000_000;

/// Upper bound on `|A ∩ [1, n]|^(parts - 1)` accepted by [`count_representations`].
pub const REPRESENTATION_GUARD: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsetBitmap {
    pub s: u32,
    pub limit: u64,
    pub distinct: bool,
    pub members: Bitmap,
}

impl SumsetBitmap {
    pub fn contains(&self, n: u64) -> bool {
        self.members.contains(n)
    }
}

fn base_bitmap(elements: &[u64], limit: u64) -> Bitmap {
    Bitmap::from_values(limit, elements.iter().copied())
}

/// `{a_1 + … + a_s <= N : a_i ∈ A}`, with pairwise distinct parts when `distinct`.
///
/// `elements` may be in any order; duplicates and values outside `[1, N]`
/// are ignored.
pub fn s_fold_sumset(elements: &[u64], s: u32, limit: u64, distinct: bool) -> SumsetBitmap {
    assert!(s >= 1, "s-fold sumset needs s >= 1");
    let base = base_bitmap(elements, limit);
    let members = if distinct {
        let mut layers = DistinctLayers::new(s, limit);
        for a in base.iter() {
            layers.push(a);
        }
        layers.into_top()
    } else {
        let parts: Vec<u64> = base.iter().collect();
        let mut current = base;
        for _ in 1..s {
            let mut next = Bitmap::new(limit);
            for &a in &parts {
                if a >= limit {
                    break;
                }
                next.or_shifted(&current, a);
            }
            current = next;
        }
        current
    };
    SumsetBitmap {
        s,
        limit,
        distinct,
        members,
    }
}

/// Layered distinct-parts subset sums over `[1, N]`.
///
/// Elements can be pushed in any order; each must be pushed at most once.
/// After the pushes, [`DistinctLayers::top`] holds the sums of exactly `s`
/// pairwise distinct pushed elements.
#[derive(Clone, Debug)]
pub struct DistinctLayers {
    layers: Vec<Bitmap>,
    pushed: usize,
}

impl DistinctLayers {
    pub fn new(s: u32, limit: u64) -> Self {
        assert!(s >= 1);
        DistinctLayers {
            layers: (0..s).map(|_| Bitmap::new(limit)).collect(),
            pushed: 0,
        }
    }

    pub fn push(&mut self, a: u64) {
        let limit = self.layers[0].len();
        if a == 0 || a > limit {
            return;
        }
        // Layer j only becomes reachable once j elements have been pushed.
        let top = self.layers.len().min(self.pushed + 1);
        for j in (1..top).rev() {
            let (lower, upper) = self.layers.split_at_mut(j);
            upper[0].or_shifted(&lower[j - 1], a);
        }
        self.layers[0].insert(a);
        self.pushed += 1;
    }

    pub fn top(&self) -> &Bitmap {
        self.layers.last().expect("at least one layer")
    }

    pub fn into_top(mut self) -> Bitmap {
        self.layers.pop().expect("at least one layer")
    }
}

/// Brute-force reference for [`s_fold_sumset`] by enumerating all
/// non-decreasing (or strictly increasing) `s`-tuples of elements.
pub fn naive_sumset(elements: &[u64], s: u32, limit: u64, distinct: bool) -> Result<SumsetBitmap> {
    let mut parts: Vec<u64> = elements
        .iter()
        .copied()
        .filter(|&a| a >= 1 && a <= limit)
        .collect();
    parts.sort_unstable();
    parts.dedup();
    let work = (parts.len() as u128).saturating_pow(s);
    if work > NAIVE_GUARD {
        return Err(Error::guard(format!(
            "naive sumset over {} elements with s = {s} exceeds {NAIVE_GUARD} tuples",
            parts.len()
        )));
    }

    fn recurse(parts: &[u64], start: usize, left: u32, sum: u64, distinct: bool, out: &mut Bitmap) {
        if left == 0 {
            if sum >= 1 && sum <= out.len() {
                out.insert(sum);
            }
            return;
        }
        for i in start..parts.len() {
            let next = sum + parts[i];
            if next > out.len() {
                break;
            }
            let from = if distinct { i + 1 } else { i };
            recurse(parts, from, left - 1, next, distinct, out);
        }
    }

    let mut members = Bitmap::new(limit);
    if s >= 1 {
        recurse(&parts, 0, s, 0, distinct, &mut members);
    }
    Ok(SumsetBitmap {
        s,
        limit,
        distinct,
        members,
    })
}

fn check_window(set: &Bitmap, lo: u64, hi: u64) -> Result<()> {
    if lo < 1 || lo > hi || hi > set.len() {
        return Err(Error::domain(format!(
            "window [{lo}, {hi}] not inside [1, {}]",
            set.len()
        )));
    }
    Ok(())
}

/// `|S ∩ [L, R]| / (R - L + 1)`.
pub fn density(set: &SumsetBitmap, lo: u64, hi: u64) -> Result<f64> {
    check_window(&set.members, lo, hi)?;
    Ok(set.members.count_range(lo, hi) as f64 / (hi - lo + 1) as f64)
}

/// Consecutive gaps of a set inside a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub lo: u64,
    pub hi: u64,
    /// Ordered members `b_1 < … < b_k` of the window.
    pub elements: Vec<u64>,
    /// `b_{i+1} - b_i`.
    pub gaps: Vec<u64>,
    /// `max (b_{i+1} - b_i) / ln b_i`, over gaps with `b_i >= 2`.
    pub max_ratio: Option<f64>,
    /// Left endpoint `b_i` attaining `max_ratio`.
    pub argmax: Option<u64>,
}

/// Gap statistics of `S ∩ [L, R]`; needs at least two members in the window.
pub fn gap_stats(set: &SumsetBitmap, lo: u64, hi: u64) -> Result<GapStats> {
    check_window(&set.members, lo, hi)?;
    let elements: Vec<u64> = set.members.iter_range(lo, hi).collect();
    if elements.len() < 2 {
        return Err(Error::domain(format!(
            "window [{lo}, {hi}] holds {} elements, need at least 2",
            elements.len()
        )));
    }
    let gaps: Vec<u64> = elements.windows(2).map(|w| w[1] - w[0]).collect();
    let mut max_ratio: Option<f64> = None;
    let mut argmax = None;
    for (w, &g) in elements.windows(2).zip(&gaps) {
        // ln 1 = 0: a gap starting at 1 has no finite ratio.
        if w[0] < 2 {
            continue;
        }
        let r = g as f64 / (w[0] as f64).ln();
        if max_ratio.is_none_or(|m| r > m) {
            max_ratio = Some(r);
            argmax = Some(w[0]);
        }
    }
    Ok(GapStats {
        lo,
        hi,
        elements,
        gaps,
        max_ratio,
        argmax,
    })
}

/// Constraints on the sorted parts `x_1 >= x_2 >= … >= x_k` of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepConstraints {
    /// Strictly decreasing parts when set, otherwise non-increasing.
    pub distinct: bool,
    /// Every part except the smallest must exceed this.
    pub min_large_part: u64,
    /// The smallest part must be strictly below this.
    pub smallest_part_bound: u64,
    pub count_of_parts: u32,
}

impl RepConstraints {
    pub fn parts(count_of_parts: u32, distinct: bool) -> Self {
        RepConstraints {
            distinct,
            min_large_part: 0,
            smallest_part_bound: u64::MAX,
            count_of_parts,
        }
    }
}

/// Number of representations `n = x_1 + … + x_k` with parts in `A`,
/// ordered `x_1 >= … >= x_k` (`>` when distinct) and obeying `constraints`.
///
/// The outer parts are chosen by recursion over the sorted elements and the
/// final two by a two-pointer sweep, so the cost is about
/// `|A ∩ [1, n]|^(k - 1)`; larger problems are refused.
pub fn count_representations(n: u64, elements: &[u64], constraints: RepConstraints) -> Result<u64> {
    let k = constraints.count_of_parts;
    let mut parts: Vec<u64> = elements
        .iter()
        .copied()
        .filter(|&a| a >= 1 && a <= n)
        .collect();
    parts.sort_unstable();
    parts.dedup();
    if k == 0 {
        return Ok(u64::from(n == 0));
    }
    let work = (parts.len() as u128).saturating_pow(k - 1);
    if work > REPRESENTATION_GUARD {
        return Err(Error::guard(format!(
            "representation count over {} parts with k = {k} exceeds {REPRESENTATION_GUARD}",
            parts.len()
        )));
    }
    let mut counter = RepCounter {
        parts: &parts,
        c: constraints,
    };
    Ok(counter.count(n, k, parts.len()))
}

struct RepCounter<'a> {
    parts: &'a [u64],
    c: RepConstraints,
}

impl RepCounter<'_> {
    /// Representations of `rem` by `left` parts drawn from `parts[..end]`
    /// (the slice bound encodes the ordering against the previous part).
    fn count(&mut self, rem: u64, left: u32, end: usize) -> u64 {
        let parts = &self.parts[..end];
        match left {
            1 => {
                // Only reached when k == 1: the single part is the smallest.
                let ok = rem < self.c.smallest_part_bound && parts.binary_search(&rem).is_ok();
                u64::from(ok)
            }
            2 => self.count_pairs(rem, parts),
            _ => {
                let mut total = 0;
                for i in (0..parts.len()).rev() {
                    let x = parts[i];
                    if x <= self.c.min_large_part {
                        break;
                    }
                    if x > rem {
                        continue;
                    }
                    // Remaining parts are each <= x, and the rest must fit.
                    if (left as u64 - 1).saturating_mul(x) < rem - x {
                        break;
                    }
                    let next_end = if self.c.distinct { i } else { i + 1 };
                    total += self.count(rem - x, left - 1, next_end);
                }
                total
            }
        }
    }

    /// Pairs `x >= y` (or `x > y`) from `parts` with `x + y = rem`, where `x`
    /// is a large part and `y` the smallest part.
    fn count_pairs(&self, rem: u64, parts: &[u64]) -> u64 {
        if parts.is_empty() {
            return 0;
        }
        let (mut i, mut j) = (0usize, parts.len() - 1);
        let mut total = 0;
        while i < j || (!self.c.distinct && i == j) {
            let (y, x) = (parts[i], parts[j]);
            match (y + x).cmp(&rem) {
                Ordering::Equal => {
                    if x > self.c.min_large_part && y < self.c.smallest_part_bound {
                        total += 1;
                    }
                    if j == 0 {
                        break;
                    }
                    i += 1;
                    j -= 1;
                }
                Ordering::Less => i += 1,
                Ordering::Greater => {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                }
            }
        }
        total
    }
}
