//! Weighted composition sums behind the expected representation counts.
//!
//! Everything here is built from the weight `f(x) = x^{-1+1/s}`, which is
//! `s · P(x ∈ A)`. Sums over strictly ordered tuples are obtained either by
//! direct enumeration or from power-sum convolutions through the identity
//! `e_s = Σ_{λ ⊢ s} ε_λ p_λ / z_λ` between elementary and power-sum
//! symmetric functions.

use crate::constants::lambda;
use crate::error::{Error, Result};
use crate::model::{probability, ComplementSequence};

/// Estimated tuple count above which [`distinct_ordered_sum`] switches from
/// enumeration to the convolution route.
pub const ENUMERATION_GUARD: f64 = 2.0e7;

/// Largest `z` (for `s >= 3`) the quadratic convolution route accepts.
pub const CONVOLUTION_GUARD: u64 = 200_000;

/// Largest `n` accepted by [`correlation_bruteforce`].
pub const CORRELATION_MAX_N: u64 = 200;

/// Largest `|Ω_n|` accepted by [`correlation_bruteforce`].
pub const CORRELATION_MAX_OMEGA: usize = 4_000;

fn weight(x: u64, s: u32) -> f64 {
    (x as f64).powf(-1.0 + 1.0 / s as f64)
}

fn weight_table(s: u32, z_max: u64) -> Vec<f64> {
    let mut f = vec![0.0; z_max as usize + 1];
    for (x, slot) in f.iter_mut().enumerate().skip(1) {
        *slot = weight(x as u64, s);
    }
    f
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `w[t][z] = Σ_{x_1 + … + x_t = z, x_i >= 1} (x_1 ⋯ x_t)^{-1+1/s}` for
/// `1 <= t <= t_max`, `0 <= z <= Z` (`w[t][z] = 0` for `z < t`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightArray {
    pub s: u32,
    pub t_max: u32,
    pub z_max: u64,
    rows: Vec<Vec<f64>>,
}

impl WeightArray {
    pub fn get(&self, t: u32, z: u64) -> f64 {
        assert!(t >= 1 && t <= self.t_max && z <= self.z_max);
        self.rows[t as usize - 1][z as usize]
    }

    pub fn row(&self, t: u32) -> &[f64] {
        &self.rows[t as usize - 1]
    }
}

/// Iterated convolution of the weight with itself, `O(t_max · Z²)`.
pub fn weight_convolution(s: u32, t_max: u32, z_max: u64) -> Result<WeightArray> {
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    if t_max < 1 || t_max > s {
        return Err(Error::domain(format!("t_max = {t_max} outside 1..={s}")));
    }
    if z_max < 1 {
        return Err(Error::domain("Z must be at least 1"));
    }
    let base = weight_table(s, z_max);
    let mut rows = vec![base.clone()];
    for t in 2..=t_max as usize {
        let prev = &rows[t - 2];
        let mut row = vec![0.0; z_max as usize + 1];
        for (z, slot) in row.iter_mut().enumerate().skip(t) {
            let mut acc = CompensatedSum::default();
            for x in 1..=z + 1 - t {
                acc.add(base[x] * prev[z - x]);
            }
            *slot = acc.value();
        }
        rows.push(row);
    }
    Ok(WeightArray {
        s,
        t_max,
        z_max,
        rows,
    })
}

fn check_t_below_s(s: u32, t: u32) -> Result<()> {
    if s < 2 || t < 1 || t > s - 1 {
        return Err(Error::domain(format!(
            "need s >= 2 and 1 <= t <= s - 1, got s = {s}, t = {t}"
        )));
    }
    Ok(())
}

/// `(z, w[t][z] · z^{1 - t/s})` for each `z` in the grid.
pub fn lemma_i_ratio_scan(s: u32, t: u32, z_grid: &[u64]) -> Result<Vec<(u64, f64)>> {
    check_t_below_s(s, t)?;
    let Some(&z_max) = z_grid.iter().max() else {
        return Ok(Vec::new());
    };
    if z_grid.contains(&0) {
        return Err(Error::domain("z grid must not contain 0"));
    }
    let w = weight_convolution(s, t, z_max)?;
    Ok(lemma_i_ratios(&w, t, z_grid))
}

/// Same as [`lemma_i_ratio_scan`] on a precomputed array.
pub fn lemma_i_ratios(w: &WeightArray, t: u32, z_grid: &[u64]) -> Vec<(u64, f64)> {
    let expo = 1.0 - t as f64 / w.s as f64;
    z_grid
        .iter()
        .map(|&z| (z, w.get(t, z) * (z as f64).powf(expo)))
        .collect()
}

/// `Σ_{r < z} w[t][r] · (z - r)^{-2t/s}`.
pub fn lemma_ii_sum(s: u32, t: u32, z: u64) -> Result<f64> {
    check_t_below_s(s, t)?;
    if z < 2 {
        return Err(Error::domain(format!(
            "lemma (ii) sum needs z >= 2, got {z}"
        )));
    }
    let w = weight_convolution(s, t, z)?;
    Ok(lemma_ii_from(&w, t, z))
}

/// [`lemma_ii_sum`] on a precomputed array covering `z`.
pub fn lemma_ii_from(w: &WeightArray, t: u32, z: u64) -> f64 {
    let expo = -2.0 * t as f64 / w.s as f64;
    let row = w.row(t);
    let mut acc = CompensatedSum::default();
    for r in t as u64..z {
        acc.add(row[r as usize] * ((z - r) as f64).powf(expo));
    }
    acc.value()
}

fn enumeration_cost(s: u32, z: u64) -> f64 {
    let mut cost = 1.0;
    for k in 1..s {
        cost *= z as f64 / k as f64;
    }
    cost
}

/// `Σ_{g <= x_s < … < x_1, x_1 + … + x_s = z} Π x_i^{-1+1/s}`.
///
/// Small instances are enumerated; larger ones go through
/// [`distinct_ordered_sum_convolution`]. A lower cutoff `g = 0` is the same
/// as `g = 1`.
pub fn distinct_ordered_sum(s: u32, z: u64, g: u64) -> Result<f64> {
    if enumeration_cost(s, z) <= ENUMERATION_GUARD {
        distinct_ordered_sum_enumerated(s, z, g)
    } else {
        distinct_ordered_sum_convolution(s, z, g)
    }
}

/// Direct enumeration of the strictly ordered tuples.
pub fn distinct_ordered_sum_enumerated(s: u32, z: u64, g: u64) -> Result<f64> {
    if s < 1 {
        return Err(Error::domain("need at least one part"));
    }
    if enumeration_cost(s, z) > ENUMERATION_GUARD {
        return Err(Error::guard(format!(
            "enumerating {s}-part tuples of {z} exceeds {ENUMERATION_GUARD:e}"
        )));
    }
    let g = g.max(1);
    let f = weight_table(s, z);

    // Parts are picked smallest first; `prev` is the last part chosen.
    fn rec(f: &[f64], rem: u64, left: u32, min_part: u64, acc: f64, out: &mut CompensatedSum) {
        if left == 1 {
            if rem >= min_part {
                out.add(acc * f[rem as usize]);
            }
            return;
        }
        let k = left as u64;
        let mut x = min_part;
        // The remaining `k - 1` parts are each > x.
        while k * x + (k - 1) * k / 2 <= rem {
            rec(f, rem - x, left - 1, x + 1, acc * f[x as usize], out);
            x += 1;
        }
    }

    let mut out = CompensatedSum::default();
    rec(&f, z, s, g, 1.0, &mut out);
    Ok(out.value())
}

/// Integer partitions of `n` as non-increasing part lists.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `ε_λ / z_λ` for a partition of `s`.
fn partition_coefficient(s: u32, parts: &[u32]) -> f64 {
    let mut z_lambda = 1.0;
    let mut i = 0;
    while i < parts.len() {
        let p = parts[i];
        let mult = parts[i..].iter().take_while(|&&q| q == p).count();
        z_lambda *= (p as f64).powi(mult as i32) * (1..=mult).map(|m| m as f64).product::<f64>();
        i += mult;
    }
    let sign = if (s as usize - parts.len()).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    sign / z_lambda
}

/// Nonzero terms of `p_k(q) = Σ_{x >= g} f(x)^k q^{kx}` up to degree `z_max`.
fn power_sum_terms(f: &[f64], k: u32, g: u64, z_max: u64) -> Vec<(u64, f64)> {
    let k64 = k as u64;
    (g..)
        .take_while(|x| x * k64 <= z_max)
        .map(|x| (x * k64, f[x as usize].powi(k as i32)))
        .collect()
}

/// Coefficients `[q^z] e_s` for `z` in `lo..=hi`, where the variables are
/// `f(x) q^x` for `x >= g`.
fn elementary_coefficients(s: u32, g: u64, lo: u64, hi: u64) -> Result<Vec<f64>> {
    assert!(lo <= hi);
    if s >= 3 && hi > CONVOLUTION_GUARD {
        return Err(Error::guard(format!(
            "convolution route for s = {s} limited to z <= {CONVOLUTION_GUARD}, got {hi}"
        )));
    }
    let g = g.max(1);
    let f = weight_table(s, hi);
    let terms: Vec<Vec<(u64, f64)>> = (1..=s).map(|k| power_sum_terms(&f, k, g, hi)).collect();
    let len = (hi - lo + 1) as usize;
    let mut out = vec![0.0; len];

    for parts in partitions(s) {
        let coeff = partition_coefficient(s, &parts);
        let (last, head) = parts.split_last().expect("non-empty partition");
        // Dense product of all but the last factor, starting from the constant 1.
        let mut dense = vec![0.0; hi as usize + 1];
        dense[0] = 1.0;
        let (mut support_lo, mut support_hi) = (0u64, 0u64);
        for &k in head {
            let factor = &terms[k as usize - 1];
            let mut next = vec![0.0; hi as usize + 1];
            for &(idx, v) in factor {
                let top = support_hi.min(hi - idx);
                for y in support_lo..=top {
                    next[(idx + y) as usize] += v * dense[y as usize];
                }
            }
            support_lo += k as u64 * g;
            support_hi = (support_hi + factor.last().map_or(0, |t| t.0)).min(hi);
            dense = next;
        }
        let last_terms = &terms[*last as usize - 1];
        for (slot, z) in out.iter_mut().zip(lo..=hi) {
            let mut acc = 0.0;
            for &(idx, v) in last_terms {
                if idx + support_lo > z {
                    break;
                }
                acc += v * dense[(z - idx) as usize];
            }
            *slot += coeff * acc;
        }
    }
    Ok(out)
}

/// The ordered sum computed as `1/s!` times the sum over distinct ordered
/// tuples, expanded by inclusion–exclusion over coincidence patterns of
/// the power-sum convolutions.
pub fn distinct_ordered_sum_convolution(s: u32, z: u64, g: u64) -> Result<f64> {
    if s < 1 {
        return Err(Error::domain("need at least one part"));
    }
    if z == 0 {
        return Ok(0.0);
    }
    Ok(elementary_coefficients(s, g, z, z)?[0])
}

/// `(z, |Σ(s, z, 1) - s^s λ_s| · z^{1/(s+1)})` for each `z`.
pub fn refined_limit_error(s: u32, z_grid: &[u64]) -> Result<Vec<(u64, f64)>> {
    let limit = limit_value(s)?;
    z_grid
        .iter()
        .map(|&z| {
            let v = distinct_ordered_sum(s, z, 1)?;
            Ok((
                z,
                (v - limit).abs() * (z as f64).powf(1.0 / (s as f64 + 1.0)),
            ))
        })
        .collect()
}

/// `s^s λ_s`, the limit of the ordered sums as `z → ∞`.
pub fn limit_value(s: u32) -> Result<f64> {
    Ok((s as f64).powi(s as i32) * lambda(s)?)
}

/// Cutoff `(c ln n)^s` separating the small part from the large parts.
pub fn small_part_cutoff(n: u64, s: u32, c: f64) -> f64 {
    (c * (n as f64).ln()).powi(s as i32)
}

/// Expected number of representations
/// `n = x_1 + … + x_{s+1}` with `x_{s+1} < (c ln n)^s < x_s < … < x_1`
/// and all parts in `A`: `Σ_{ω ∈ Ω_n} P(E_ω)`.
pub fn expected_rep_weight_thm1(n: u64, s: u32, c: f64) -> Result<f64> {
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    let cutoff = small_part_cutoff(n, s, c);
    if !(2.0 * cutoff < n as f64) {
        return Err(Error::domain(format!(
            "(c log n)^s = {cutoff} is not below n/2 for n = {n}"
        )));
    }
    // x < cutoff for the small part, x > cutoff for the large ones.
    let small_max = (cutoff.ceil() as u64).saturating_sub(1);
    if small_max < 1 {
        return Ok(0.0);
    }
    let large_min = cutoff.floor() as u64 + 1;
    let lo = n - small_max;
    let coeffs = elementary_coefficients(s, large_min, lo, n - 1)?;
    let mut acc = CompensatedSum::default();
    for x in 1..=small_max {
        acc.add(weight(x, s) * coeffs[(n - x - lo) as usize]);
    }
    Ok(acc.value() / (s as f64).powi(s as i32 + 1))
}

/// `m(n)`: the least `m >= 1` with `B(m) = ⌊(c + λ_s^{-1})/2 · ln n⌋`.
pub fn proof_cutoff(b: &ComplementSequence, n: u64, c: f64, s: u32) -> Result<Option<u64>> {
    let inv = 1.0 / lambda(s)?;
    let target = ((c + inv) / 2.0 * (n as f64).ln()).floor();
    if target < 0.0 {
        return Ok(None);
    }
    let target = target as usize;
    Ok(if target == 0 {
        (b.counting(1) == 0).then_some(1)
    } else {
        b.elements().get(target - 1).copied()
    })
}

/// `Σ_{b ∈ B, b < m} s^{-s} Σ(s, n - b, 1)`: expected number of
/// representations `n = a_1 + … + a_s + b` with distinct `a_i` and `b < m`.
pub fn expected_rep_weight_thm2(n: u64, s: u32, b: &ComplementSequence, m: u64) -> Result<f64> {
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    if 2 * m > n {
        return Err(Error::domain(format!("m = {m} exceeds n/2 for n = {n}")));
    }
    let scale = (s as f64).powi(s as i32);
    let mut acc = CompensatedSum::default();
    for &bb in b.below(m) {
        acc.add(distinct_ordered_sum(s, n - bb, 1)? / scale);
    }
    Ok(acc.value())
}

/// `(Π (1 - p_ω), exp(-Σ p_ω))`, the product term of Janson's inequalities
/// and its exponential upper bound.
pub fn janson_product_bound(weights: &[f64]) -> Result<(f64, f64)> {
    let mut log_prod = 0.0;
    let mut sum = 0.0;
    for &p in weights {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::domain(format!(
                "event probability {p} outside [0, 1/2]"
            )));
        }
        log_prod += (-p).ln_1p();
        sum += p;
    }
    Ok((log_prod.exp(), (-sum).exp()))
}

/// All `ω = {x_1 > … > x_s > (c ln n)^s > x_{s+1}}` with `Σ ω = n`, each
/// listed in increasing order.
pub fn omega_set(n: u64, s: u32, c: f64) -> Result<Vec<Vec<u64>>> {
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    let cutoff = small_part_cutoff(n, s, c);
    let small_max = (cutoff.ceil() as u64).saturating_sub(1);
    let large_min = cutoff.floor() as u64 + 1;

    fn rec(rem: u64, left: u32, min_part: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 1 {
            if rem >= min_part {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let k = left as u64;
        let mut x = min_part;
        while k * x + (k - 1) * k / 2 <= rem {
            cur.push(x);
            rec(rem - x, left - 1, x + 1, cur, out);
            cur.pop();
            x += 1;
        }
    }

    let mut out = Vec::new();
    for small in 1..=small_max.min(n) {
        let mut cur = vec![small];
        rec(n - small, s, large_min, &mut cur, &mut out);
    }
    Ok(out)
}

fn union_probability(a: &[u64], b: &[u64], s: u32) -> f64 {
    let mut p = 1.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        p *= probability(next, s);
    }
    p
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().any(|x| b.binary_search(x).is_ok())
}

/// `Δ_n = Σ_{ω ≠ ω', ω ∩ ω' ≠ ∅} P(E_ω ∩ E_ω')` over ordered pairs of `Ω_n`,
/// by exhaustive enumeration.
pub fn correlation_bruteforce(n: u64, s: u32, c: f64) -> Result<f64> {
    if n > CORRELATION_MAX_N || !(2..=3).contains(&s) {
        return Err(Error::guard(format!(
            "correlation enumeration limited to n <= {CORRELATION_MAX_N} and s in 2..=3"
        )));
    }
    let omega = omega_set(n, s, c)?;
    if omega.len() > CORRELATION_MAX_OMEGA {
        return Err(Error::guard(format!(
            "|Ω_n| = {} exceeds {CORRELATION_MAX_OMEGA}",
            omega.len()
        )));
    }
    let mut acc = CompensatedSum::default();
    for (i, a) in omega.iter().enumerate() {
        for (j, b) in omega.iter().enumerate() {
            if i != j && intersects(a, b) {
                acc.add(union_probability(a, b, s));
            }
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let w = weight_convolution(2, 2, 10).unwrap();
        assert!((w.get(1, 4) - 0.5).abs() < 1e-15);
        assert!((w.get(2, 2) - 1.0).abs() < 1e-15);
        assert!((w.get(2, 3) - 2.0 * 2f64.powf(-0.5)).abs() < 1e-12);
        assert_eq!(w.get(2, 1), 0.0);
        assert!(weight_convolution(2, 3, 10).is_err());
        assert!(weight_convolution(2, 0, 10).is_err());
        assert!(weight_convolution(2, 1, 0).is_err());
    }

    #[test]
    fn lemma_i_trivial_ratio() {
        let r = lemma_i_ratio_scan(2, 1, &[1, 7, 100, 1000]).unwrap();
        for (_, v) in r {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(lemma_i_ratio_scan(2, 2, &[10]).is_err());
    }

    #[test]
    fn lemma_ii_hand_value() {
        let v = lemma_ii_sum(2, 1, 3).unwrap();
        assert!((v - (0.5 + 2f64.powf(-0.5))).abs() < 1e-12);
        assert!((v - 1.207_106_8).abs() < 1e-7);
        assert!(lemma_ii_sum(2, 1, 1).is_err());
    }

    #[test]
    fn distinct_sum_small_values() {
        assert!((distinct_ordered_sum(2, 3, 1).unwrap() - 2f64.powf(-0.5)).abs() < 1e-12);
        assert_eq!(distinct_ordered_sum(2, 2, 1).unwrap(), 0.0);
        assert_eq!(distinct_ordered_sum_convolution(2, 2, 1).unwrap(), 0.0);
        assert!(
            (distinct_ordered_sum_convolution(2, 3, 1).unwrap() - 2f64.powf(-0.5)).abs() < 1e-12
        );
        // 6 = 3 + 2 + 1 is the only strictly decreasing triple.
        let expect = (6f64).powf(-2.0 / 3.0);
        assert!((distinct_ordered_sum(3, 6, 1).unwrap() - expect).abs() < 1e-12);
        assert!((distinct_ordered_sum_convolution(3, 6, 1).unwrap() - expect).abs() < 1e-12);
        assert_eq!(distinct_ordered_sum(3, 6, 2).unwrap(), 0.0);
    }

    #[test]
    fn enumeration_guard_refuses() {
        assert!(matches!(
            distinct_ordered_sum_enumerated(4, 10_000, 1),
            Err(Error::Guard(_))
        ));
        assert!(matches!(
            distinct_ordered_sum_convolution(3, 300_000, 1),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn partition_coefficients_expand_e3() {
        // e_3 = p1^3/6 - p2 p1/2 + p3/3
        let ps = partitions(3);
        assert_eq!(ps, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        let c: Vec<f64> = ps.iter().map(|p| partition_coefficient(3, p)).collect();
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((c[1] + 0.5).abs() < 1e-15);
        assert!((c[2] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn janson_examples() {
        assert_eq!(janson_product_bound(&[]).unwrap(), (1.0, 1.0));
        let (lo, up) = janson_product_bound(&[0.5]).unwrap();
        assert!((lo - 0.5).abs() < 1e-15);
        assert!((up - (-0.5f64).exp()).abs() < 1e-15);
        assert!(janson_product_bound(&[0.6]).is_err());
        assert!(janson_product_bound(&[-0.1]).is_err());
    }

    #[test]
    fn thm1_weight_edge_cases() {
        // (0.1 ln 10)^2 < 1, so no small part exists.
        assert_eq!(expected_rep_weight_thm1(10, 2, 0.1).unwrap(), 0.0);
        assert!(expected_rep_weight_thm1(100, 2, 15.0).is_err());
        assert!(expected_rep_weight_thm1(100, 2, -1.0).is_err());
    }

    #[test]
    fn correlation_edge_cases() {
        // (2 ln 60)^2 > 60 leaves Ω_60 empty.
        assert_eq!(correlation_bruteforce(60, 2, 2.0).unwrap(), 0.0);
        assert!(correlation_bruteforce(201, 2, 0.5).is_err());
        assert!(correlation_bruteforce(100, 4, 0.5).is_err());
        assert!(correlation_bruteforce(60, 2, 0.5).unwrap() > 0.0);
    }
}
