//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line before asserting.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use common::gamma_by_quadrature;
use pseudopowers_core::constants::{lambda, thm1_threshold};
use pseudopowers_core::experiments::{
    run_monte_carlo, BCutoff, ExperimentConfig, Scenario, ThresholdKind, Window,
};
use pseudopowers_core::io::emit_results;
use pseudopowers_core::lemmasums::{
    distinct_ordered_sum, expected_rep_weight_thm1, expected_rep_weight_thm2, proof_cutoff,
    refined_limit_error,
};
use pseudopowers_core::model::{
    build_complement, sample_sequence, ComplementSpec, CountingFunction,
};
use pseudopowers_core::sumset::{density, gap_stats, naive_sumset, s_fold_sumset};

/// Goes to the raw stderr handle, which the test harness does not capture.
fn report(id: u32, ok: bool, detail: String) {
    let line = format!(
        "criterion {id}: {} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_01_constants() {
    let start = Instant::now();
    let l2 = lambda(2).unwrap();
    let l3 = lambda(3).unwrap();
    let g = gamma_by_quadrature(1.0 / 3.0);
    let l3_oracle = g.powi(3) / (27.0 * 6.0);
    let t2 = thm1_threshold(2).unwrap();
    // Closed form for s = 2: λ = π/8, so 1/(λ(1 - 2λ)) = 32/(π(4 - π)).
    let t2_exact = 32.0 / (PI * (4.0 - PI));
    let elapsed = start.elapsed().as_secs_f64();
    let ok = (l2 - PI / 8.0).abs() <= 1e-12
        && (l3 - l3_oracle).abs() <= 1e-10
        && (t2 - t2_exact).abs() <= 1e-9
        && (t2 - 11.865).abs() <= 0.001
        && elapsed < 1.0;
    report(
        1,
        ok,
        format!(
            "lambda(2) - pi/8 = {:.2e}, lambda(3) - oracle = {:.2e}, thm1_threshold(2) = {t2:.9} \
             (closed form {t2_exact:.9}, band 11.865 +- 0.001), {elapsed:.3}s",
            l2 - PI / 8.0,
            l3 - l3_oracle
        ),
    );
}

#[test]
fn criterion_02_sumset_density() {
    let n_max = 1_000_000;
    let target = 1.0 - (-PI / 8.0).exp();
    let densities: Vec<f64> = (0..20)
        .map(|t| {
            let a = sample_sequence(2, n_max, 2024, t).unwrap();
            let set = s_fold_sumset(a.elements(), 2, n_max, false);
            density(&set, n_max / 2, n_max).unwrap()
        })
        .collect();
    let mean = densities.iter().sum::<f64>() / densities.len() as f64;
    report(
        2,
        (mean - target).abs() <= 0.02,
        format!("mean density {mean:.5} vs {target:.5} over 20 trials"),
    );
}

#[test]
fn criterion_03_ordered_sum_limit() {
    let start = Instant::now();
    let v = distinct_ordered_sum(2, 10_000, 1).unwrap();
    let grid = [500, 1000, 1500, 2000, 2500, 3000, 3500, 4000];
    let errs = refined_limit_error(2, &grid).unwrap();
    let first = errs[0].1;
    let no_growth = errs.iter().all(|&(_, e)| e <= first);
    let elapsed = start.elapsed().as_secs_f64();
    let ok = ((v - PI / 2.0) / (PI / 2.0)).abs() <= 0.10 && no_growth && elapsed < 60.0;
    let shown: Vec<String> = errs.iter().map(|(z, e)| format!("{z}:{e:.4}")).collect();
    report(
        3,
        ok,
        format!(
            "sum(2, 1e4, 1) = {v:.6} vs pi/2 = {:.6}; scaled errors [{}]; {elapsed:.2}s",
            PI / 2.0,
            shown.join(" ")
        ),
    );
}

#[test]
fn criterion_04_sumset_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for i in 0..200u64 {
        let s = 2 + (i % 2) as u32;
        let distinct = (i / 2) % 2 == 0;
        let n_max = 20 + rng.next_u64() % 1981;
        let elements: Vec<u64> = if i % 4 < 2 {
            sample_sequence(s, n_max, 100 + i, i)
                .unwrap()
                .elements()
                .to_vec()
        } else {
            let k = 1 + rng.next_u64() % 120;
            (0..k).map(|_| 1 + rng.next_u64() % n_max).collect()
        };
        let fast = s_fold_sumset(&elements, s, n_max, distinct);
        let slow = naive_sumset(&elements, s, n_max, distinct).unwrap();
        if fast != slow {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        mismatches == 0 && elapsed < 60.0,
        format!("{mismatches} mismatches in 200 instances, {elapsed:.2}s"),
    );
}

#[test]
fn criterion_05_gap_band() {
    let n_max = 1_000_000;
    let (lo, hi) = (0.3 * 8.0 / PI, 3.0 * 8.0 / PI);
    let ratios: Vec<f64> = (0..10)
        .map(|t| {
            let a = sample_sequence(2, n_max, 55, t).unwrap();
            let set = s_fold_sumset(a.elements(), 2, n_max, false);
            gap_stats(&set, n_max / 2, n_max)
                .unwrap()
                .max_ratio
                .unwrap()
        })
        .collect();
    let inside = ratios.iter().filter(|&&r| lo <= r && r <= hi).count();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    report(
        5,
        inside >= 8,
        format!(
            "{inside}/10 max gap ratios in [{lo:.3}, {hi:.3}]: {}",
            shown.join(" ")
        ),
    );
}

#[test]
fn criterion_06_basis_order() {
    let n_max = 1_000_000;
    let mut cfg = ExperimentConfig::new(
        2,
        n_max,
        Scenario::BasisOrder {
            c: 15.0,
            require_distinct: false,
        },
    );
    cfg.trials = 10;
    cfg.seed = 6;
    cfg.windows = vec![Window::new(1 << 17, n_max), Window::upper_half(n_max)];
    let r = run_monte_carlo(&cfg).unwrap();
    let monotone = r
        .reports
        .iter()
        .filter(|t| {
            t.windows[0]
                .dyadic
                .windows(2)
                .all(|d| d[1].count <= d[0].count)
        })
        .count();
    let zero = r
        .reports
        .iter()
        .filter(|t| t.windows[1].exceptional_count == 0)
        .count();
    let counts: Vec<String> = r
        .reports
        .iter()
        .map(|t| {
            let d: Vec<String> = t.windows[0]
                .dyadic
                .iter()
                .map(|d| d.count.to_string())
                .collect();
            d.join("/")
        })
        .collect();
    report(
        6,
        monotone >= 8 && zero > 5,
        format!(
            "dyadic counts non-increasing in {monotone}/10, zero in [N/2, N] in {zero}/10; per-trial {}",
            counts.join(" ")
        ),
    );
}

fn complement_config(threshold: ThresholdKind, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        2,
        100_000,
        Scenario::Complement {
            threshold,
            cutoff: BCutoff::All,
        },
    );
    cfg.trials = 5;
    cfg.seed = seed;
    cfg
}

#[test]
fn criterion_07_complement_below() {
    let cfg = complement_config(ThresholdKind::Below { c: 1.0 }, 7);
    let r = run_monte_carlo(&cfg).unwrap();
    let xs: Vec<u64> = r.reports.iter().map(|t| t.x_n.unwrap()).collect();
    let mean = r.aggregate.x_mean.unwrap();
    let exponent = mean.ln() / (cfg.limit as f64).ln();
    let ok = xs.iter().all(|&x| x >= 1) && (0.3..=0.9).contains(&exponent);
    report(
        7,
        ok,
        format!("X_N per trial {xs:?}, mean {mean:.1}, log mean / log N = {exponent:.4}"),
    );
}

#[test]
fn criterion_08_complement_above() {
    let cfg = complement_config(ThresholdKind::Above { c: 4.0 }, 8);
    let r = run_monte_carlo(&cfg).unwrap();
    let xs: Vec<u64> = r.reports.iter().map(|t| t.x_n.unwrap()).collect();
    let zero = xs.iter().filter(|&&x| x == 0).count();
    report(8, zero >= 4, format!("X_N per trial {xs:?}, {zero}/5 zero"));
}

#[test]
fn criterion_09_weight_coherence() {
    let n = 100_000u64;
    let l2 = lambda(2).unwrap();
    let ln_n = (n as f64).ln();
    let w1 = expected_rep_weight_thm1(n, 2, 15.0).unwrap();
    let r1 = w1 / (15.0 * l2 * ln_n);

    let c = 4.0;
    let b = build_complement(&ComplementSpec::plain(CountingFunction::Log { c }), n).unwrap();
    let m = proof_cutoff(&b, n, c, 2).unwrap().unwrap();
    let w2 = expected_rep_weight_thm2(n, 2, &b, m).unwrap();
    let r2 = w2 / ((c * l2 + 1.0) / 2.0 * ln_n);
    let band = 0.7..=1.3;
    report(
        9,
        band.contains(&r1) && band.contains(&r2),
        format!("thm1 weight {w1:.4}, ratio {r1:.4}; thm2 weight {w2:.4} (m = {m}), ratio {r2:.4}; band [0.7, 1.3]"),
    );
}

#[test]
fn criterion_10_determinism() {
    let mut cfg = complement_config(ThresholdKind::Below { c: 1.5 }, 10);
    cfg.limit = 20_000;
    cfg.windows = vec![Window::upper_half(20_000), Window::new(1000, 5000)];
    let digests = |tag: &str| {
        let dir = tempfile::tempdir().unwrap();
        let r = run_monte_carlo(&cfg).unwrap();
        let m = emit_results(&r, dir.path(), &[]).unwrap();
        let on_disk = fs::read(dir.path().join("result.json")).unwrap();
        assert_eq!(
            pseudopowers_core::io::sha256_hex(&on_disk),
            m.files[0].sha256,
            "{tag}"
        );
        m.files
    };
    let a = digests("first");
    let b = digests("second");
    let shown: Vec<String> = a
        .iter()
        .map(|f| format!("{} {}", f.path, &f.sha256[..16]))
        .collect();
    report(
        10,
        a == b,
        format!("two runs, digests {}", shown.join(", ")),
    );
}
