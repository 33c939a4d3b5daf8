//! Gamma and λ_s against an independent quadrature of Euler's integral.

mod common;

use common::gamma_by_quadrature;
use pseudopowers_core::constants::{gamma, lambda, thm1_threshold};

// High-precision reference values of Γ on a grid in (0, 20].
const REFERENCE: &[(f64, f64)] = &[
    (0.125, 7.533941598797612),
    (0.2, 4.5908437119988035),
    (0.25, 3.625609908221908),
    (1.0, 1.0),
    (1.875, 0.9534458127450348),
    (2.75, 1.6083594219855457),
    (3.625, 3.8244496633664258),
    (4.5, 11.631728396567448),
    (5.375, 42.862518182666086),
    (6.25, 184.86096222719834),
    (7.125, 910.9984887224346),
    (8.0, 5040.0),
    (8.875, 30882.510636280902),
    (9.75, 207358.59989024868),
    (10.625, 1512504.9216828593),
    (11.5, 11899423.083962249),
    (12.375, 100367698.945125),
    (13.25, 902965985.8229319),
    (14.125, 8626505009.720686),
    (15.0, 87178291200.0),
    (15.875, 928791331689.5476),
    (16.75, 10400601573396.795),
    (17.625, 122085517737738.38),
    (18.5, 1498612053315336.0),
    (19.375, 1.919505731873686e16),
    (19.5, 2.772432298633372e16),
    (20.0, 1.21645100408832e17),
];

#[test]
fn quadrature_oracle_reproduces_known_values() {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    assert!((gamma_by_quadrature(0.5) - sqrt_pi).abs() / sqrt_pi < 1e-12);
}

#[test]
fn gamma_matches_quadrature() {
    for x in [1.0 / 3.0, 0.5, 0.25, 0.2, 1.0 / 6.0] {
        let q = gamma_by_quadrature(x);
        let g = gamma(x).unwrap();
        assert!(((g - q) / q).abs() < 1e-12, "x = {x}: {g} vs {q}");
    }
    // Frozen from the quadrature run.
    assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-14);
}

#[test]
fn gamma_relative_error_on_grid() {
    for &(x, expect) in REFERENCE {
        let g = gamma(x).unwrap();
        let rel = ((g - expect) / expect).abs();
        assert!(rel <= 1e-12, "x = {x}: rel error {rel:e}");
    }
}

#[test]
fn lambda_matches_quadrature_oracle() {
    let g3 = gamma_by_quadrature(1.0 / 3.0);
    let lambda3 = g3.powi(3) / 162.0;
    assert!(((lambda(3).unwrap() - lambda3) / lambda3).abs() < 1e-10);
    assert!((lambda(3).unwrap() - 0.118_68).abs() < 1e-5);

    let g2 = gamma_by_quadrature(0.5);
    let lambda2 = g2 * g2 / 8.0;
    assert!(((lambda(2).unwrap() - lambda2) / lambda2).abs() < 1e-10);

    let t2 = 1.0 / (lambda2 * (1.0 - 2.0 * lambda2));
    assert!((thm1_threshold(2).unwrap() - t2).abs() < 1e-9);
    assert!((t2 - 11.866_063_822).abs() < 1e-8);
}
