//! Cross-module properties: the Lanczos/measure-recurrence oracle pair,
//! invariance and interlacing laws under random inputs, and the classical
//! gap-dependent bound exercised on the inverse-Laplacian operator.

use lanczos_core::bounds;
use lanczos_core::lanczos::{lanczos, measure_ritz, ritz_for_sparse, ritz_values};
use lanczos_core::rng::Rng;
use lanczos_core::spectra::{laplacian_inverse_operator, Spectrum};
use lanczos_core::{DiagonalOperator, LinearOperator};
use proptest::prelude::*;

fn random_spectrum(rng: &mut Rng, max_distinct: usize) -> Spectrum {
    let k = 2 + (rng.next_u64() as usize) % (max_distinct - 1);
    let pairs: Vec<(f64, usize)> = (0..k)
        .map(|_| {
            let v = 4.0 * rng.uniform() - 2.0;
            let mult = 1 + (rng.next_u64() as usize) % 3;
            (v, mult)
        })
        .collect();
    Spectrum::from_pairs(pairs)
}

#[test]
fn lanczos_and_measure_recurrence_agree() {
    // the full acceptance sweep runs 100 pairs; this is a fast smoke pass
    let mut rng = Rng::new(2024);
    for trial in 0..25 {
        let spec = random_spectrum(&mut rng, 12);
        let n = spec.n();
        let y: Vec<f64> = (0..n).map(|_| rng.chi_square_1()).collect();
        let b: Vec<f64> = y.iter().map(|v| v.sqrt()).collect();
        let distinct = spec.values().len();
        let m = 1 + (rng.next_u64() as usize) % distinct.min(8);
        let op = DiagonalOperator::new(spec.expand());
        let direct = ritz_values(&lanczos(&op, &b, m, true).unwrap());
        let oracle = measure_ritz(&spec, &y, m).unwrap();
        for (a, b) in direct.ritz.iter().zip(&oracle.ritz) {
            assert!((a - b).abs() < 1e-8, "trial {trial}: {a} vs {b}");
        }
    }
}

#[test]
fn kps_bound_holds_on_inverse_laplacian() {
    // the inverse 1D Laplacian has a dimension-independent gap ratio, so
    // the gap-dependent bound is already non-trivial at m = 20
    let n = 1000usize;
    let m = 20;
    let op = laplacian_inverse_operator(n);
    let mut rng = Rng::new(7);
    let mut b = vec![0.0; n];
    rng.unit_sphere(&mut b);

    // top eigenvector of the inverse operator = eigenvector of the
    // smallest Laplacian eigenvalue: sin(i pi / (n+1))
    let pi = std::f64::consts::PI;
    let phi: Vec<f64> = (1..=n)
        .map(|i| (i as f64 * pi / (n as f64 + 1.0)).sin())
        .collect();
    let phi_norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cos = phi.iter().zip(&b).map(|(p, x)| p * x).sum::<f64>() / phi_norm;
    let tan_sq = (1.0 - cos * cos) / (cos * cos);

    let lam = |i: usize| 1.0 / (2.0 + 2.0 * ((i as f64) * pi / (n as f64 + 1.0)).cos());
    let (lam1, lam2, lamn) = (lam(n), lam(n - 1), lam(1));
    let gamma = (lam1 - lam2) / (lam2 - lamn);
    // closed form for this operator's gap ratio
    let c = (pi / (n as f64 + 1.0)).cos();
    let gamma_closed = (2.0 * c + 1.0) / (2.0 * c - 1.0);
    assert!(
        (gamma - gamma_closed).abs() < 1e-2 * gamma_closed,
        "{gamma} vs {gamma_closed}"
    );

    let report = ritz_for_sparse(&op, &b, m).unwrap();
    let rel_err = (lam1 - report.ritz[0]) / (lam1 - lamn);
    let bound = bounds::kps_bound(gamma, tan_sq, m).unwrap();
    assert!(bound < 1.0, "bound should be non-trivial: {bound}");
    assert!(rel_err <= bound, "{rel_err} > {bound}");
}

#[test]
fn sparse_operator_matches_dense_diagonal_model() {
    // Lanczos on the tridiagonal Laplacian equals Lanczos on its
    // eigenvalue diagonal with the eigenbasis-rotated start vector
    let n = 60;
    let op = lanczos_core::spectra::laplacian_operator(n);
    let mut rng = Rng::new(31);
    let mut b = vec![0.0; n];
    rng.unit_sphere(&mut b);
    let pi = std::f64::consts::PI;
    let norm = (2.0 / (n as f64 + 1.0)).sqrt();
    // rotate b into the eigenbasis: eigenvector k has entries sin(k i pi/(n+1))
    let rotated: Vec<f64> = (1..=n)
        .map(|k| {
            norm * b
                .iter()
                .enumerate()
                .map(|(i, &x)| x * ((k * (i + 1)) as f64 * pi / (n as f64 + 1.0)).sin())
                .sum::<f64>()
        })
        .collect();
    // eigenvector k pairs with eigenvalue 2 - 2 cos(k pi/(n+1))
    let diag: Vec<f64> = (1..=n)
        .map(|k| 2.0 - 2.0 * (k as f64 * pi / (n as f64 + 1.0)).cos())
        .collect();
    let dense = DiagonalOperator::new(diag);
    let a = ritz_for_sparse(&op, &b, 12).unwrap();
    let c = ritz_for_sparse(&dense, &rotated, 12).unwrap();
    for (x, y) in a.ritz.iter().zip(&c.ritz) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn operator_trait_applies_through_references() {
    let op = DiagonalOperator::new(vec![1.0, 2.0]);
    let mut out = [0.0; 2];
    (&op).apply(&[1.0, 1.0], &mut out);
    assert_eq!(out, [1.0, 2.0]);
    assert_eq!((&op).dim(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ritz_contained_and_interlaced(seed in 0u64..10_000) {
        let mut rng = Rng::new(seed);
        let spec = random_spectrum(&mut rng, 10);
        let distinct = spec.values().len();
        let y: Vec<f64> = (0..spec.n()).map(|_| rng.chi_square_1()).collect();
        let m = distinct.min(2 + (seed as usize) % 6);
        let big = measure_ritz(&spec, &y, m).unwrap();
        // containment in the spectral interval
        let (top, bot) = (spec.lambda(1), spec.lambda(spec.n()));
        for &r in &big.ritz {
            prop_assert!(r <= top + 1e-10 && r >= bot - 1e-10);
        }
        if m >= 2 {
            let small = measure_ritz(&spec, &y, m - 1).unwrap();
            for i in 0..m - 1 {
                prop_assert!(big.ritz[i] >= small.ritz[i] - 1e-10);
                prop_assert!(small.ritz[i] >= big.ritz[i + 1] - 1e-10);
            }
        }
    }

    #[test]
    fn shift_scale_equivariance(seed in 0u64..10_000, c in 0.1f64..3.0, d in -2.0f64..2.0) {
        let mut rng = Rng::new(seed);
        let spec = random_spectrum(&mut rng, 8);
        let y: Vec<f64> = (0..spec.n()).map(|_| rng.chi_square_1()).collect();
        let m = spec.values().len().min(4);
        let base = measure_ritz(&spec, &y, m).unwrap();
        let moved_spec = Spectrum::from_pairs(
            spec.values().iter().zip(spec.mults()).map(|(&v, &k)| (c * v + d, k)),
        );
        let moved = measure_ritz(&moved_spec, &y, m).unwrap();
        for (a, b) in base.ritz.iter().zip(&moved.ritz) {
            prop_assert!((c * a + d - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
    }
}
