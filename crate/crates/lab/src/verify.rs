//! Self-check suite: re-derives the library's key identities from
//! independent oracles (exact integrals, finite differences, the
//! matrix/measure equivalence) and reports one pass/fail line per check.

use lanczos_core::lanczos::{lanczos, measure_ritz, ritz_values};
use lanczos_core::orthopoly::{
    gauss_legendre, jacobi_deriv, jacobi_eval, jacobi_norm_sq, jacobi_recurrence, largest_zero,
    JacobiParams,
};
use lanczos_core::rng::Rng;
use lanczos_core::spectra::Spectrum;
use lanczos_core::{bounds, experiments, DiagonalOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Fast invariants only (well under a minute).
    Quick,
    /// Adds the large benchmark reproductions at n = 1e5.
    Full,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Self {
        Check {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Check {
            name,
            passed: false,
            detail,
        }
    }
}

/// Deliberate corruptions used to prove the suite can actually fail.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fault {
    /// Perturb the first Gauss-Legendre weight by 1e-6 before the
    /// exactness check.
    pub corrupt_legendre: bool,
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn run_checks(level: Level, fault: Fault) -> Vec<Check> {
    let mut checks = vec![
        check_gauss_legendre(fault),
        check_jacobi_norms(),
        check_jacobi_derivative(),
        check_jacobi_largest_zero(),
        check_oracle_equivalence(),
        check_bessel_limits(),
    ];
    if level == Level::Full {
        checks.push(check_benchmark("benchmark-lap-n1e5", "lap", 0.6169, 0.10));
        checks.push(check_benchmark("benchmark-unif-n1e5", "unif", 1.4458, 0.10));
    }
    checks
}

/// Gauss-Legendre rules with k nodes integrate monomials up to degree
/// 2k - 1 exactly: 0 for odd degrees, 2/(d+1) for even.
fn check_gauss_legendre(fault: Fault) -> Check {
    let name = "gauss-legendre-exactness";
    let mut worst = 0.0f64;
    for k in 1..=20usize {
        let mut rule = gauss_legendre(k);
        if fault.corrupt_legendre {
            rule.weights[0] += 1e-6;
        }
        for d in 0..2 * k {
            let got = rule.integrate(|x| x.powi(d as i32));
            let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
            worst = worst.max((got - exact).abs());
        }
    }
    if worst <= 1e-12 {
        Check::pass(name, format!("max monomial defect {worst:.2e} (k <= 20)"))
    } else {
        Check::fail(name, format!("monomial defect {worst:.2e} exceeds 1e-12"))
    }
}

/// Closed-form squared norms of Jacobi polynomials against exact Gauss
/// quadrature of P_k^2 (1-x)^a (1+x)^b with integer weight exponents, for
/// which the whole integrand is a polynomial.
fn check_jacobi_norms() -> Check {
    let name = "jacobi-norm-identity";
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 2.0)] {
        let p = JacobiParams::new(a, b).unwrap();
        for k in 0..=8u32 {
            let rule = gauss_legendre(k as usize + 4);
            let integral = rule.integrate(|x| {
                let v = jacobi_eval(k, p, x);
                v * v * (1.0 - x).powi(a as i32) * (1.0 + x).powi(b as i32)
            });
            let closed = jacobi_norm_sq(k, p);
            worst = worst.max((integral - closed).abs() / closed);
        }
    }
    if worst <= 1e-12 {
        Check::pass(name, format!("max relative defect {worst:.2e} (k <= 8)"))
    } else {
        Check::fail(name, format!("relative defect {worst:.2e} exceeds 1e-12"))
    }
}

/// Degree-lowering derivative formula against a central finite difference
/// of the three-term-recurrence evaluation.
fn check_jacobi_derivative() -> Check {
    let name = "jacobi-derivative-identity";
    let h = 1e-6;
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.0, 0.0), (0.5, 0.5), (2.0, 1.0), (-0.5, -0.5)] {
        let p = JacobiParams::new(a, b).unwrap();
        for k in 1..=8u32 {
            for i in 0..9 {
                let x = -0.8 + 0.2 * i as f64;
                let fd = (jacobi_eval(k, p, x + h) - jacobi_eval(k, p, x - h)) / (2.0 * h);
                let scale = fd.abs().max(1.0);
                worst = worst.max((jacobi_deriv(k, p, x) - fd).abs() / scale);
            }
        }
    }
    if worst <= 1e-8 {
        Check::pass(name, format!("max relative defect {worst:.2e} (k <= 8)"))
    } else {
        Check::fail(name, format!("relative defect {worst:.2e} exceeds 1e-8"))
    }
}

/// Largest zeros of ultraspherical Jacobi polynomials: increasing in the
/// degree and below sqrt(1 - ((a + 3/2)/(k + a + 1/2))^2) for a >= 0.
fn check_jacobi_largest_zero() -> Check {
    let name = "jacobi-largest-zero";
    for &a in &[0.0, 1.0, 2.0, 5.0] {
        let p = JacobiParams::new(a, a).unwrap();
        let rec = jacobi_recurrence(p, 31);
        let mut prev = f64::NEG_INFINITY;
        for k in 2..=30usize {
            let zero = match largest_zero(&rec, k) {
                Ok(z) => z,
                Err(e) => return Check::fail(name, format!("largest_zero failed: {e}")),
            };
            let r = (a + 1.5) / (k as f64 + a + 0.5);
            let cap = (1.0 - r * r).sqrt();
            if zero > cap + 1e-12 {
                return Check::fail(
                    name,
                    format!("zero {zero:.6} above cap {cap:.6} at k={k}, a={a}"),
                );
            }
            if zero <= prev {
                return Check::fail(name, format!("zeros not increasing at k={k}, a={a}"));
            }
            prev = zero;
        }
    }
    Check::pass(name, "caps and monotonicity hold for k <= 30".into())
}

/// Lanczos on a diagonal operator and the Stieltjes recurrence on the
/// equivalent chi-square measure produce the same Ritz values.
fn check_oracle_equivalence() -> Check {
    let name = "matrix-measure-equivalence";
    let mut rng = Rng::new(0x5EED);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = 10 + (rng.next_u64() % 41) as usize;
        let m = 2 + (rng.next_u64() % 9) as usize;
        let values: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let spec = Spectrum::from_pairs(values.into_iter().map(|v| (v, 1)));
        let y: Vec<f64> = (0..n).map(|_| rng.chi_square_1()).collect();
        let op = DiagonalOperator::new(spec.expand());
        let b: Vec<f64> = y.iter().map(|v| v.sqrt()).collect();
        let dense = match lanczos(&op, &b, m, true) {
            Ok(t) => ritz_values(&t),
            Err(e) => return Check::fail(name, format!("lanczos failed: {e}")),
        };
        let model = match measure_ritz(&spec, &y, m) {
            Ok(r) => r,
            Err(e) => return Check::fail(name, format!("measure model failed: {e}")),
        };
        for (x, y) in dense.ritz.iter().zip(&model.ritz) {
            worst = worst.max((x - y).abs());
        }
    }
    if worst <= 1e-8 {
        Check::pass(name, format!("max Ritz deviation {worst:.2e} over 20 runs"))
    } else {
        Check::fail(name, format!("Ritz deviation {worst:.2e} exceeds 1e-8"))
    }
}

/// The three limiting constants j_{1,a}^2 / 4: pi^2/16 and pi^2/4 exactly
/// for a = -1/2 and 1/2, and 1.4458 for a = 0 (series-bisection value).
fn check_bessel_limits() -> Check {
    let name = "bessel-limits";
    let pi = std::f64::consts::PI;
    let cases = [
        (-0.5, pi * pi / 16.0, 1e-10),
        (0.5, pi * pi / 4.0, 1e-10),
        (0.0, 1.4458, 1e-4),
    ];
    let mut details = Vec::new();
    for (a, target, tol) in cases {
        let got = match bounds::bessel_limit(a) {
            Ok(v) => v,
            Err(e) => return Check::fail(name, format!("bessel_limit({a}) failed: {e}")),
        };
        if (got - target).abs() > tol {
            return Check::fail(
                name,
                format!("limit at a={a}: got {got:.10}, want {target:.10} +/- {tol:.0e}"),
            );
        }
        details.push(format!("a={a}: {got:.6}"));
    }
    Check::pass(name, details.join(", "))
}

/// Reproduces the large-n benchmark on the streaming measure path: the
/// mean m^2-scaled error averaged over m in [80, 100] must land within
/// the stated fraction of the limiting constant.
fn check_benchmark(name: &'static str, kind: &str, target: f64, rel_tol: f64) -> Check {
    let cfg = runnable(kind);
    let stats = match experiments::run_experiment(&cfg) {
        Ok(s) => s,
        Err(e) => return Check::fail(name, format!("experiment failed: {e}")),
    };
    let mut sum = 0.0;
    let mut count = 0usize;
    for m in 80..=100 {
        match stats.row(m) {
            Some(row) => {
                sum += row.mean;
                count += 1;
            }
            None => return Check::fail(name, format!("missing row m={m}")),
        }
    }
    let mean = sum / count as f64;
    let rel = (mean - target).abs() / target;
    if rel <= rel_tol {
        Check::pass(
            name,
            format!("mean scaled error {mean:.4} vs limit {target:.4} (off by {:.1}%)", 100.0 * rel),
        )
    } else {
        Check::fail(
            name,
            format!("mean scaled error {mean:.4} vs limit {target:.4} (off by {:.1}%)", 100.0 * rel),
        )
    }
}

fn runnable(kind: &str) -> experiments::ExperimentConfig {
    let kind = match kind {
        "lap" => experiments::SpectrumKind::Lap,
        "unif" => experiments::SpectrumKind::Unif,
        _ => unreachable!("fixed benchmark kinds"),
    };
    let mut cfg = experiments::ExperimentConfig::new(kind, 100_000, 100, 20, 20_260_826);
    cfg.path = experiments::RunPath::Measure;
    cfg
}
