//! The Lanczos iteration over abstract linear operators, Ritz-value
//! extraction, relative error, and the measure-based oracle that reproduces
//! the same Ritz values from the chi-square weight reformulation.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::orthopoly::{self, ThreeTermRecurrence};
use crate::spectra::Spectrum;
use crate::{dot, norm2, zeros, LinearOperator};

#[derive(Debug, Clone, PartialEq)]
pub enum LanczosError {
    ZeroInitialVector,
    DimensionMismatch { operator: usize, vector: usize },
    TooManyIterations { m: usize, n: usize },
    AllMassesZero,
    SupportTooSmall { m: usize, support: usize },
    ConstantSpectrum,
    IndexOutOfRange { i: usize, m: usize },
}

impl core::error::Error for LanczosError {}

impl fmt::Display for LanczosError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanczosError::ZeroInitialVector => write!(f, "initial vector is zero"),
            LanczosError::DimensionMismatch { operator, vector } => {
                write!(f, "operator dim {operator} != vector dim {vector}")
            }
            LanczosError::TooManyIterations { m, n } => {
                write!(f, "iteration count {m} exceeds dimension {n}")
            }
            LanczosError::AllMassesZero => write!(f, "all chi-square masses are zero"),
            LanczosError::SupportTooSmall { m, support } => {
                write!(f, "m = {m} exceeds measure support size {support}")
            }
            LanczosError::ConstantSpectrum => {
                write!(f, "relative error undefined for a constant spectrum")
            }
            LanczosError::IndexOutOfRange { i, m } => {
                write!(f, "eigenvalue index {i} out of range for {m} Ritz values")
            }
        }
    }
}

/// Lanczos output `T_m`: Rayleigh coefficients `alpha`, positive residual
/// norms `beta`. `m()` is the number of completed iterations, which is less
/// than requested when the iteration broke down early.
#[derive(Debug, Clone)]
pub struct TridiagonalMatrix {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub converged_early: Option<usize>,
}

impl TridiagonalMatrix {
    pub fn m(&self) -> usize {
        self.alpha.len()
    }
}

/// Descending Ritz values of a completed run.
#[derive(Debug, Clone)]
pub struct RitzReport {
    pub ritz: Vec<f64>,
    pub m: usize,
    pub converged_early: Option<usize>,
}

impl RitzReport {
    /// The i-th largest Ritz value (1-based).
    pub fn lambda(&self, i: usize) -> Result<f64, LanczosError> {
        self.ritz
            .get(i - 1)
            .copied()
            .ok_or(LanczosError::IndexOutOfRange { i, m: self.m })
    }
}

/// Runs `m` Lanczos iterations of `op` from `b`.
///
/// With `reorthogonalize` set, each new direction is orthogonalized against
/// all stored basis vectors twice (classical Gram-Schmidt, repeated). The
/// iteration stops early when the residual norm falls below
/// `1e-12 * ||op||`, with the operator norm estimated from a 5-step probe.
pub fn lanczos(
    op: &impl LinearOperator,
    b: &[f64],
    m: usize,
    reorthogonalize: bool,
) -> Result<TridiagonalMatrix, LanczosError> {
    let n = op.dim();
    if b.len() != n {
        return Err(LanczosError::DimensionMismatch {
            operator: n,
            vector: b.len(),
        });
    }
    if m > n {
        return Err(LanczosError::TooManyIterations { m, n });
    }
    if norm2(b) == 0.0 {
        return Err(LanczosError::ZeroInitialVector);
    }
    let norm_est = operator_norm_estimate(op, b);
    Ok(lanczos_raw(op, b, m, reorthogonalize, 1e-12 * norm_est))
}

/// Operator norm estimate: max |Ritz value| of a short unreorthogonalized
/// probe run.
fn operator_norm_estimate(op: &impl LinearOperator, b: &[f64]) -> f64 {
    let steps = 5.min(op.dim());
    let t = lanczos_raw(op, b, steps, false, 0.0);
    let eigs = orthopoly::tridiag_eigenvalues(&t.alpha, &t.beta);
    eigs.iter().fold(f64::MIN_POSITIVE, |acc, &e| acc.max(math::abs(e)))
}

fn lanczos_raw(
    op: &impl LinearOperator,
    b: &[f64],
    m: usize,
    reorthogonalize: bool,
    breakdown: f64,
) -> TridiagonalMatrix {
    let n = op.dim();
    let scale = 1.0 / norm2(b);
    let mut q: Vec<f64> = b.iter().map(|&x| x * scale).collect();
    let mut q_prev = zeros(n);
    let mut beta_prev = 0.0;
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m.saturating_sub(1));
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut converged_early = None;
    let mut v = zeros(n);

    for i in 0..m {
        op.apply(&q, &mut v);
        let a = dot(&q, &v);
        for (vj, (&qj, &pj)) in v.iter_mut().zip(q.iter().zip(&q_prev)) {
            *vj -= a * qj + beta_prev * pj;
        }
        if reorthogonalize {
            basis.push(q.clone());
            for _ in 0..2 {
                for qb in &basis {
                    let c = dot(qb, &v);
                    for (vj, &bj) in v.iter_mut().zip(qb) {
                        *vj -= c * bj;
                    }
                }
            }
        }
        alpha.push(a);
        if i + 1 == m {
            break;
        }
        let bnorm = norm2(&v);
        if !(bnorm > breakdown) {
            converged_early = Some(i + 1);
            break;
        }
        beta.push(bnorm);
        beta_prev = bnorm;
        core::mem::swap(&mut q_prev, &mut q);
        core::mem::swap(&mut q, &mut v);
        for qj in q.iter_mut() {
            *qj /= bnorm;
        }
    }
    TridiagonalMatrix {
        alpha,
        beta,
        converged_early,
    }
}

/// Eigenvalues of `T_m`, descending: the Rayleigh-Ritz approximations.
pub fn ritz_values(t: &TridiagonalMatrix) -> RitzReport {
    RitzReport {
        ritz: orthopoly::tridiag_eigenvalues(&t.alpha, &t.beta),
        m: t.m(),
        converged_early: t.converged_early,
    }
}

/// Composition of `lanczos` and `ritz_values` for sparse-operator use.
pub fn ritz_for_sparse(
    op: &impl LinearOperator,
    b: &[f64],
    m: usize,
) -> Result<RitzReport, LanczosError> {
    Ok(ritz_values(&lanczos(op, b, m, true)?))
}

/// Ritz values from the chi-square measure model: aggregates `y` over
/// repeated eigenvalues, builds the discrete measure, and returns the
/// eigenvalues of its leading m-by-m Jacobi matrix. Mathematically identical
/// to Lanczos on `diag(spec)` with `b_i = sqrt(y_i)`.
pub fn measure_ritz(spec: &Spectrum, y: &[f64], m: usize) -> Result<RitzReport, LanczosError> {
    let rec = measure_recurrence(spec, y, m, true)?;
    if rec.len() < m {
        return Err(LanczosError::SupportTooSmall {
            m,
            support: rec.len(),
        });
    }
    Ok(RitzReport {
        ritz: orthopoly::tridiag_eigenvalues(&rec.diag[..m], &rec.offdiag[..m - 1]),
        m,
        converged_early: None,
    })
}

/// Aggregated-measure recurrence shared by `measure_ritz` and the streaming
/// experiment path (which skips reorthogonalization and basis storage).
pub(crate) fn measure_recurrence(
    spec: &Spectrum,
    y: &[f64],
    len: usize,
    reorth: bool,
) -> Result<ThreeTermRecurrence, LanczosError> {
    debug_assert_eq!(y.len(), spec.n());
    let mut locs = Vec::with_capacity(spec.values().len());
    let mut masses = Vec::with_capacity(spec.values().len());
    let mut idx = 0usize;
    for (&v, &mult) in spec.values().iter().zip(spec.mults()) {
        let mass: f64 = y[idx..idx + mult].iter().sum();
        idx += mult;
        if mass > 0.0 {
            locs.push(v);
            masses.push(mass);
        }
    }
    if locs.is_empty() {
        return Err(LanczosError::AllMassesZero);
    }
    if locs.len() < len {
        return Err(LanczosError::SupportTooSmall {
            m: len,
            support: locs.len(),
        });
    }
    Ok(orthopoly::stieltjes(&locs, &masses, len, reorth))
}

/// Relative error `(lambda_i - ritz_i) / (lambda_1 - lambda_n)`, clamped at
/// zero (containment violations at the 1e-12 scale are numerical). The raw
/// signed value is available from [`relative_error_raw`].
pub fn relative_error(
    spec: &Spectrum,
    report: &RitzReport,
    i: usize,
) -> Result<f64, LanczosError> {
    Ok(relative_error_raw(spec, report, i)?.max(0.0))
}

pub fn relative_error_raw(
    spec: &Spectrum,
    report: &RitzReport,
    i: usize,
) -> Result<f64, LanczosError> {
    if spec.is_constant() {
        return Err(LanczosError::ConstantSpectrum);
    }
    let ritz = report.lambda(i)?;
    Ok((spec.lambda(i) - ritz) / spec.spread())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{lap_spectrum, laplacian_operator, unif_spectrum};
    use crate::DiagonalOperator;

    fn uniform_b(n: usize) -> Vec<f64> {
        vec![1.0 / (n as f64).sqrt(); n]
    }

    #[test]
    fn full_space_recovers_spectrum() {
        let op = DiagonalOperator::new(vec![1.0, 0.5, 0.0]);
        let r = ritz_for_sparse(&op, &uniform_b(3), 3).unwrap();
        assert!((r.ritz[0] - 1.0).abs() < 1e-12);
        assert!((r.ritz[1] - 0.5).abs() < 1e-12);
        assert!(r.ritz[2].abs() < 1e-12);
    }

    #[test]
    fn one_step_rayleigh_quotient() {
        let op = DiagonalOperator::new(vec![1.0, 0.5, 0.0]);
        let t = lanczos(&op, &uniform_b(3), 1, true).unwrap();
        assert_eq!(t.m(), 1);
        assert!((t.alpha[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn two_step_matches_measure_recurrence() {
        let op = DiagonalOperator::new(vec![1.0, 0.5, 0.0]);
        let r = ritz_for_sparse(&op, &uniform_b(3), 2).unwrap();
        let spec = unif_spectrum(3).unwrap();
        let oracle = measure_ritz(&spec, &[1.0 / 3.0; 3], 2).unwrap();
        for (a, b) in r.ritz.iter().zip(&oracle.ritz) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn input_validation() {
        let op = DiagonalOperator::new(vec![1.0, 2.0]);
        assert!(matches!(
            lanczos(&op, &[0.0, 0.0], 1, true),
            Err(LanczosError::ZeroInitialVector)
        ));
        assert!(matches!(
            lanczos(&op, &[1.0, 0.0], 3, true),
            Err(LanczosError::TooManyIterations { .. })
        ));
        assert!(matches!(
            lanczos(&op, &[1.0], 1, true),
            Err(LanczosError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn repeated_eigenvalues_break_down() {
        // only 2 distinct eigenvalues: the Krylov space has dimension 2
        let op = DiagonalOperator::new(vec![1.0, 1.0, 1.0, 0.0]);
        let t = lanczos(&op, &uniform_b(4), 4, true).unwrap();
        assert_eq!(t.converged_early, Some(2));
        let r = ritz_values(&t);
        assert!((r.ritz[0] - 1.0).abs() < 1e-12);
        assert!(r.ritz[1].abs() < 1e-12);
    }

    #[test]
    fn ritz_interlacing() {
        let diag: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin()).collect();
        let op = DiagonalOperator::new(diag);
        let b: Vec<f64> = (1..=12).map(|i| 1.0 / i as f64).collect();
        let small = ritz_for_sparse(&op, &b, 5).unwrap();
        let large = ritz_for_sparse(&op, &b, 6).unwrap();
        // interlacing: large[i] >= small[i] >= large[i+1]
        for i in 0..5 {
            assert!(large.ritz[i] >= small.ritz[i] - 1e-11);
            assert!(small.ritz[i] >= large.ritz[i + 1] - 1e-11);
        }
    }

    #[test]
    fn measure_ritz_point_mass() {
        let spec = Spectrum::from_pairs([(2.5, 1)]);
        let r = measure_ritz(&spec, &[1.7], 1).unwrap();
        assert!((r.ritz[0] - 2.5).abs() < 1e-14);
    }

    #[test]
    fn measure_ritz_errors() {
        let spec = unif_spectrum(3).unwrap();
        assert!(matches!(
            measure_ritz(&spec, &[0.0; 3], 1),
            Err(LanczosError::AllMassesZero)
        ));
        assert!(matches!(
            measure_ritz(&spec, &[1.0, 0.0, 0.0], 2),
            Err(LanczosError::SupportTooSmall { .. })
        ));
    }

    #[test]
    fn relative_error_cases() {
        let spec = unif_spectrum(3).unwrap();
        let op = DiagonalOperator::new(spec.expand());
        let full = ritz_for_sparse(&op, &uniform_b(3), 3).unwrap();
        for i in 1..=3 {
            assert!(relative_error(&spec, &full, i).unwrap() < 1e-11);
        }
        let one = ritz_for_sparse(&op, &uniform_b(3), 1).unwrap();
        assert!((relative_error(&spec, &one, 1).unwrap() - 0.5).abs() < 1e-12);

        let constant = Spectrum::from_pairs([(1.0, 3)]);
        assert!(matches!(
            relative_error(&constant, &one, 1),
            Err(LanczosError::ConstantSpectrum)
        ));
    }

    #[test]
    fn laplacian_full_run() {
        let n = 100;
        let op = laplacian_operator(n);
        let mut rng = crate::rng::Rng::new(11);
        let mut b = vec![0.0; n];
        rng.unit_sphere(&mut b);
        let r = ritz_for_sparse(&op, &b, n).unwrap();
        let spec = lap_spectrum(n).unwrap();
        for (a, e) in r.ritz.iter().zip(spec.values()) {
            assert!((a - e).abs() < 1e-8, "{a} vs {e}");
        }
    }

    #[test]
    fn sparse_one_step_is_rayleigh_quotient() {
        let n = 40;
        let op = laplacian_operator(n);
        let mut rng = crate::rng::Rng::new(3);
        let mut b = vec![0.0; n];
        rng.unit_sphere(&mut b);
        let r = ritz_for_sparse(&op, &b, 1).unwrap();
        let mut ab = vec![0.0; n];
        crate::LinearOperator::apply(&op, &b, &mut ab);
        let rq = crate::dot(&b, &ab) / crate::dot(&b, &b);
        assert!((r.ritz[0] - rq).abs() < 1e-12);
    }

    #[test]
    fn shift_scale_invariance() {
        let spec = Spectrum::from_pairs([(1.0, 2), (0.3, 1), (-0.5, 3), (-1.2, 1)]);
        let y = [0.9, 0.1, 0.4, 1.3, 0.2, 0.8, 0.05];
        let base = measure_ritz(&spec, &y, 3).unwrap();
        let (c, d) = (2.5, -0.7);
        let shifted = Spectrum::from_pairs(
            spec.values()
                .iter()
                .zip(spec.mults())
                .map(|(&v, &m)| (c * v + d, m)),
        );
        let moved = measure_ritz(&shifted, &y, 3).unwrap();
        for (a, b) in base.ritz.iter().zip(&moved.ritz) {
            assert!((c * a + d - b).abs() < 1e-10);
        }
    }

    #[test]
    fn deflation_inequality() {
        // lambda_2^{(m)}(A, b) <= lambda_1^{(m)}(A, b-hat) with the top
        // eigenvector component removed
        let diag = vec![2.0, 1.3, 0.9, 0.4, -0.1, -1.0];
        let op = DiagonalOperator::new(diag.clone());
        let mut rng = crate::rng::Rng::new(5);
        for m in 2..=5 {
            let mut b = vec![0.0; diag.len()];
            rng.unit_sphere(&mut b);
            let full = ritz_for_sparse(&op, &b, m).unwrap();
            let mut b_hat = b.clone();
            b_hat[0] = 0.0; // remove the top-eigenvector component
            let deflated = ritz_for_sparse(&op, &b_hat, m).unwrap();
            assert!(full.ritz[1] <= deflated.ritz[0] + 1e-10);
        }
    }
}
