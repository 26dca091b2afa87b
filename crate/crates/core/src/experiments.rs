//! Randomized-trial experiment harness: repeated Lanczos runs on benchmark
//! spectra, per-iteration aggregation of the m^2-scaled relative error into
//! box-plot statistics, predictor comparison, and the upper-bound audit.

use alloc::vec::Vec;
use core::fmt;

use crate::bounds::{self, BoundsError};
use crate::lanczos::{self, LanczosError};
use crate::math;
use crate::orthopoly::{self, ThreeTermRecurrence};
use crate::rng::Rng;
use crate::spectra::{
    jacobi_hard_instance, lap_spectrum, legendre_hard_instance, log_spectrum, semi_spectrum,
    unif_spectrum, SpectraError, Spectrum,
};
use crate::DiagonalOperator;

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentError {
    InvalidConfig(&'static str),
    Spectra(SpectraError),
    Lanczos(LanczosError),
    Bounds(BoundsError),
}

impl core::error::Error for ExperimentError {}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            ExperimentError::Spectra(e) => write!(f, "{e}"),
            ExperimentError::Lanczos(e) => write!(f, "{e}"),
            ExperimentError::Bounds(e) => write!(f, "{e}"),
        }
    }
}

impl From<SpectraError> for ExperimentError {
    fn from(e: SpectraError) -> Self {
        ExperimentError::Spectra(e)
    }
}

impl From<LanczosError> for ExperimentError {
    fn from(e: LanczosError) -> Self {
        ExperimentError::Lanczos(e)
    }
}

impl From<BoundsError> for ExperimentError {
    fn from(e: BoundsError) -> Self {
        ExperimentError::Bounds(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumKind {
    Lap,
    Unif,
    Semi,
    Log,
    /// Hard instance built for `m = m_max`.
    LegendreHard,
    /// Hard instance built for `m = m_max`.
    JacobiHard,
    Custom(Spectrum),
}

/// Which trial implementation to use. Both model the same random process:
/// the matrix path runs Lanczos with full reorthogonalization on a diagonal
/// operator with a uniform unit-sphere start vector (O(n m^2) per trial);
/// the measure path draws the equivalent chi-square masses and runs the
/// streaming Stieltjes recurrence with O(n m) work and O(n) memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunPath {
    Matrix,
    Measure,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: SpectrumKind,
    pub n: usize,
    pub m_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Which eigenvalue (1-based, from the top) is tracked.
    pub eigen_index: usize,
    pub path: RunPath,
}

impl ExperimentConfig {
    pub fn new(kind: SpectrumKind, n: usize, m_max: usize, trials: usize, seed: u64) -> Self {
        let path = if n > 100_000 {
            RunPath::Measure
        } else {
            RunPath::Matrix
        };
        ExperimentConfig {
            kind,
            n,
            m_max,
            trials,
            seed,
            eigen_index: 1,
            path,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials < 1 {
            return Err(ExperimentError::InvalidConfig("trials must be >= 1"));
        }
        if self.m_max > self.n {
            return Err(ExperimentError::InvalidConfig("m_max must not exceed n"));
        }
        if self.eigen_index < 1 || self.eigen_index > self.m_max {
            return Err(ExperimentError::InvalidConfig(
                "eigen_index must lie in [1, m_max]",
            ));
        }
        Ok(())
    }
}

/// Box statistics of `m^2 * relative_error` over all trials at one m.
#[derive(Debug, Clone, PartialEq)]
pub struct MRow {
    pub m: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Most extreme samples within `[q1 - 1.5 IQR, q3 + 1.5 IQR]`.
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outlier_count: usize,
}

#[derive(Debug, Clone)]
pub struct AggregateStats {
    /// One row per m from `eigen_index` to `m_max`.
    pub rows: Vec<MRow>,
    pub trials: usize,
}

impl AggregateStats {
    pub fn row(&self, m: usize) -> Option<&MRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    /// Mean unscaled relative error at m.
    pub fn mean_raw(&self, m: usize) -> Option<f64> {
        self.row(m).map(|r| r.mean / (m as f64 * m as f64))
    }
}

pub fn build_spectrum(cfg: &ExperimentConfig) -> Result<Spectrum, ExperimentError> {
    let spec = match &cfg.kind {
        SpectrumKind::Lap => lap_spectrum(cfg.n)?,
        SpectrumKind::Unif => unif_spectrum(cfg.n)?,
        SpectrumKind::Semi => semi_spectrum(cfg.n)?,
        SpectrumKind::Log => log_spectrum(cfg.n)?,
        SpectrumKind::LegendreHard => legendre_hard_instance(cfg.n, cfg.m_max)?,
        SpectrumKind::JacobiHard => jacobi_hard_instance(cfg.n, cfg.m_max)?,
        SpectrumKind::Custom(s) => {
            if s.n() != cfg.n {
                return Err(ExperimentError::InvalidConfig(
                    "custom spectrum dimension does not match n",
                ));
            }
            s.clone()
        }
    };
    if spec.is_constant() {
        return Err(ExperimentError::InvalidConfig(
            "relative error is undefined for a constant spectrum",
        ));
    }
    Ok(spec)
}

/// One trial: the clamped relative error of the tracked eigenvalue for
/// every m from `eigen_index` to `m_max`, in order. Pure given (cfg, trial):
/// randomness comes from the counter-derived subseed alone.
pub fn run_trial(
    spec: &Spectrum,
    cfg: &ExperimentConfig,
    trial: u64,
) -> Result<Vec<f64>, ExperimentError> {
    let mut rng = Rng::for_trial(cfg.seed, trial);
    let i = cfg.eigen_index;
    let rec = match cfg.path {
        RunPath::Matrix => {
            let diag = spec.expand();
            let mut b = crate::zeros(cfg.n);
            rng.unit_sphere(&mut b);
            let op = DiagonalOperator::new(diag);
            let t = lanczos::lanczos(&op, &b, cfg.m_max, true)?;
            ThreeTermRecurrence {
                diag: t.alpha,
                offdiag: t.beta,
                total_mass: 1.0,
            }
        }
        RunPath::Measure => {
            // draw the chi-square mass of each distinct eigenvalue directly
            // (a sum of mult independent chi^2_1 variables), then run the
            // streaming Stieltjes recurrence with O(n) memory
            let mut locs = Vec::with_capacity(spec.values().len());
            let mut masses = Vec::with_capacity(spec.values().len());
            for (&v, &mult) in spec.values().iter().zip(spec.mults()) {
                let mut mass = 0.0;
                for _ in 0..mult {
                    mass += rng.chi_square_1();
                }
                if mass > 0.0 {
                    locs.push(v);
                    masses.push(mass);
                }
            }
            if locs.len() < i {
                return Err(ExperimentError::Lanczos(LanczosError::SupportTooSmall {
                    m: i,
                    support: locs.len(),
                }));
            }
            let len = cfg.m_max.min(locs.len());
            orthopoly::stieltjes(&locs, &masses, len, false)
        }
    };
    let len = rec.len();
    let spread = spec.spread();
    let mut errors = Vec::with_capacity(cfg.m_max - i + 1);
    for m in i..=cfg.m_max {
        let mm = m.min(len);
        let ritz = orthopoly::tridiag_kth_largest(&rec.diag[..mm], &rec.offdiag[..mm - 1], i);
        errors.push(((spec.lambda(i) - ritz) / spread).max(0.0));
    }
    Ok(errors)
}

/// Runs all trials and aggregates the m^2-scaled relative errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<AggregateStats, ExperimentError> {
    cfg.validate()?;
    let spec = build_spectrum(cfg)?;
    let n_m = cfg.m_max - cfg.eigen_index + 1;
    let mut per_m: Vec<Vec<f64>> = (0..n_m).map(|_| Vec::with_capacity(cfg.trials)).collect();
    for trial in 0..cfg.trials {
        let errors = run_trial(&spec, cfg, trial as u64)?;
        for (samples, (offset, e)) in per_m.iter_mut().zip(errors.into_iter().enumerate()) {
            let m = (cfg.eigen_index + offset) as f64;
            samples.push(m * m * e);
        }
    }
    let rows = per_m
        .into_iter()
        .enumerate()
        .map(|(offset, mut samples)| aggregate(cfg.eigen_index + offset, &mut samples))
        .collect();
    Ok(AggregateStats {
        rows,
        trials: cfg.trials,
    })
}

/// Quantile with linear interpolation between order statistics (type 7);
/// `sorted` must be ascending.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = math::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn aggregate(m: usize, samples: &mut [f64]) -> MRow {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let q1 = quantile(samples, 0.25);
    let median = quantile(samples, 0.5);
    let q3 = quantile(samples, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let whisker_low = samples
        .iter()
        .copied()
        .find(|&x| x >= lo_fence)
        .unwrap_or(q1);
    let whisker_high = samples
        .iter()
        .rev()
        .copied()
        .find(|&x| x <= hi_fence)
        .unwrap_or(q3);
    let outlier_count = samples
        .iter()
        .filter(|&&x| x < lo_fence || x > hi_fence)
        .count();
    MRow {
        m,
        mean,
        median,
        q1,
        q3,
        whisker_low,
        whisker_high,
        outlier_count,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictorRow {
    pub m: usize,
    pub empirical: f64,
    pub predictor: f64,
    pub ratio: f64,
}

/// Pairs the empirical mean relative error from `stats` with the
/// asymptotic predictor `(b - xi(m)) / (b - a)` of the limiting density
/// whose recurrence is `rec`, for every m where both are defined.
pub fn compare_predictor(
    stats: &AggregateStats,
    rec: &ThreeTermRecurrence,
    a: f64,
    b: f64,
) -> Result<Vec<PredictorRow>, ExperimentError> {
    let mut rows = Vec::new();
    for row in &stats.rows {
        if row.m > rec.len() {
            break;
        }
        let empirical = row.mean / (row.m as f64 * row.m as f64);
        let predictor = bounds::asymptotic_predictor(rec, row.m, a, b)?;
        rows.push(PredictorRow {
            m: row.m,
            empirical,
            predictor,
            ratio: empirical / predictor,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditViolation {
    pub m: usize,
    pub mean_error: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub violations: Vec<AuditViolation>,
    pub checked: usize,
}

/// Checks the mean relative error against the expected-error upper bound
/// at every m in [10, m_max] where the bound's hypotheses hold. Violations
/// are data, not errors.
pub fn bound_audit(cfg: &ExperimentConfig, stats: &AggregateStats) -> AuditReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    for row in &stats.rows {
        if row.m < 10 {
            continue;
        }
        let mean_error = row.mean / (row.m as f64 * row.m as f64);
        let bound = bounds::main_upper_bound(cfg.n as u64, row.m, 1.0).value;
        checked += 1;
        if mean_error > bound {
            violations.push(AuditViolation {
                m: row.m,
                mean_error,
                bound,
            });
        }
    }
    AuditReport { violations, checked }
}
