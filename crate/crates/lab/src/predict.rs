//! Asymptotic-predictor plumbing: building the three-term recurrence of a
//! limiting density (named benchmark densities or a spectrum file's
//! empirical measure) and tabulating `(b - xi(m)) / (b - a)`.

use lanczos_core::bounds;
use lanczos_core::orthopoly::{
    self, JacobiParams, OrthoError, ThreeTermRecurrence,
};
use lanczos_core::spectra::Spectrum;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PredictError {
    #[error("unknown density {0:?} (expected uniform, arcsine, or semicircle)")]
    UnknownDensity(String),
    #[error("interval must satisfy a < b, got [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("{0}")]
    Ortho(#[from] OrthoError),
    #[error("{0}")]
    Bounds(#[from] bounds::BoundsError),
}

/// Affinely maps a recurrence for a measure on [-1, 1] onto [a, b].
fn map_recurrence(rec: ThreeTermRecurrence, a: f64, b: f64) -> ThreeTermRecurrence {
    let scale = (b - a) / 2.0;
    let shift = (a + b) / 2.0;
    ThreeTermRecurrence {
        diag: rec.diag.iter().map(|d| shift + scale * d).collect(),
        offdiag: rec.offdiag.iter().map(|o| scale * o).collect(),
        total_mass: rec.total_mass,
    }
}

/// Recurrence of a named limiting density on [a, b]. The uniform and
/// semicircle weights use the closed-form Legendre/Chebyshev-U Jacobi
/// coefficients; arcsine uses Chebyshev-T. All three are exact, which the
/// integrable singularity of the arcsine weight would deny to a
/// grid-quadrature construction.
pub fn density_recurrence(
    name: &str,
    a: f64,
    b: f64,
    len: usize,
) -> Result<ThreeTermRecurrence, PredictError> {
    if !(a < b) {
        return Err(PredictError::BadInterval(a, b));
    }
    let params = match name {
        "uniform" => JacobiParams::new(0.0, 0.0),
        "arcsine" => JacobiParams::new(-0.5, -0.5),
        "semicircle" => JacobiParams::new(0.5, 0.5),
        other => return Err(PredictError::UnknownDensity(other.into())),
    }
    .expect("benchmark parameters are valid");
    Ok(map_recurrence(orthopoly::jacobi_recurrence(params, len), a, b))
}

/// Recurrence of a spectrum's empirical measure (each eigenvalue weighted
/// by its multiplicity).
pub fn spectrum_recurrence(
    spec: &Spectrum,
    len: usize,
) -> Result<ThreeTermRecurrence, PredictError> {
    let points: Vec<(f64, f64)> = spec
        .values()
        .iter()
        .zip(spec.mults())
        .map(|(&v, &m)| (v, m as f64))
        .collect();
    Ok(orthopoly::recurrence_from_discrete_measure(&points, len)?)
}

/// Predictor values for m in `[m_min, m_max]`.
pub fn predictor_table(
    rec: &ThreeTermRecurrence,
    m_min: usize,
    m_max: usize,
    a: f64,
    b: f64,
) -> Result<Vec<(usize, f64)>, PredictError> {
    let mut rows = Vec::new();
    for m in m_min..=m_max.min(rec.len()) {
        rows.push((m, bounds::asymptotic_predictor(rec, m, a, b)?));
    }
    Ok(rows)
}
