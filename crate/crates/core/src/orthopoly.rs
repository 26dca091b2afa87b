//! Orthogonal-polynomial engine: Chebyshev/Legendre/Jacobi evaluation, Gauss
//! quadrature, three-term recurrences of arbitrary measures (discrete or
//! density), largest zeros, and the symmetric tridiagonal eigensolver shared
//! with the Lanczos iteration.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::zeros;

#[derive(Debug, Clone, PartialEq)]
pub enum OrthoError {
    EmptyMeasure,
    NoPositiveMass,
    NegativeMass { location: f64 },
    NegativeDensity { x: f64 },
    /// Grid doubling exhausted its budget before the leading coefficients
    /// stabilized.
    NoConvergence { last_grid: usize },
    DegreeTooLarge { requested: usize, available: usize },
    InvalidJacobiParams { alpha: f64, beta: f64 },
    MaxAbsUnsupported { alpha: f64, beta: f64 },
}

impl core::error::Error for OrthoError {}

impl fmt::Display for OrthoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrthoError::EmptyMeasure => write!(f, "measure has no points"),
            OrthoError::NoPositiveMass => write!(f, "measure has no positive mass"),
            OrthoError::NegativeMass { location } => {
                write!(f, "negative mass at location {location}")
            }
            OrthoError::NegativeDensity { x } => {
                write!(f, "density is negative at grid point {x}")
            }
            OrthoError::NoConvergence { last_grid } => write!(
                f,
                "recurrence did not stabilize after grid doubling (last grid size {last_grid})"
            ),
            OrthoError::DegreeTooLarge {
                requested,
                available,
            } => write!(
                f,
                "degree {requested} exceeds available recurrence length {available}"
            ),
            OrthoError::InvalidJacobiParams { alpha, beta } => {
                write!(f, "Jacobi parameters must exceed -1 (got alpha={alpha}, beta={beta})")
            }
            OrthoError::MaxAbsUnsupported { alpha, beta } => write!(
                f,
                "max-abs closed form requires max(alpha, beta) >= -1/2 (got alpha={alpha}, beta={beta})"
            ),
        }
    }
}

/// Nodes and weights of a Gauss quadrature rule on (-1, 1), nodes descending.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Jacobi-matrix coefficients of the orthonormal polynomials of a measure:
/// `diag` holds a_0..a_{K-1}, `offdiag` holds b_1..b_{K-1} (all positive
/// while the measure has enough points of increase).
#[derive(Debug, Clone)]
pub struct ThreeTermRecurrence {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub total_mass: f64,
}

impl ThreeTermRecurrence {
    /// Number of available recurrence coefficients (max Jacobi-matrix order).
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Parameters of the Jacobi weight `(1-x)^alpha (1+x)^beta` on [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, OrthoError> {
        if alpha > -1.0 && beta > -1.0 {
            Ok(Self { alpha, beta })
        } else {
            Err(OrthoError::InvalidJacobiParams { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Chebyshev polynomial of the first kind, `T_k(x)`.
///
/// Three-term recurrence on [-1, 1]; the explicit half-sum-of-powers form
/// outside, where the recurrence would amplify rounding.
pub fn chebyshev_t(k: u32, x: f64) -> f64 {
    if math::abs(x) <= 1.0 {
        let (mut prev, mut cur) = (1.0, x);
        if k == 0 {
            return 1.0;
        }
        for _ in 1..k {
            (prev, cur) = (cur, 2.0 * x * cur - prev);
        }
        cur
    } else {
        let s = math::sqrt(x * x - 1.0);
        0.5 * (math::pow(x - s, k as f64) + math::pow(x + s, k as f64))
    }
}

/// Evaluates the Legendre polynomial `P_k` and its derivative at `x`.
pub fn legendre_eval(k: u32, x: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for j in 1..k {
        let j = j as f64;
        (prev, cur) = (cur, ((2.0 * j + 1.0) * x * cur - j * prev) / (j + 1.0));
    }
    let deriv = if math::abs(x) < 1.0 {
        (k as f64) * (x * cur - prev) / (x * x - 1.0)
    } else {
        // P'_k(+-1) = +-(k(k+1)/2) * sign adjustments; not needed for interior nodes
        0.5 * (k * (k + 1)) as f64 * if x >= 1.0 { 1.0 } else { math::pow(-1.0, (k + 1) as f64) }
    };
    (cur, deriv)
}

/// Gauss-Legendre rule of size `k`: nodes are the zeros of `P_k` in
/// descending order, weights `2 (1-x^2)^{-1} P'_k(x)^{-2}`.
///
/// Nodes come from the eigenvalues of the Legendre Jacobi matrix
/// (Golub-Welsch) with one Newton polish each.
pub fn gauss_legendre(k: usize) -> QuadratureRule {
    assert!(k >= 1, "rule size must be positive");
    let rec = legendre_recurrence(k);
    let mut nodes = tridiag_eigenvalues(&rec.diag, &rec.offdiag);
    let mut weights = Vec::with_capacity(k);
    for x in nodes.iter_mut() {
        let (p, dp) = legendre_eval(k as u32, *x);
        if dp != 0.0 {
            *x -= p / dp;
        }
        let (_, dp) = legendre_eval(k as u32, *x);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    QuadratureRule { nodes, weights }
}

fn legendre_recurrence(len: usize) -> ThreeTermRecurrence {
    let diag = zeros(len);
    let offdiag = (1..len)
        .map(|j| {
            let j = j as f64;
            j / math::sqrt(4.0 * j * j - 1.0)
        })
        .collect();
    ThreeTermRecurrence {
        diag,
        offdiag,
        total_mass: 2.0,
    }
}

/// Jacobi polynomial `P_k^{(alpha,beta)}(x)` by the stable three-term
/// recurrence.
pub fn jacobi_eval(k: u32, p: JacobiParams, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    for j in 1..k {
        let j = j as f64;
        let c = 2.0 * j + a + b;
        let a1 = 2.0 * (j + 1.0) * (j + a + b + 1.0) * c;
        let a2 = (c + 1.0) * (a * a - b * b);
        let a3 = c * (c + 1.0) * (c + 2.0);
        let a4 = 2.0 * (j + a) * (j + b) * (c + 2.0);
        (prev, cur) = (cur, ((a2 + a3 * x) * cur - a4 * prev) / a1);
    }
    cur
}

/// Squared `omega^{alpha,beta}`-norm of `P_k^{(alpha,beta)}` (closed form).
pub fn jacobi_norm_sq(k: u32, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let kf = k as f64;
    let ln_num = (a + b + 1.0) * math::ln(2.0)
        + math::ln_gamma(kf + a + 1.0)
        + math::ln_gamma(kf + b + 1.0);
    if k == 0 {
        // The general denominator has Gamma(alpha+beta+1), which blows up
        // at alpha+beta+1 <= 0 (the arcsine weight sits exactly on the
        // pole); the Beta-function form 2^{a+b+1} B(a+1, b+1) avoids it.
        return math::exp(
            (a + b + 1.0) * math::ln(2.0) + math::ln_gamma(a + 1.0) + math::ln_gamma(b + 1.0)
                - math::ln_gamma(a + b + 2.0),
        );
    }
    let ln_den = math::ln(2.0 * kf + a + b + 1.0)
        + math::ln_gamma(kf + 1.0)
        + math::ln_gamma(kf + a + b + 1.0);
    math::exp(ln_num - ln_den)
}

/// Max of `|P_k^{(alpha,beta)}|` over [-1, 1]; closed form valid for
/// `max(alpha, beta) >= -1/2`.
pub fn jacobi_max_abs(k: u32, p: JacobiParams) -> Result<f64, OrthoError> {
    let (a, b) = (p.alpha, p.beta);
    if a.max(b) < -0.5 {
        return Err(OrthoError::MaxAbsUnsupported { alpha: a, beta: b });
    }
    let kf = k as f64;
    let at_one = math::exp(math::ln_gamma(kf + a + 1.0) - math::ln_gamma(kf + 1.0) - math::ln_gamma(a + 1.0));
    let at_neg_one =
        math::exp(math::ln_gamma(kf + b + 1.0) - math::ln_gamma(kf + 1.0) - math::ln_gamma(b + 1.0));
    Ok(at_one.max(at_neg_one))
}

/// Derivative of `P_k^{(alpha,beta)}` via the degree-lowering identity.
pub fn jacobi_deriv(k: u32, p: JacobiParams, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let raised = JacobiParams {
        alpha: p.alpha + 1.0,
        beta: p.beta + 1.0,
    };
    0.5 * (k as f64 + p.alpha + p.beta + 1.0) * jacobi_eval(k - 1, raised, x)
}

/// Recurrence of the orthonormal Jacobi polynomials on [-1, 1] (closed-form
/// Jacobi-matrix coefficients). The Legendre, arcsine and semicircle weights
/// are the alpha = beta = 0, -1/2, 1/2 cases.
pub fn jacobi_recurrence(p: JacobiParams, len: usize) -> ThreeTermRecurrence {
    let (a, b) = (p.alpha, p.beta);
    let mut diag = Vec::with_capacity(len);
    let mut offdiag = Vec::with_capacity(len.saturating_sub(1));
    for k in 0..len {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        if k == 0 {
            diag.push((b - a) / (a + b + 2.0));
        } else {
            diag.push((b * b - a * a) / (s * (s + 2.0)));
        }
        if k + 1 < len {
            let kf = kf + 1.0;
            let s = 2.0 * kf + a + b;
            let b_sq = if k == 0 {
                // the (k + alpha + beta) factor cancels against (2k+alpha+beta-1)
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                    / (s * s * (s + 1.0) * (s - 1.0))
            };
            offdiag.push(math::sqrt(b_sq));
        }
    }
    let total_mass = jacobi_norm_sq(0, p);
    ThreeTermRecurrence {
        diag,
        offdiag,
        total_mass,
    }
}

/// Three-term recurrence of the orthonormal polynomials of the discrete
/// measure `sum mass_i delta_{location_i}`, by the Stieltjes procedure
/// (Lanczos on the diagonal matrix of locations with weight vector
/// sqrt(mass), fully reorthogonalized).
///
/// Points at identical locations are aggregated; the returned length is
/// `min(max_len, number of distinct locations)`.
pub fn recurrence_from_discrete_measure(
    points: &[(f64, f64)],
    max_len: usize,
) -> Result<ThreeTermRecurrence, OrthoError> {
    if points.is_empty() {
        return Err(OrthoError::EmptyMeasure);
    }
    for &(loc, mass) in points {
        if mass < 0.0 {
            return Err(OrthoError::NegativeMass { location: loc });
        }
    }
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, w)| w > 0.0).collect();
    if pts.is_empty() {
        return Err(OrthoError::NoPositiveMass);
    }
    pts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut locs: Vec<f64> = Vec::with_capacity(pts.len());
    let mut masses: Vec<f64> = Vec::with_capacity(pts.len());
    for (loc, mass) in pts {
        match locs.last() {
            Some(&last) if last == loc => *masses.last_mut().unwrap() += mass,
            _ => {
                locs.push(loc);
                masses.push(mass);
            }
        }
    }
    Ok(stieltjes(&locs, &masses, max_len.min(locs.len()), true))
}

/// Stieltjes procedure on an aggregated discrete measure. With `reorth` the
/// stored basis is reorthogonalized (classical Gram-Schmidt, twice) each
/// step; without it only the last two basis vectors are kept, O(k) memory.
pub(crate) fn stieltjes(
    locs: &[f64],
    masses: &[f64],
    len: usize,
    reorth: bool,
) -> ThreeTermRecurrence {
    let k = locs.len();
    let total_mass: f64 = masses.iter().sum();
    let mut diag = Vec::with_capacity(len);
    let mut offdiag = Vec::with_capacity(len.saturating_sub(1));

    // q holds basis-vector values at the measure's points, weighted so that
    // the inner product is a plain dot product.
    let mut q: Vec<f64> = masses.iter().map(|&w| math::sqrt(w / total_mass)).collect();
    let mut q_prev = zeros(k);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut beta_prev = 0.0;
    for step in 0..len {
        let mut v: Vec<f64> = q.iter().zip(locs).map(|(&qi, &x)| x * qi).collect();
        let alpha = crate::dot(&q, &v);
        for (vi, (&qi, &pi)) in v.iter_mut().zip(q.iter().zip(&q_prev)) {
            *vi -= alpha * qi + beta_prev * pi;
        }
        if reorth {
            basis.push(q.clone());
            for _ in 0..2 {
                for qb in &basis {
                    let c = crate::dot(qb, &v);
                    for (vi, &bi) in v.iter_mut().zip(qb) {
                        *vi -= c * bi;
                    }
                }
            }
        }
        diag.push(alpha);
        if step + 1 == len {
            break;
        }
        let beta = crate::norm2(&v);
        if beta <= f64::EPSILON * span(locs).max(1.0) {
            break; // measure exhausted (numerically fewer points of increase)
        }
        offdiag.push(beta);
        beta_prev = beta;
        q_prev = core::mem::take(&mut q);
        q = v;
        for qi in q.iter_mut() {
            *qi /= beta;
        }
    }
    ThreeTermRecurrence {
        diag,
        offdiag,
        total_mass,
    }
}

fn span(xs: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (hi - lo).max(math::abs(hi)).max(math::abs(lo))
}

/// Recurrence of the orthonormal polynomials of the density `sigma` on
/// [a, b], via Gauss-Legendre discretization with grid doubling until the
/// leading `len` coefficients move by less than 1e-10 (8 doublings budget).
pub fn recurrence_from_density(
    sigma: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    len: usize,
    grid: usize,
) -> Result<ThreeTermRecurrence, OrthoError> {
    const TOL: f64 = 1e-10;
    const MAX_DOUBLINGS: usize = 8;
    let mut n = grid.max(2 * len).max(8);
    let mut prev = discretized_recurrence(&sigma, a, b, len, n)?;
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        let next = discretized_recurrence(&sigma, a, b, len, n)?;
        if recurrence_distance(&prev, &next) < TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(OrthoError::NoConvergence { last_grid: n })
}

fn discretized_recurrence(
    sigma: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    len: usize,
    n: usize,
) -> Result<ThreeTermRecurrence, OrthoError> {
    let rule = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut pts = Vec::with_capacity(n);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = mid + half * t;
        let s = sigma(x);
        if s < 0.0 {
            return Err(OrthoError::NegativeDensity { x });
        }
        pts.push((x, w * half * s));
    }
    recurrence_from_discrete_measure(&pts, len)
}

fn recurrence_distance(a: &ThreeTermRecurrence, b: &ThreeTermRecurrence) -> f64 {
    if a.diag.len() != b.diag.len() || a.offdiag.len() != b.offdiag.len() {
        return f64::INFINITY;
    }
    let mut d: f64 = 0.0;
    for (x, y) in a.diag.iter().zip(&b.diag) {
        d = d.max(math::abs(x - y));
    }
    for (x, y) in a.offdiag.iter().zip(&b.offdiag) {
        d = d.max(math::abs(x - y));
    }
    d
}

/// Largest zero of the degree-`m` orthogonal polynomial of the recurrence's
/// measure: the largest eigenvalue of the leading m-by-m Jacobi matrix.
pub fn largest_zero(rec: &ThreeTermRecurrence, m: usize) -> Result<f64, OrthoError> {
    if m == 0 || m > rec.len() {
        return Err(OrthoError::DegreeTooLarge {
            requested: m,
            available: rec.len(),
        });
    }
    Ok(tridiag_kth_largest(&rec.diag[..m], &rec.offdiag[..m - 1], 1))
}

/// All eigenvalues of the symmetric tridiagonal matrix, in descending order,
/// by Sturm-sequence bisection (each to relative tolerance 1e-13).
pub fn tridiag_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(offdiag.len(), n.saturating_sub(1), "offdiag length mismatch");
    (1..=n).map(|k| tridiag_kth_largest(diag, offdiag, k)).collect()
}

/// The k-th largest eigenvalue (k = 1 is the largest).
pub fn tridiag_kth_largest(diag: &[f64], offdiag: &[f64], k: usize) -> f64 {
    let n = diag.len();
    debug_assert!(k >= 1 && k <= n);
    if n == 1 {
        return diag[0];
    }
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { math::abs(offdiag[i - 1]) } else { 0.0 }
            + if i < n - 1 { math::abs(offdiag[i]) } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = math::abs(lo).max(math::abs(hi)).max(f64::MIN_POSITIVE);
    let j = n - k + 1; // j-th smallest
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count_below(diag, offdiag, mid) >= j {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * math::abs(mid).max(scale * 1e-3) + f64::MIN_POSITIVE {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence via the
/// LDL^T-style recurrence).
fn sturm_count_below(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let e = offdiag[i - 1];
        let denom = if q != 0.0 {
            q
        } else {
            f64::EPSILON * (math::abs(e) + math::abs(diag[i]) + 1.0)
        };
        q = diag[i] - x - e * e / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}
