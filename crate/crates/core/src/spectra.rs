//! Generators for the benchmark spectra, the hard-instance constructions
//! from the lower-bound arguments, and the model tridiagonal operator family.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::orthopoly::gauss_legendre;
use crate::LinearOperator;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectraError {
    DimensionTooSmall { required: usize, got: usize },
    /// The Jacobi hard instance needs `k = floor(m^{4.004 l}) <= n`.
    HardInstanceInfeasible { l: usize, k: u128, n: usize },
    ParseError { line: usize },
    ConstantSpectrum,
}

impl core::error::Error for SpectraError {}

impl fmt::Display for SpectraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectraError::DimensionTooSmall { required, got } => {
                write!(f, "dimension {got} below required minimum {required}")
            }
            SpectraError::HardInstanceInfeasible { l, k, n } => write!(
                f,
                "hard instance infeasible: l = {l} gives k = {k} > n = {n}"
            ),
            SpectraError::ParseError { line } => write!(f, "malformed spectrum at line {line}"),
            SpectraError::ConstantSpectrum => write!(f, "spectrum is constant"),
        }
    }
}

/// Sorted eigenvalue list with multiplicities: the diagonal model of a
/// symmetric matrix. `values` are distinct and strictly descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    mults: Vec<usize>,
    n: usize,
}

impl Spectrum {
    /// Builds a spectrum from (value, multiplicity) pairs; values need not be
    /// sorted but repeats are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, usize)>) -> Self {
        let mut pairs: Vec<(f64, usize)> =
            pairs.into_iter().filter(|&(_, m)| m > 0).collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut mults: Vec<usize> = Vec::with_capacity(pairs.len());
        for (v, m) in pairs {
            match values.last() {
                Some(&last) if last == v => *mults.last_mut().unwrap() += m,
                _ => {
                    values.push(v);
                    mults.push(m);
                }
            }
        }
        let n = mults.iter().sum();
        Self { values, mults, n }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn spread(&self) -> f64 {
        self.lambda_max() - self.lambda_min()
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() <= 1
    }

    /// The i-th largest eigenvalue counted with multiplicity (1-based).
    pub fn lambda(&self, i: usize) -> f64 {
        debug_assert!(i >= 1 && i <= self.n);
        let mut seen = 0;
        for (v, m) in self.values.iter().zip(&self.mults) {
            seen += m;
            if i <= seen {
                return *v;
            }
        }
        unreachable!()
    }

    /// All `n` eigenvalues, descending, with repeats.
    pub fn expand(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        for (v, m) in self.values.iter().zip(&self.mults) {
            out.extend(core::iter::repeat(*v).take(*m));
        }
        out
    }

    /// Text form: one `value multiplicity` pair per line, descending, 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, m) in self.values.iter().zip(&self.mults) {
            s.push_str(&format!("{v:.16e} {m}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SpectraError> {
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let v: f64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(SpectraError::ParseError { line: idx + 1 })?;
            let m: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(SpectraError::ParseError { line: idx + 1 })?;
            if it.next().is_some() {
                return Err(SpectraError::ParseError { line: idx + 1 });
            }
            pairs.push((v, m));
        }
        if pairs.is_empty() {
            return Err(SpectraError::ParseError { line: 0 });
        }
        Ok(Self::from_pairs(pairs))
    }
}

/// Eigenvalues of the 1-D Dirichlet Laplacian: `2 + 2 cos(i pi / (n+1))`.
pub fn lap_spectrum(n: usize) -> Result<Spectrum, SpectraError> {
    require(n, 1)?;
    Ok(Spectrum::from_pairs((1..=n).map(|i| {
        (
            2.0 + 2.0 * math::cos(i as f64 * math::PI / (n as f64 + 1.0)),
            1,
        )
    })))
}

/// Uniform partition of [0, 1]: `(n - i) / (n - 1)`.
pub fn unif_spectrum(n: usize) -> Result<Spectrum, SpectraError> {
    require(n, 2)?;
    Ok(Spectrum::from_pairs(
        (1..=n).map(|i| ((n - i) as f64 / (n - 1) as f64, 1)),
    ))
}

fn semicircle_cdf(x: f64) -> f64 {
    0.5 + (x * math::sqrt((1.0 - x * x).max(0.0)) + math::asin(x)) / math::PI
}

/// Quantiles of the semicircle distribution: lambda_i solves
/// `F(lambda) = (n - i)/(n - 1)` with the semicircle CDF `F`, by bisection.
pub fn semi_spectrum(n: usize) -> Result<Spectrum, SpectraError> {
    require(n, 2)?;
    Ok(Spectrum::from_pairs((1..=n).map(|i| {
        let target = (n - i) as f64 / (n - 1) as f64;
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if semicircle_cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        debug_assert!((semicircle_cdf(x) - target).abs() < 1e-13);
        // snap the endpoints exactly
        let x = if i == 1 {
            1.0
        } else if i == n {
            -1.0
        } else {
            x
        };
        (x, 1)
    })))
}

/// The dimension-dependent spectrum `1 - ((n+1-i)/n)^{ln ln n / ln n}`.
pub fn log_spectrum(n: usize) -> Result<Spectrum, SpectraError> {
    require(n, 16)?;
    let nf = n as f64;
    let exponent = math::ln(math::ln(nf)) / math::ln(nf);
    Ok(Spectrum::from_pairs((1..=n).map(|i| {
        (1.0 - math::pow((n + 1 - i) as f64 / nf, exponent), 1)
    })))
}

/// Hard instance built on the zeros of the degree-2m Legendre polynomial:
/// the top zero has multiplicity one, the rest share the remaining n-1
/// points as evenly as possible with the surplus placed at the small end.
pub fn legendre_hard_instance(n: usize, m: usize) -> Result<Spectrum, SpectraError> {
    if m < 2 {
        return Err(SpectraError::DimensionTooSmall { required: 2, got: m });
    }
    if n < 2 * m {
        return Err(SpectraError::DimensionTooSmall {
            required: 2 * m,
            got: n,
        });
    }
    let zeros = gauss_legendre(2 * m).nodes;
    let groups = 2 * m - 1;
    let base = (n - 1) / groups;
    let remainder = (n - 1) - groups * base;
    let mut pairs = Vec::with_capacity(2 * m);
    pairs.push((zeros[0], 1usize));
    for (j, &z) in zeros.iter().enumerate().skip(1) {
        // surplus goes to the smallest eigenvalues first: the last
        // `remainder` entries of the descending list get one extra
        let extra = if 2 * m - j <= remainder { 1 } else { 0 };
        pairs.push((z, base + extra));
    }
    Ok(Spectrum::from_pairs(pairs))
}

/// Parameters of the mixed-regime hard instance for dimension `n`, iteration
/// count `m`: `l = floor(.2495 ln n / ln ln n)` and `k = floor(m^{4.004 l})`.
pub fn jacobi_hard_params(n: usize, m: usize) -> Result<(usize, usize), SpectraError> {
    let nf = n as f64;
    let l = math::floor(0.2495 * math::ln(nf) / math::ln(math::ln(nf))) as i64;
    if l < 1 {
        return Err(SpectraError::DimensionTooSmall { required: 16, got: n });
    }
    let l = l as usize;
    let k_f = math::floor(math::pow(m as f64, 4.004 * l as f64));
    if !(k_f >= 1.0 && k_f <= n as f64) {
        return Err(SpectraError::HardInstanceInfeasible {
            l,
            k: k_f as u128,
            n,
        });
    }
    Ok((l, k_f as usize))
}

/// Hard instance with eigenvalues `f(j/k) = 1 - 2 (1 - j/k)^{1/l}`, each with
/// multiplicity `floor(n/k)` or `ceil(n/k)` (surplus at the small end).
pub fn jacobi_hard_instance(n: usize, m: usize) -> Result<Spectrum, SpectraError> {
    let (l, k) = jacobi_hard_params(n, m)?;
    let base = n / k;
    let remainder = n - k * base;
    let mut pairs = Vec::with_capacity(k);
    for j in 1..=k {
        let x = j as f64 / k as f64;
        let value = 1.0 - 2.0 * math::pow(1.0 - x, 1.0 / l as f64);
        // j = 1 is the smallest eigenvalue; the `remainder` smallest get the
        // extra unit of multiplicity
        let extra = if j <= remainder { 1 } else { 0 };
        pairs.push((value, base + extra));
    }
    Ok(Spectrum::from_pairs(pairs))
}

fn require(n: usize, min: usize) -> Result<(), SpectraError> {
    if n < min {
        Err(SpectraError::DimensionTooSmall { required: min, got: n })
    } else {
        Ok(())
    }
}

/// Matrix-free 1-D Dirichlet Laplacian: 2 on the diagonal, -1 off.
#[derive(Debug, Clone)]
pub struct LaplacianOperator {
    n: usize,
}

pub fn laplacian_operator(n: usize) -> LaplacianOperator {
    assert!(n >= 1);
    LaplacianOperator { n }
}

impl LinearOperator for LaplacianOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let left = if i > 0 { x[i - 1] } else { 0.0 };
            let right = if i + 1 < n { x[i + 1] } else { 0.0 };
            out[i] = 2.0 * x[i] - left - right;
        }
    }
}

/// Inverse of the Laplacian applied via the Thomas algorithm, O(n) per
/// application. The forward-elimination multipliers depend only on `n` and
/// are precomputed.
#[derive(Debug, Clone)]
pub struct LaplacianInverseOperator {
    // c[i] = upper-diagonal multiplier after elimination: c[0] = -1/2,
    // c[i] = -1/(2 + c[i-1])
    c: Vec<f64>,
}

pub fn laplacian_inverse_operator(n: usize) -> LaplacianInverseOperator {
    assert!(n >= 1);
    let mut c = Vec::with_capacity(n);
    let mut prev = 0.0f64;
    for _ in 0..n {
        let cc = -1.0 / (2.0 + prev);
        c.push(cc);
        prev = cc;
    }
    LaplacianInverseOperator { c }
}

impl LinearOperator for LaplacianInverseOperator {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.c.len();
        // forward sweep: d[i] = (x[i] + d[i-1]) / (2 + c[i-1])
        let mut prev_c = 0.0;
        let mut prev_d = 0.0;
        for i in 0..n {
            let d = (x[i] + prev_d) / (2.0 + prev_c);
            out[i] = d;
            prev_c = self.c[i];
            prev_d = d;
        }
        // back substitution
        for i in (0..n - 1).rev() {
            out[i] -= self.c[i] * out[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn lap_small() {
        let s = lap_spectrum(3).unwrap();
        let r = 2.0f64.sqrt();
        assert!((s.values()[0] - (2.0 + r)).abs() < 1e-14);
        assert!((s.values()[1] - 2.0).abs() < 1e-14);
        assert!((s.values()[2] - (2.0 - r)).abs() < 1e-14);
        let s1 = lap_spectrum(1).unwrap();
        assert!((s1.lambda_max() - 2.0).abs() < 1e-14);
        let s5 = lap_spectrum(5).unwrap();
        assert!((s5.lambda_max() - 3.7320508).abs() < 1e-7);
    }

    #[test]
    fn unif_small() {
        let s = unif_spectrum(3).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 0.0]);
        assert_eq!(s.mults(), &[1, 1, 1]);
    }

    #[test]
    fn semi_endpoints_and_symmetry() {
        let s = semi_spectrum(2).unwrap();
        assert_eq!(s.values(), &[1.0, -1.0]);
        let s = semi_spectrum(101).unwrap();
        let v = s.values();
        for i in 0..v.len() {
            assert!((v[i] + v[v.len() - 1 - i]).abs() < 1e-12, "not symmetric at {i}");
        }
    }

    #[test]
    fn log_extremes() {
        let n = 1000usize;
        let s = log_spectrum(n).unwrap();
        let top = 1.0 - 1.0 / (n as f64).ln();
        assert!((s.lambda_max() - top).abs() < 1e-12);
        assert!(s.lambda_min().abs() < 1e-15);
        assert!(log_spectrum(15).is_err());
    }

    #[test]
    fn legendre_hard_multiplicities() {
        let s = legendre_hard_instance(100, 2).unwrap();
        let zeros = gauss_legendre(4).nodes;
        assert_eq!(s.values(), &zeros[..]);
        assert_eq!(s.mults(), &[1, 33, 33, 33]);
        assert!((s.values()[0] - 0.8611363116).abs() < 1e-9);
        assert!((s.values()[1] - 0.3399810436).abs() < 1e-9);

        let s = legendre_hard_instance(101, 2).unwrap();
        assert_eq!(s.mults(), &[1, 33, 33, 34]);
        assert_eq!(s.n(), 101);

        assert!(legendre_hard_instance(3, 2).is_err());
    }

    #[test]
    fn jacobi_hard_desk_scale() {
        // n = 1e5, m = 4: l = 1, k = floor(4^4.004) = 257, f affine
        let (l, k) = jacobi_hard_params(100_000, 4).unwrap();
        assert_eq!(l, 1);
        assert_eq!(k, (4.0f64.powf(4.004)).floor() as usize);
        let s = jacobi_hard_instance(100_000, 4).unwrap();
        assert_eq!(s.n(), 100_000);
        assert!((s.lambda_max() - 1.0).abs() < 1e-15);
        // with l = 1, f(x) = 2x - 1
        let vals = s.values();
        let last = vals[vals.len() - 1];
        assert!((last - (2.0 / k as f64 - 1.0)).abs() < 1e-12);
        // multiplicity rule
        for m in s.mults() {
            assert!(*m == 100_000 / k || *m == 100_000 / k + 1);
        }
    }

    #[test]
    fn jacobi_hard_infeasible() {
        // l >= 1 but k = m^(4.004 l) far exceeds n
        assert!(matches!(
            jacobi_hard_instance(100_000, 50),
            Err(SpectraError::HardInstanceInfeasible { .. })
        ));
        // n too small to give a positive exponent l at all
        assert!(matches!(
            jacobi_hard_instance(100, 50),
            Err(SpectraError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn generators_total_count() {
        for s in [
            lap_spectrum(57).unwrap(),
            unif_spectrum(57).unwrap(),
            semi_spectrum(57).unwrap(),
            log_spectrum(57).unwrap(),
            legendre_hard_instance(57, 3).unwrap(),
        ] {
            assert_eq!(s.n(), 57);
            assert_eq!(s.mults().iter().sum::<usize>(), 57);
            for w in s.values().windows(2) {
                assert!(w[0] > w[1]);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let s = legendre_hard_instance(101, 2).unwrap();
        let t = s.to_text();
        let back = Spectrum::from_text(&t).unwrap();
        assert_eq!(s, back);
        assert!(Spectrum::from_text("1.0 x\n").is_err());
    }

    #[test]
    fn laplacian_row_readoff() {
        let op = laplacian_operator(3);
        let mut out = vec![0.0; 3];
        crate::LinearOperator::apply(&op, &[0.0, 1.0, 0.0], &mut out);
        assert_eq!(out, vec![-1.0, 2.0, -1.0]);
    }

    #[test]
    fn laplacian_inverse_consistency() {
        let n = 50;
        let fwd = laplacian_operator(n);
        let inv = laplacian_inverse_operator(n);
        let mut rng = Rng::new(9);
        let v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mut mid = vec![0.0; n];
        let mut back = vec![0.0; n];
        crate::LinearOperator::apply(&fwd, &v, &mut mid);
        crate::LinearOperator::apply(&inv, &mid, &mut back);
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
