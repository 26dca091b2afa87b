//! Thin wrappers over `libm` plus a log-gamma implementation, so the rest of
//! the crate stays `no_std`-clean.

#[allow(unused_imports)]
pub use libm::{acos, asin, cos, exp, fabs as abs, floor, log as ln, pow, sin, sqrt};

pub const PI: f64 = core::f64::consts::PI;

pub fn ln2(x: f64) -> f64 {
    let l = ln(x);
    l * l
}

/// Natural log of the gamma function for x > 0.
///
/// Lanczos approximation (g = 7, 9 terms); relative accuracy around 1e-14
/// over the range used here.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return ln(PI / sin(PI * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * ln(2.0 * PI) + (x + 0.5) * ln(t) - t + ln(sum)
}

/// Gamma function via `ln_gamma`; only used for small arguments.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        exp(ln_gamma(x))
    } else {
        // reflection for the occasional negative Jacobi parameter
        PI / (sin(PI * x) * exp(ln_gamma(1.0 - x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut f = 1.0f64;
        for k in 1u32..15 {
            assert!((ln_gamma(k as f64) - ln(f)).abs() < 1e-12 * (1.0 + ln(f).abs()));
            f *= k as f64;
        }
    }

    #[test]
    fn ln_gamma_half() {
        assert!((gamma(0.5) - sqrt(PI)).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * sqrt(PI)).abs() < 1e-13);
    }

    #[test]
    fn gamma_negative() {
        // Gamma(-0.5) = -2 sqrt(pi)
        assert!((gamma(-0.5) + 2.0 * sqrt(PI)).abs() < 1e-11);
    }
}
