//! Counter-based 64-bit pseudo-random generator used for all trials.
//!
//! SplitMix64 (Steele, Lea, Flood 2014) with the usual constants: stream
//! increment 0x9E3779B97F4A7C15, mixing multipliers 0xBF58476D1CE4E5B9 and
//! 0x94D049BB133111EB. Each trial derives its own stream from (seed, trial),
//! so trials are independent of execution order and platform.

use crate::math;

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    spare_normal: Option<f64>,
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    /// Stream for trial `t` of run `seed`: the trial index is mixed into the
    /// seed so consecutive trials are decorrelated.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(mix(seed ^ mix(trial.wrapping_add(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in (0, 1), 53-bit resolution, never exactly 0.
    pub fn uniform(&mut self) -> f64 {
        loop {
            let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Standard normal deviate via the polar (Marsaglia) method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = math::sqrt(-2.0 * math::ln(s) / s);
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    /// A chi-square mass with one degree of freedom (a squared normal).
    pub fn chi_square_1(&mut self) -> f64 {
        let z = self.normal();
        z * z
    }

    /// Fills `out` with a uniform point on the unit sphere.
    pub fn unit_sphere(&mut self, out: &mut [f64]) {
        loop {
            for x in out.iter_mut() {
                *x = self.normal();
            }
            let n = crate::norm2(out);
            if n > 0.0 {
                for x in out.iter_mut() {
                    *x /= n;
                }
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let a: Vec<u64> = {
            let mut r = Rng::for_trial(7, 3);
            (0..10).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = Rng::for_trial(7, 3);
            (0..10).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u64> = {
            let mut r = Rng::for_trial(7, 4);
            (0..10).map(|_| r.next_u64()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn normal_moments() {
        let mut r = Rng::new(42);
        let n = 200_000;
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let z = r.normal();
            s1 += z;
            s2 += z * z;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn sphere_is_normalized() {
        let mut r = Rng::new(1);
        let mut v = vec![0.0; 17];
        r.unit_sphere(&mut v);
        assert!((crate::norm2(&v) - 1.0).abs() < 1e-12);
    }
}
