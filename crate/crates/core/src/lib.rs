//! Core numerical routines for studying the Lanczos method on synthetic
//! spectra: orthogonal polynomials and Gauss quadrature, benchmark and
//! hard-instance spectrum generators, the Lanczos iteration itself, the
//! catalog of uniform error bounds, and the random-trial experiment driver.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `lanczos-lab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod experiments;
mod math;
pub mod orthopoly;
pub mod rng;
pub mod spectra;

pub mod lanczos;

use alloc::vec;
use alloc::vec::Vec;

/// A symmetric linear operator applied matrix-free.
///
/// Implementations must be pure with respect to `apply` so that operators
/// can be shared across concurrent trials.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Computes `out = A x`. Both slices have length `dim()`.
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// Diagonal operator; the canonical model of a symmetric matrix given only
/// its spectrum.
#[derive(Debug, Clone)]
pub struct DiagonalOperator {
    diag: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(diag: Vec<f64>) -> Self {
        Self { diag }
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }
}

impl LinearOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for ((o, &d), &v) in out.iter_mut().zip(&self.diag).zip(x) {
            *o = d * v;
        }
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply(x, out)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

pub(crate) fn zeros(n: usize) -> Vec<f64> {
    vec![0.0; n]
}
