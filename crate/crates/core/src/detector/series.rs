//! Uniformly sampled complex time series on [0, T] and FFT convolutions.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples h(k·dt), k = 0..len, of a function on [0, T].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTimeSeries {
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl ComplexTimeSeries {
    pub fn new(dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return domain(format!("time step must be positive, got {dt}"));
        }
        if values.is_empty() {
            return domain("time series needs at least one sample");
        }
        Ok(ComplexTimeSeries { dt, values })
    }

    pub fn from_fn(dt: f64, len: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(dt, (0..len).map(|k| f(k as f64 * dt)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Trapezoid estimate of ∫_0^T |h|.
    pub fn l1_norm(&self) -> f64 {
        let n = self.len();
        let s: f64 = self.values.iter().map(|z| z.norm()).sum();
        self.dt * (s - 0.5 * (self.values[0].norm() + self.values[n - 1].norm()))
    }

    /// Discrete L² distance (Σ|a − b|² dt)^{1/2}.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        if self.dt != other.dt {
            return domain("series have different time steps");
        }
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.dt).sqrt())
    }

    /// The first `len` samples.
    pub fn truncated(&self, len: usize) -> Self {
        ComplexTimeSeries { dt: self.dt, values: self.values[..len.min(self.len())].to_vec() }
    }
}

/// Trapezoid weights on k = 0..=n: ½ at both ends.
pub(crate) fn trapezoid_weight(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else if k == 0 || k == n {
        0.5
    } else {
        1.0
    }
}

pub(crate) struct FftPair {
    pub len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair { len, forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) }
    }

    /// Zero-padded forward transform Σ_k h_k e^{−2πi jk/len}.
    pub fn forward(&self, h: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.len];
        buf[..h.len()].copy_from_slice(h);
        self.forward.process(&mut buf);
        buf
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
        self.inverse.process(&mut spectrum);
        let s = 1.0 / self.len as f64;
        spectrum.iter_mut().for_each(|z| *z *= s);
        spectrum
    }
}

/// Full linear convolution (a ∗ b)_n = Σ_k a_{n−k} b_k.
pub(crate) fn linear_convolution(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out = a.len() + b.len() - 1;
    let fft = FftPair::new(out.next_power_of_two());
    let fa = fft.forward(a);
    let fb = fft.forward(b);
    let mut full = fft.inverse(fa.iter().zip(&fb).map(|(x, y)| x * y).collect());
    full.truncate(out);
    full
}

/// Trapezoid rule for ∫_0^{t_n} a(t_n − s) b(s) ds on the first `a.len()` grid
/// points: dt (a ∗ b − ½ a·b_0 − ½ a_0·b).
pub(crate) fn causal_trapezoid(a: &[Complex64], b: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let full = linear_convolution(&a[..n], &b[..n]);
    (0..n).map(|k| dt * (full[k] - 0.5 * a[k] * b[0] - 0.5 * a[0] * b[k])).collect()
}

/// Multiplication by the Hermitian Toeplitz matrix K_{ab} = k(a − b) with
/// k(−s) = conj k(s), through one cached kernel spectrum.
pub(crate) struct HermitianToeplitz {
    n: usize,
    fft: FftPair,
    kernel: Vec<Complex64>,
}

impl HermitianToeplitz {
    /// `k` holds the lags 0..n.
    pub fn new(k: &[Complex64]) -> Self {
        let n = k.len();
        let mut two_sided: Vec<Complex64> = k[1..].iter().rev().map(|z| z.conj()).collect();
        two_sided.extend_from_slice(k);
        let fft = FftPair::new((3 * n).next_power_of_two());
        let kernel = fft.forward(&two_sided);
        HermitianToeplitz { n, fft, kernel }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let fx = self.fft.forward(&x[..x.len().min(self.n)]);
        let full = self.fft.inverse(fx.iter().zip(&self.kernel).map(|(a, b)| a * b).collect());
        full[self.n - 1..self.n - 1 + x.len().min(self.n)].to_vec()
    }

    /// x† K x.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        self.apply(x).iter().zip(x).map(|(kx, xi)| xi.conj() * kx).sum()
    }
}
