//! Detection probability and the occupation of the chain sites.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::series::{causal_trapezoid, trapezoid_weight, ComplexTimeSeries, HermitianToeplitz};
use super::solve::{march, solve_fourier, DetectorConfig, DetectorKernels, FourierSolution};
use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j_all, minus_i_pow};

/// Below this max_t |F⁰| the packet is treated as not interacting.
pub const NONTRIVIAL_THRESHOLD: f64 = 1e-8;

/// Chain sites are added until Σ_{m>M} |f_m|² < this at every time used.
pub const CHAIN_TAIL_TOL: f64 = 1e-10;

/// γ² Re Σ_{a,b} conj(F_a) f(a − b) F_b w_a w_b dt² on the first `len` points.
fn quadratic_w(kernels: &DetectorKernels, solution: &[Complex64], len: usize) -> f64 {
    if len < 2 {
        return 0.0;
    }
    let dt = kernels.dt();
    let weighted: Vec<Complex64> = (0..len).map(|b| solution[b] * (trapezoid_weight(b, len - 1) * dt)).collect();
    let toeplitz = HermitianToeplitz::new(&kernels.f.values[..len]);
    kernels.gamma * kernels.gamma * toeplitz.quadratic_form(&weighted).re
}

/// w = γ²(F₊, F₊ ∗ f) on the time grid.
pub fn detection_probability_time(kernels: &DetectorKernels, solution: &ComplexTimeSeries) -> f64 {
    quadratic_w(kernels, &solution.values, solution.len())
}

/// w = γ²√(2π) ∫ f̂(u) |F̂₊(u)|² du with f̂ = 2 Re f̂₊.
pub fn detection_probability_spectral(kernels: &DetectorKernels, fourier: &FourierSolution) -> f64 {
    let s: f64 = fourier.f_hat.iter().zip(&fourier.solution_hat).map(|(fh, fs)| 2.0 * fh.re * fs.norm_sqr()).sum();
    kernels.gamma * kernels.gamma * (2.0 * PI).sqrt() * s * fourier.du
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    /// Time-domain value.
    pub w: f64,
    /// Value from the spectral integral.
    pub w_spectral: f64,
    /// False when max_t |F⁰| is below [`NONTRIVIAL_THRESHOLD`]; w is then 0.
    pub nontrivial: bool,
}

pub fn detection_from_kernels(kernels: &DetectorKernels) -> Result<Detection> {
    if kernels.f0.max_abs() <= NONTRIVIAL_THRESHOLD {
        return Ok(Detection { w: 0.0, w_spectral: 0.0, nontrivial: false });
    }
    let solution = march(kernels);
    let fourier = solve_fourier(kernels)?;
    Ok(Detection {
        w: detection_probability_time(kernels, &solution),
        w_spectral: detection_probability_spectral(kernels, &fourier),
        nontrivial: true,
    })
}

pub fn detection_probability(cfg: &DetectorConfig) -> Result<Detection> {
    detection_from_kernels(&DetectorKernels::new(cfg)?)
}

/// Occupation probabilities at one time t = step·dt.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSnapshot {
    pub t: f64,
    /// ω_t(P_m) for m = 1..=chain.len().
    pub chain: Vec<f64>,
    /// ω_t(P₀) from completeness: 1 − γ²(F, f ∗ F) on [0, t].
    pub p0: f64,
    /// ω_t(P₀) as the squared norm of the no-detection vector.
    pub p0_direct: f64,
}

impl OccupationSnapshot {
    pub fn total(&self) -> f64 {
        self.p0 + self.chain.iter().sum::<f64>()
    }
}

/// f_m(s) = (−i)^{m−1} (m/s) J_m(2s) for m = 1..=m_max, with f_1(0) = 1.
fn chain_amplitudes(s: f64, m_max: usize) -> Result<Vec<Complex64>> {
    if s == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); m_max];
        v[0] = Complex64::new(1.0, 0.0);
        return Ok(v);
    }
    let j = bessel_j_all(m_max, 2.0 * s)?;
    Ok((1..=m_max).map(|m| minus_i_pow(m as i64 - 1) * (m as f64 * j[m] / s)).collect())
}

/// Precomputed pieces shared by all snapshots of one solution.
pub struct OccupationSampler<'a> {
    kernels: &'a DetectorKernels,
    solution: &'a ComplexTimeSeries,
    q: Vec<Complex64>,
}

impl<'a> OccupationSampler<'a> {
    pub fn new(kernels: &'a DetectorKernels, solution: &'a ComplexTimeSeries) -> Result<Self> {
        if solution.len() != kernels.len() {
            return Err(Error::DimensionMismatch { expected: kernels.len(), got: solution.len() });
        }
        let q = causal_trapezoid(&kernels.f.values, &solution.values, kernels.dt());
        Ok(OccupationSampler { kernels, solution, q })
    }

    /// Table of f_m(s) at s = 0, dt, …, step·dt and the site count used.
    fn chain_table(&self, step: usize) -> Result<(Vec<Vec<Complex64>>, usize)> {
        let dt = self.kernels.dt();
        let cap = (2.0 * step as f64 * dt).ceil() as usize + 80;
        let mut needed = 1;
        let mut table = Vec::with_capacity(step + 1);
        for s in 0..=step {
            let amps = chain_amplitudes(s as f64 * dt, cap)?;
            let mut acc = 0.0;
            let mut m_here = cap;
            for (m, a) in amps.iter().enumerate() {
                acc += a.norm_sqr();
                if 1.0 - acc < CHAIN_TAIL_TOL {
                    m_here = m + 1;
                    break;
                }
            }
            needed = needed.max(m_here);
            table.push(amps);
        }
        Ok((table, needed))
    }

    /// ω_t(P_m) = γ² h_m† G h_m with h_m(b) = w_b dt F_b f_m(t − b) and
    /// G_{ab} = g(a − b).
    pub fn snapshot(&self, step: usize) -> Result<OccupationSnapshot> {
        let k = self.kernels;
        if step >= k.len() {
            return domain(format!("step {step} beyond the grid of {} points", k.len()));
        }
        let dt = k.dt();
        let t = step as f64 * dt;
        if step == 0 {
            return Ok(OccupationSnapshot { t, chain: vec![0.0], p0: 1.0, p0_direct: 1.0 });
        }
        let c = k.gamma * k.gamma;
        let (table, m_max) = self.chain_table(step)?;
        let g = HermitianToeplitz::new(&k.g.values[..=step]);
        let weighted: Vec<Complex64> =
            (0..=step).map(|b| self.solution.values[b] * (trapezoid_weight(b, step) * dt)).collect();
        let mut chain = Vec::with_capacity(m_max);
        for m in 0..m_max {
            let h: Vec<Complex64> = (0..=step).map(|b| weighted[b] * table[step - b][m]).collect();
            chain.push(c * g.quadratic_form(&h).re);
        }
        let p0 = 1.0 - quadratic_w(k, &self.solution.values, step + 1);

        let qw: Vec<Complex64> = (0..=step).map(|b| self.q[b] * (trapezoid_weight(b, step) * dt)).collect();
        let cross: Complex64 = (0..=step).map(|b| qw[b] * k.f0.values[b].conj()).sum();
        let p0_direct = 1.0 - 2.0 * c * cross.re + c * c * g.quadratic_form(&qw).re;
        Ok(OccupationSnapshot { t, chain, p0, p0_direct })
    }

    /// ω_t(P_m) at the given steps.
    pub fn site_series(&self, m: usize, steps: &[usize]) -> Result<Vec<f64>> {
        if m == 0 {
            return domain("chain sites start at m = 1");
        }
        steps.iter().map(|&s| Ok(self.snapshot(s)?.chain.get(m - 1).copied().unwrap_or(0.0))).collect()
    }
}

/// ω_t(P_m) on the given steps for one configuration.
pub fn occupation_series(cfg: &DetectorConfig, m: usize, steps: &[usize]) -> Result<Vec<f64>> {
    let kernels = DetectorKernels::new(cfg)?;
    let solution = march(&kernels);
    OccupationSampler::new(&kernels, &solution)?.site_series(m, steps)
}
