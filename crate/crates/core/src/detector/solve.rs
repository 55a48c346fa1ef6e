//! The convolution equation F₊ = F₊⁰ − γ² g₊ ∗ f₊ ∗ F₊ and its three solvers.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::packet::{amplitude_free_series, RadialPacket};
use super::series::{causal_trapezoid, ComplexTimeSeries, FftPair};
use crate::error::{domain, Error, Result};
use crate::specfun::bessel_j1_over_x;

/// Smallest denominator magnitude accepted by the Fourier solver.
pub const MIN_DENOMINATOR: f64 = 1e-6;

/// Coupling, packets and time grid of one detector run.
#[derive(Debug, Clone)]
pub struct DetectorConfig {
    pub gamma: f64,
    /// The packet φ entering the interaction.
    pub phi: RadialPacket,
    /// The incident packet ψ.
    pub psi: RadialPacket,
    pub dt: f64,
    pub horizon: f64,
}

impl DetectorConfig {
    pub const DEFAULT_GAMMA: f64 = 0.5;
    pub const DEFAULT_DT: f64 = 0.02;
    pub const DEFAULT_HORIZON: f64 = 200.0;
    pub const DEFAULT_PHI_WIDTH: f64 = 1.25;
    pub const DEFAULT_PSI_WIDTH: f64 = 1.0;
    pub const DEFAULT_PSI_CENTER: f64 = 0.8;

    /// Number of grid points k·dt on [0, T].
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.horizon > 0.0) {
            return domain("dt and T must be positive");
        }
        let n = self.horizon / self.dt;
        if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return domain(format!("T/dt = {n} is not an integer"));
        }
        Ok(n.round() as usize + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() {
            return domain("coupling must be finite");
        }
        if !self.phi.same_grid(&self.psi) {
            return Err(Error::GridMismatch);
        }
        for (name, p) in [("phi", &self.phi), ("psi", &self.psi)] {
            let n = p.norm_sqr();
            if (n - 1.0).abs() > 1e-8 {
                return Err(Error::Degenerate(format!("{name} has norm² {n}")));
            }
        }
        self.steps().map(|_| ())
    }
}

/// The sampled ingredients g, f, F⁰ and the composed kernel K = g₊ ∗ f₊.
#[derive(Debug, Clone)]
pub struct DetectorKernels {
    pub gamma: f64,
    pub g: ComplexTimeSeries,
    pub f1: Vec<f64>,
    pub f: ComplexTimeSeries,
    pub f0: ComplexTimeSeries,
    pub k: Vec<Complex64>,
}

/// f₁(t) = J₁(2t)/t with f₁(0) = 1, sampled on k·dt.
pub fn f1_samples(dt: f64, len: usize) -> Result<Vec<f64>> {
    (0..len).map(|k| Ok(2.0 * bessel_j1_over_x(2.0 * k as f64 * dt)?)).collect()
}

/// f(t) = g(t)·J₁(2t)/t.
pub fn f_kernel(g: &ComplexTimeSeries) -> Result<ComplexTimeSeries> {
    let f1 = f1_samples(g.dt, g.len())?;
    ComplexTimeSeries::new(g.dt, g.values.iter().zip(&f1).map(|(a, b)| a * b).collect())
}

/// ‖g‖₁ over the whole line: twice the trapezoid integral on [0, T] plus
/// the tail 2T|g(T)| of a t^{−3/2} decay.
pub fn g_l1_norm(g: &ComplexTimeSeries) -> f64 {
    let last = g.values[g.len() - 1].norm();
    2.0 * (g.l1_norm() + 2.0 * g.horizon() * last)
}

impl DetectorKernels {
    pub fn new(cfg: &DetectorConfig) -> Result<Self> {
        cfg.validate()?;
        let len = cfg.steps()?;
        let g = amplitude_free_series(&cfg.phi, &cfg.phi, cfg.dt, len)?;
        let f0 = amplitude_free_series(&cfg.phi, &cfg.psi, cfg.dt, len)?;
        Self::from_series(cfg.gamma, g, f0)
    }

    /// Kernels for a given g and F⁰ (e.g. F⁰ of a non-normalized combination).
    pub fn from_series(gamma: f64, g: ComplexTimeSeries, f0: ComplexTimeSeries) -> Result<Self> {
        if g.len() != f0.len() || g.dt != f0.dt {
            return Err(Error::DimensionMismatch { expected: g.len(), got: f0.len() });
        }
        let norm = gamma.abs() * g_l1_norm(&g);
        if norm >= 2.0 {
            return Err(Error::Inadmissible(format!("‖γg‖₁ = {norm:.4} is not below 2")));
        }
        let f1 = f1_samples(g.dt, g.len())?;
        let f = ComplexTimeSeries::new(g.dt, g.values.iter().zip(&f1).map(|(a, b)| a * b).collect())?;
        let k = causal_trapezoid(&g.values, &f.values, g.dt);
        Ok(DetectorKernels { gamma, g, f1, f, f0, k })
    }

    pub fn with_source(&self, f0: ComplexTimeSeries) -> Result<Self> {
        if f0.len() != self.g.len() || f0.dt != self.g.dt {
            return Err(Error::DimensionMismatch { expected: self.g.len(), got: f0.len() });
        }
        Ok(DetectorKernels { f0, ..self.clone() })
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        let norm = gamma.abs() * g_l1_norm(&self.g);
        if norm >= 2.0 {
            return Err(Error::Inadmissible(format!("‖γg‖₁ = {norm:.4} is not below 2")));
        }
        Ok(DetectorKernels { gamma, ..self.clone() })
    }

    pub fn dt(&self) -> f64 {
        self.g.dt
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// ‖γg‖₁ (whole line).
    pub fn coupling_norm(&self) -> f64 {
        self.gamma.abs() * g_l1_norm(&self.g)
    }
}

/// Both time-domain solutions of the convolution equation.
#[derive(Debug, Clone)]
pub struct VolterraSolution {
    pub marching: ComplexTimeSeries,
    pub neumann: ComplexTimeSeries,
    pub neumann_iterations: usize,
    pub neumann_converged: bool,
}

/// Forward trapezoid march: K₀ = 0 makes each step explicit,
/// F_n = F⁰_n − γ² dt (½K_n F_0 + Σ_{k=1}^{n−1} K_{n−k} F_k).
pub fn march(kernels: &DetectorKernels) -> ComplexTimeSeries {
    let c = kernels.gamma * kernels.gamma * kernels.dt();
    let k = &kernels.k;
    let f0 = &kernels.f0.values;
    let mut out: Vec<Complex64> = Vec::with_capacity(f0.len());
    out.push(f0[0]);
    for n in 1..f0.len() {
        let mut acc = 0.5 * k[n] * out[0];
        for j in 1..n {
            acc += k[n - j] * out[j];
        }
        out.push(f0[n] - c * acc);
    }
    ComplexTimeSeries { dt: kernels.dt(), values: out }
}

/// Neumann series Σ (−γ² K∗)ⁿ F⁰, summed as the fixed-point iteration
/// F ← F⁰ − γ² K∗F until the update is below `tol`.
pub fn neumann(kernels: &DetectorKernels, tol: f64, max_iter: usize) -> (ComplexTimeSeries, usize, bool) {
    let c = kernels.gamma * kernels.gamma;
    let f0 = &kernels.f0.values;
    let mut cur = f0.clone();
    for it in 1..=max_iter {
        let conv = causal_trapezoid(&kernels.k, &cur, kernels.dt());
        let next: Vec<Complex64> = f0.iter().zip(&conv).map(|(a, b)| a - c * b).collect();
        let delta = next.iter().zip(&cur).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        cur = next;
        if !delta.is_finite() {
            break;
        }
        if delta <= tol {
            return (ComplexTimeSeries { dt: kernels.dt(), values: cur }, it, true);
        }
    }
    (ComplexTimeSeries { dt: kernels.dt(), values: cur }, max_iter, false)
}

pub fn solve_volterra(kernels: &DetectorKernels) -> VolterraSolution {
    let marching = march(kernels);
    let (neumann, neumann_iterations, neumann_converged) = neumann(kernels, 1e-15, 500);
    VolterraSolution { marching, neumann, neumann_iterations, neumann_converged }
}

/// Half-line spectra on u_j = 2πj/(L dt), with ĥ₊ = (dt/√2π)·DFT(h, h₀ halved).
#[derive(Debug, Clone)]
pub struct FourierSolution {
    pub du: f64,
    pub g_hat: Vec<Complex64>,
    pub f_hat: Vec<Complex64>,
    pub f0_hat: Vec<Complex64>,
    pub solution_hat: Vec<Complex64>,
    /// F₊ recovered by the inverse transform, on the original grid.
    pub solution: ComplexTimeSeries,
    /// min_u |1 + 2πγ² ĝ₊ f̂₊|.
    pub min_denominator: f64,
    /// sup_u |2πγ² ĝ₊ f̂₊|.
    pub sup_coupling: f64,
}

impl FourierSolution {
    pub fn frequency(&self, j: usize) -> f64 {
        let l = self.g_hat.len();
        if j < l / 2 {
            j as f64 * self.du
        } else {
            (j as f64 - l as f64) * self.du
        }
    }
}

fn half_line_hat(fft: &FftPair, h: &[Complex64], dt: f64) -> Vec<Complex64> {
    let mut buf = h.to_vec();
    buf[0] *= 0.5;
    let s = dt / (2.0 * PI).sqrt();
    fft.forward(&buf).into_iter().map(|z| z * s).collect()
}

/// F̂₊ = F̂₊⁰/(1 + 2πγ² ĝ₊ f̂₊) on a transform 32× longer than the
/// next power of two above the grid. The term −γ² dt² g₀ f₀/4 makes the
/// discrete product match the trapezoid convolution exactly.
pub fn solve_fourier(kernels: &DetectorKernels) -> Result<FourierSolution> {
    let n = kernels.len();
    let dt = kernels.dt();
    let c = kernels.gamma * kernels.gamma;
    let fft = FftPair::new(32 * n.next_power_of_two());
    let g_hat = half_line_hat(&fft, &kernels.g.values, dt);
    let f_hat = half_line_hat(&fft, &kernels.f.values, dt);
    let f0_hat = half_line_hat(&fft, &kernels.f0.values, dt);
    let corner = c * dt * dt * kernels.g.values[0] * kernels.f.values[0] / 4.0;
    let mut min_denominator = f64::INFINITY;
    let mut sup_coupling = 0.0f64;
    let mut solution_hat = Vec::with_capacity(fft.len);
    for j in 0..fft.len {
        let coupling = 2.0 * PI * c * g_hat[j] * f_hat[j];
        let den = 1.0 + coupling - corner;
        min_denominator = min_denominator.min(den.norm());
        sup_coupling = sup_coupling.max(coupling.norm());
        solution_hat.push(f0_hat[j] / den);
    }
    if min_denominator < MIN_DENOMINATOR {
        return Err(Error::Singular(format!("denominator reaches {min_denominator:.3e}")));
    }
    let scale = (2.0 * PI).sqrt() / dt;
    let spectrum: Vec<Complex64> = solution_hat.iter().map(|z| z * scale).collect();
    let mut values = fft.inverse(spectrum);
    values.truncate(n);
    // The transform saw F₀ with half weight; F₀ = F⁰₀.
    values[0] += 0.5 * kernels.f0.values[0];
    Ok(FourierSolution {
        du: 2.0 * PI / (fft.len as f64 * dt),
        g_hat,
        f_hat,
        f0_hat,
        solution_hat,
        solution: ComplexTimeSeries { dt, values },
        min_denominator,
        sup_coupling,
    })
}
