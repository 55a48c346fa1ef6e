//! Classical projections on Heisenberg-group orbits: packet-smeared
//! potentials and the quantum versus classical circles generated by a
//! multiple of the ground-state projector.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

/// A point z = q − ip of the orbit at scale λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub z: Complex64,
    pub lambda: f64,
}

impl OrbitPoint {
    pub fn new(z: Complex64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("scale λ must be positive, got {lambda}"));
        }
        Ok(OrbitPoint { z, lambda })
    }

    pub fn from_qp(q: f64, p: f64, lambda: f64) -> Result<Self> {
        Self::new(Complex64::new(q, -p), lambda)
    }

    /// |α|² = z̄z/(2λ²) of the matching coherent state.
    pub fn alpha_sqr(&self) -> f64 {
        self.z.norm_sqr() / (2.0 * self.lambda * self.lambda)
    }

    /// α = z̄/(√2 λ), so that ⟨Z^λ⟩ = √2 λ ᾱ = z.
    pub fn alpha(&self) -> Complex64 {
        self.z.conj() / (2f64.sqrt() * self.lambda)
    }
}

/// f(z) = a e^{−z̄z/(2λ²)}, the orbit Hamiltonian of a·P_φ.
pub fn orbit_energy(z0: &OrbitPoint, a: f64) -> f64 {
    a * (-z0.alpha_sqr()).exp()
}

/// a(λ) = λ² e^{b/(2λ²)}.
pub fn critical_renormalization(lambda: f64, b: f64) -> f64 {
    lambda * lambda * (b / (2.0 * lambda * lambda)).exp()
}

/// [1 − f/a] z₀ + (f/a) e^{−ita/λ²} z₀.
pub fn quantum_trajectory(z0: &OrbitPoint, t: f64, a: f64) -> Result<Complex64> {
    if a == 0.0 || !a.is_finite() {
        return domain(format!("renormalization a must be finite and non-zero, got {a}"));
    }
    let r = (-z0.alpha_sqr()).exp();
    let phase = Complex64::from_polar(1.0, -t * a / (z0.lambda * z0.lambda));
    Ok(z0.z * ((1.0 - r) + r * phase))
}

/// e^{−itf/λ²} z₀.
pub fn classical_trajectory(z0: &OrbitPoint, t: f64, a: f64) -> Complex64 {
    let f = orbit_energy(z0, a);
    z0.z * Complex64::from_polar(1.0, -t * f / (z0.lambda * z0.lambda))
}

/// Centre (1 − f/a)z₀ and radius (f/a)|z₀| of the quantum circle.
pub fn quantum_circle(z0: &OrbitPoint) -> (Complex64, f64) {
    let r = (-z0.alpha_sqr()).exp();
    (z0.z * (1.0 - r), r * z0.z.norm())
}

/// 2πλ²/|a|.
pub fn quantum_period(z0: &OrbitPoint, a: f64) -> f64 {
    2.0 * PI * z0.lambda * z0.lambda / a.abs()
}

/// 2πλ²/|f(z₀)|; infinite when f underflows.
pub fn classical_period(z0: &OrbitPoint, a: f64) -> f64 {
    let f = orbit_energy(z0, a).abs();
    if f > 0.0 {
        2.0 * PI * z0.lambda * z0.lambda / f
    } else {
        f64::INFINITY
    }
}

/// First time in (0, t_max] where |z(t) − z(0)| has a local minimum below
/// `tol`, located by scanning with step `dt` and refining by golden section.
pub fn return_time(traj: impl Fn(f64) -> Complex64, t_max: f64, dt: f64, tol: f64) -> Result<Option<f64>> {
    if !(dt > 0.0 && t_max > dt) {
        return domain(format!("need 0 < dt < t_max, got dt = {dt}, t_max = {t_max}"));
    }
    let z0 = traj(0.0);
    let d = |t: f64| (traj(t) - z0).norm();
    let n = (t_max / dt).ceil() as usize;
    let (mut prev, mut cur) = (d(dt), d(2.0 * dt));
    for k in 2..n {
        let next = d((k + 1) as f64 * dt);
        if cur <= prev && cur <= next {
            let (t, val) = golden_min(&d, (k - 1) as f64 * dt, (k + 1) as f64 * dt);
            if val < tol {
                return Ok(Some(t));
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(None)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * b.abs().max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// A probability density |φ(q′)|² on a uniform grid with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SmearingPacket {
    pub nodes: Vec<f64>,
    pub density: Vec<f64>,
    weights: Vec<f64>,
}

impl SmearingPacket {
    /// Samples on a uniform grid; ∫ density must be 1 within 1e−10.
    pub fn from_samples(nodes: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if nodes.len() != density.len() || nodes.len() < 2 {
            return domain("packet needs at least two nodes with matching densities");
        }
        let h = nodes[1] - nodes[0];
        if !(h > 0.0) || nodes.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
            return domain("packet grid must be uniform and increasing");
        }
        if density.iter().any(|&r| !(r >= 0.0)) {
            return domain("packet density must be non-negative");
        }
        let n = nodes.len();
        let weights: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
        let norm: f64 = density.iter().zip(&weights).map(|(r, w)| r * w).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return domain(format!("packet density integrates to {norm}, not 1"));
        }
        Ok(SmearingPacket { nodes, density, weights })
    }

    /// ϱ(q′) = |φ(q′/w)|²/w for the ground state φ(q) = π^{−1/4}e^{−q²/2}:
    /// ϱ(q′) = e^{−q′²/w²}/(w√π), sampled on [−10w, 10w].
    pub fn gaussian(width: f64, points: usize) -> Result<Self> {
        if !(width > 0.0) || points < 3 {
            return domain("gaussian packet needs width > 0 and at least three points");
        }
        let half = 10.0 * width;
        let h = 2.0 * half / (points - 1) as f64;
        let nodes: Vec<f64> = (0..points).map(|i| -half + i as f64 * h).collect();
        let density = nodes.iter().map(|q| (-(q / width).powi(2)).exp() / (width * PI.sqrt())).collect();
        Self::from_samples(nodes, density)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    /// ∫ q′² ϱ(q′) dq′.
    pub fn second_moment(&self) -> f64 {
        self.nodes.iter().zip(&self.density).zip(&self.weights).map(|((q, r), w)| q * q * r * w).sum()
    }
}

/// A potential sampled on a uniform grid, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl SampledPotential {
    pub fn from_fn(v: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(hi > lo) || points < 2 {
            return domain("potential grid needs lo < hi and at least two points");
        }
        let step = (hi - lo) / (points - 1) as f64;
        let values: Vec<f64> = (0..points).map(|i| v(lo + i as f64 * step)).collect();
        if values.iter().any(|x| !x.is_finite()) {
            return domain("potential must be finite on the grid");
        }
        Ok(SampledPotential { start: lo, step, values })
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        let x = (q - self.start) / self.step;
        let last = (self.values.len() - 1) as f64;
        if !(x >= -1e-9 && x <= last + 1e-9) {
            return domain(format!("q = {q} outside the sampled range [{}, {}]", self.start, self.end()));
        }
        let x = x.clamp(0.0, last);
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let s = x - i as f64;
        Ok((1.0 - s) * self.values[i] + s * self.values[i + 1])
    }
}

/// V_φ(q) = ∫ ϱ(q′) V(q + q′) dq′.
pub fn smeared_potential(v: &SampledPotential, packet: &SmearingPacket, q: f64) -> Result<f64> {
    let (lo, hi) = packet.support();
    if q + lo < v.start - 1e-9 * v.step || q + hi > v.end() + 1e-9 * v.step {
        return domain(format!(
            "packet support [{}, {}] around q = {q} exceeds the sampled potential [{}, {}]",
            q + lo,
            q + hi,
            v.start,
            v.end()
        ));
    }
    let mut s = 0.0;
    for ((qp, r), w) in packet.nodes.iter().zip(&packet.density).zip(&packet.weights) {
        s += w * r * v.eval(q + qp)?;
    }
    Ok(s)
}

/// The same trajectory from a coherent state in a truncated Fock space.
pub mod fock_oracle {
    use super::*;
    use crate::dense::{evolve, DenseOperator};

    pub const DEFAULT_N_MAX: usize = 60;

    /// e^{−|α|²/2} αⁿ/√(n!) for n = 0..=n_max.
    pub fn coherent_state(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        out.push(c);
        for n in 1..=n_max {
            c = c * alpha / (n as f64).sqrt();
            out.push(c);
        }
        out
    }

    /// Weight of the coherent state beyond n_max.
    pub fn truncation_error(alpha: Complex64, n_max: usize) -> f64 {
        let kept: f64 = coherent_state(alpha, n_max).iter().map(|c| c.norm_sqr()).sum();
        (1.0 - kept).max(0.0)
    }

    /// Creation operator a† on span{|0⟩..|n_max⟩}.
    pub fn creation(n_max: usize) -> DenseOperator {
        DenseOperator::from_real(n_max + 1, |i, j| if i == j + 1 { (i as f64).sqrt() } else { 0.0 })
    }

    /// ⟨ψ_t|Z^λ|ψ_t⟩ with Z^λ = √2 λ a†, ψ_t = e^{−(it/λ²) a|0⟩⟨0|}|α⟩.
    pub fn quantum_trajectory(z0: &OrbitPoint, t: f64, a: f64, n_max: usize) -> Result<Complex64> {
        let alpha = z0.alpha();
        if truncation_error(alpha, n_max) > 1e-10 {
            return domain(format!("|α|² = {} needs more than {n_max} Fock levels", alpha.norm_sqr()));
        }
        let mut psi = coherent_state(alpha, n_max);
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|c| *c /= norm);
        let scale = 1.0 / (z0.lambda * z0.lambda);
        let h = DenseOperator::from_real(n_max + 1, |i, j| if i == 0 && j == 0 { a * scale } else { 0.0 });
        let psi_t = evolve(&h, &psi, t)?;
        let z_op = creation(n_max).scale(Complex64::new(2f64.sqrt() * z0.lambda, 0.0));
        let zpsi = z_op.matvec(&psi_t)?;
        Ok(psi_t.iter().zip(&zpsi).map(|(x, y)| x.conj() * y).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_reproduces_z() {
        let z0 = OrbitPoint::from_qp(0.3, -1.2, 0.4).unwrap();
        assert!((z0.alpha().conj() * 2f64.sqrt() * z0.lambda - z0.z).norm() < 1e-15);
        assert!((z0.alpha().norm_sqr() - z0.alpha_sqr()).abs() < 1e-14 * z0.alpha_sqr());
    }

    #[test]
    fn linear_interpolation_is_exact_on_lines() {
        let v = SampledPotential::from_fn(|q| 2.0 * q - 1.0, -1.0, 1.0, 11).unwrap();
        assert!((v.eval(0.33).unwrap() - (-0.34)).abs() < 1e-15);
        assert!(v.eval(1.5).is_err());
    }
}
