//! Rotationally symmetric particle packets in the momentum representation
//! and the free amplitudes built from them (units with H_B = p̂²).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::series::ComplexTimeSeries;
use crate::error::{domain, Error, Result};
use crate::quadrature::Rule;

const ANCHOR_EVERY: usize = 64;

/// Composite Gauss–Legendre rule on [0, p_max] shared by all packets of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    pub p_max: f64,
    pub rule: Rule,
}

impl MomentumGrid {
    pub const DEFAULT_P_MAX: f64 = 12.0;
    pub const DEFAULT_PANELS: usize = 1500;
    pub const DEFAULT_ORDER: usize = 16;

    pub fn new(p_max: f64, panels: usize, order: usize) -> Result<Self> {
        if !(p_max > 0.0 && p_max.is_finite()) || panels == 0 || order == 0 {
            return domain(format!("invalid momentum grid: p_max={p_max}, panels={panels}, order={order}"));
        }
        Ok(MomentumGrid { p_max, rule: Rule::composite(0.0, p_max, panels, order) })
    }

    pub fn shared_default() -> Arc<Self> {
        Arc::new(
            Self::new(Self::DEFAULT_P_MAX, Self::DEFAULT_PANELS, Self::DEFAULT_ORDER).expect("default grid is valid"),
        )
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }
}

/// Analytic packet families.
#[derive(Debug, Clone, PartialEq)]
pub enum PacketShape {
    /// φ̂(p) ∝ exp(−(p − center)²/(4 width²)); for center 0 this is the
    /// Gaussian with |φ̂|² ∝ exp(−p²/(2 width²)).
    Gaussian { width: f64, center: f64 },
    /// Radial transform of b(x) = exp(−1/(1 − |x|²/R²)) on |x| < R.
    Bump { radius: f64 },
}

impl PacketShape {
    fn validate(&self) -> Result<()> {
        match *self {
            PacketShape::Gaussian { width, center } if width > 0.0 && center.is_finite() => Ok(()),
            PacketShape::Bump { radius } if radius > 0.0 && radius.is_finite() => Ok(()),
            _ => domain(format!("invalid packet shape {self:?}")),
        }
    }

    /// Unnormalized φ̂ at the momenta `ps`.
    fn raw(&self, ps: &[f64]) -> Vec<f64> {
        match *self {
            PacketShape::Gaussian { width, center } => {
                ps.iter().map(|p| (-(p - center).powi(2) / (4.0 * width * width)).exp()).collect()
            }
            PacketShape::Bump { radius } => {
                let rule = Rule::composite(0.0, radius, 32, 16);
                let profile: Vec<f64> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&r, &w)| w * r * r * (-1.0 / (1.0 - (r / radius).powi(2))).exp())
                    .collect();
                ps.iter()
                    .map(|&p| rule.nodes.iter().zip(&profile).map(|(&r, &m)| m * sinc(p * r)).sum::<f64>())
                    .collect()
            }
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// A rotationally symmetric packet sampled on a momentum grid.
#[derive(Debug, Clone)]
pub struct RadialPacket {
    grid: Arc<MomentumGrid>,
    shape: Option<PacketShape>,
    scale: f64,
    amplitude: Vec<Complex64>,
    density: Vec<f64>,
}

fn densities(grid: &MomentumGrid, amplitude: &[Complex64]) -> Vec<f64> {
    grid.nodes().iter().zip(amplitude).map(|(p, a)| 4.0 * PI * p * p * a.norm_sqr()).collect()
}

impl RadialPacket {
    /// Normalizes the shape on the grid so that ∫ 4πp²|φ̂|² dp = 1.
    pub fn new(grid: Arc<MomentumGrid>, shape: PacketShape) -> Result<Self> {
        shape.validate()?;
        let raw = shape.raw(grid.nodes());
        let norm: f64 =
            grid.nodes().iter().zip(&grid.rule.weights).zip(&raw).map(|((p, w), a)| w * 4.0 * PI * p * p * a * a).sum();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Degenerate(format!("packet {shape:?} vanishes on the grid")));
        }
        let scale = norm.sqrt().recip();
        let amplitude: Vec<Complex64> = raw.iter().map(|a| Complex64::new(a * scale, 0.0)).collect();
        let density = densities(&grid, &amplitude);
        Ok(RadialPacket { grid, shape: Some(shape), scale, amplitude, density })
    }

    pub fn gaussian(grid: Arc<MomentumGrid>, width: f64, center: f64) -> Result<Self> {
        Self::new(grid, PacketShape::Gaussian { width, center })
    }

    pub fn bump(grid: Arc<MomentumGrid>, radius: f64) -> Result<Self> {
        Self::new(grid, PacketShape::Bump { radius })
    }

    /// Packet given directly by its samples; must be normalized to 1e−8.
    pub fn from_amplitude(grid: Arc<MomentumGrid>, amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() != grid.rule.len() {
            return Err(Error::DimensionMismatch { expected: grid.rule.len(), got: amplitude.len() });
        }
        let density = densities(&grid, &amplitude);
        let packet = RadialPacket { grid, shape: None, scale: 1.0, amplitude, density };
        let n = packet.norm_sqr();
        if (n - 1.0).abs() > 1e-8 {
            return Err(Error::Unnormalized(n));
        }
        Ok(packet)
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn shape(&self) -> Option<&PacketShape> {
        self.shape.as_ref()
    }

    pub fn p_grid(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    /// 4πp²|φ̂(p)|² at the grid nodes.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// ∫ density.
    pub fn norm_sqr(&self) -> f64 {
        self.density.iter().zip(&self.grid.rule.weights).map(|(d, w)| d * w).sum()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid
    }

    /// φ̂(p) off the grid, for packets built from a shape.
    pub fn eval(&self, p: f64) -> Result<Complex64> {
        match &self.shape {
            Some(shape) => Ok(Complex64::new(shape.raw(&[p])[0] * self.scale, 0.0)),
            None => domain("packet has no analytic shape to evaluate off the grid"),
        }
    }

    /// ‖φ‖₁ = ∫ |φ(x)| d³x, with the radial inverse transform
    /// φ(r) = (2π)^{−3/2} 4π ∫ p² φ̂(p) sin(pr)/(pr) dp.
    pub fn position_l1_norm(&self, r_max: f64, panels: usize) -> f64 {
        let rule = Rule::composite(0.0, r_max, panels, 8);
        let pre = 4.0 * PI * (2.0 * PI).powf(-1.5);
        let p = self.p_grid();
        let w = &self.grid.rule.weights;
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&r, &wr)| {
                let phi: Complex64 =
                    (0..p.len()).map(|k| self.amplitude[k] * (w[k] * p[k] * p[k] * sinc(p[k] * r))).sum();
                wr * 4.0 * PI * r * r * (pre * phi).norm()
            })
            .sum()
    }
}

fn check_pair(a: &RadialPacket, b: &RadialPacket) -> Result<()> {
    if a.same_grid(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// ⟨a|e^{−itp̂²}|b⟩ = ∫ conj(â) b̂ e^{−itp²} 4πp² dp.
pub fn amplitude_free(a: &RadialPacket, b: &RadialPacket, t: f64) -> Result<Complex64> {
    check_pair(a, b)?;
    let grid = a.grid();
    Ok(grid
        .nodes()
        .iter()
        .zip(&grid.rule.weights)
        .zip(a.amplitude.iter().zip(&b.amplitude))
        .map(|((&p, &w), (x, y))| x.conj() * y * Complex64::from_polar(w * 4.0 * PI * p * p, -t * p * p))
        .sum())
}

/// The same amplitude on the time grid k·dt, k < len, by a phasor
/// recurrence re-anchored every few steps.
pub fn amplitude_free_series(a: &RadialPacket, b: &RadialPacket, dt: f64, len: usize) -> Result<ComplexTimeSeries> {
    check_pair(a, b)?;
    let grid = a.grid();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (k, (&p, &w)) in grid.nodes().iter().zip(&grid.rule.weights).enumerate() {
        let weight = a.amplitude[k].conj() * b.amplitude[k] * (w * 4.0 * PI * p * p);
        if weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        let step = Complex64::from_polar(1.0, -dt * p * p);
        let mut phase = Complex64::new(1.0, 0.0);
        for (n, slot) in out.iter_mut().enumerate() {
            if n % ANCHOR_EVERY == 0 {
                phase = Complex64::from_polar(1.0, -(n as f64) * dt * p * p);
            }
            *slot += weight * phase;
            phase *= step;
        }
    }
    ComplexTimeSeries::new(dt, out)
}

/// The amplitude in the energy variable λ = p²:
/// ½ ∫_0^{p_max²} √λ conj(â(√λ)) b̂(√λ) e^{−itλ} 4π dλ, on a rule graded
/// towards λ = 0.
pub fn amplitude_free_lambda(a: &RadialPacket, b: &RadialPacket, t: f64) -> Result<Complex64> {
    check_pair(a, b)?;
    let top = a.grid().p_max.powi(2);
    let rule = Rule::graded(0.0, 1.0, 48, 16).join(Rule::composite(1.0, top, 4000, 16));
    let mut acc = Complex64::new(0.0, 0.0);
    for (&l, &w) in rule.nodes.iter().zip(&rule.weights) {
        let p = l.sqrt();
        let v = a.eval(p)?.conj() * b.eval(p)?;
        acc += v * Complex64::from_polar(w * 2.0 * PI * p, -t * l);
    }
    Ok(acc)
}

/// f̂₁(u) = θ(2 − |u|) √(4 − u²)/√(2π), the transform of J₁(2t)/t.
pub fn semicircle_kernel(u: f64) -> f64 {
    if u.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - u * u).sqrt() / (2.0 * PI).sqrt()
    }
}

/// ĝ(u) = θ(−u) √(π/2) √(−u) 4π|φ̂(√(−u))|².
pub fn ghat_radial(packet: &RadialPacket, u: f64) -> Result<f64> {
    if u >= 0.0 {
        return Ok(0.0);
    }
    let p = (-u).sqrt();
    Ok((PI / 2.0).sqrt() * p * 4.0 * PI * packet.eval(p)?.norm_sqr())
}

fn two_sided_graded(a: f64, b: f64) -> Rule {
    let mid = 0.5 * (a + b);
    let left = Rule::graded(a, mid, 40, 16);
    let right = Rule { nodes: left.nodes.iter().map(|x| a + b - x).collect(), weights: left.weights.clone() };
    left.join(right)
}

/// f̂(u) = (2π)^{−1/2} ∫ f̂₁(τ) ĝ(u − τ) dτ, the transform of f = g·f₁.
pub fn fhat_radial(packet: &RadialPacket, u: f64) -> Result<f64> {
    let lo = u.max(-2.0);
    if lo >= 2.0 {
        return Ok(0.0);
    }
    let rule = two_sided_graded(lo, 2.0);
    let mut acc = 0.0;
    for (&tau, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * semicircle_kernel(tau) * ghat_radial(packet, u - tau)?;
    }
    Ok(acc / (2.0 * PI).sqrt())
}
