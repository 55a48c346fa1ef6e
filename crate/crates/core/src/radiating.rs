//! A finite domino chain radiating one fermion into a discretized continuum.
//!
//! The dynamics is restricted to the invariant subspace spanned by the
//! island states β₀..β_{N−1} and the one-particle states β_N(k), one per
//! quadrature node of the continuum.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dense::{eigh, DenseOperator, Eigen, Lu};
use crate::error::{domain, Result};
use crate::quadrature::Rule;

/// Shape of the radial form factor σ̂(p), zero for p ≤ b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaProfile {
    /// (p − b)² e^{−p²}.
    Ramp,
    /// e^{−1/(p − b)} e^{−p²}, smooth at p = b.
    Mollified,
}

impl SigmaProfile {
    pub fn eval(self, p: f64, b: f64) -> f64 {
        if p <= b {
            return 0.0;
        }
        let d = p - b;
        match self {
            SigmaProfile::Ramp => d * d * (-p * p).exp(),
            SigmaProfile::Mollified => (-1.0 / d - p * p).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiatingParams {
    /// Chain length N: island states β₀..β_{N−1}.
    pub n: usize,
    pub eps0: f64,
    pub v: f64,
    /// Dispersion ε(p) = a p².
    pub a: f64,
    /// Infrared cutoff of σ̂.
    pub b: f64,
    pub profile: SigmaProfile,
}

/// σ̂ is below e^{−64} beyond b + 8.
const P_SPAN: f64 = 8.0;

fn momentum_rule(b: f64, hi: f64) -> Rule {
    let panels = ((hi - b) * 25.0).ceil().max(1.0) as usize;
    Rule::composite(b, hi, panels, 16)
}

impl RadiatingParams {
    pub const DEFAULT_N: usize = 6;
    pub const DEFAULT_M: usize = 400;
    pub const DEFAULT_A: f64 = 1.0;
    pub const DEFAULT_B: f64 = 0.5;
    pub const DEFAULT_V: f64 = 1.5;
    /// Distance of the default ε₀ above [`RadiatingParams::eps0_threshold`].
    pub const DEFAULT_EPS0_MARGIN: f64 = 0.5;

    /// Default chain and form factor with ε₀ placed above the sufficient
    /// decay threshold.
    pub fn defaults() -> Self {
        Self::with_margin(
            Self::DEFAULT_N,
            Self::DEFAULT_V,
            Self::DEFAULT_A,
            Self::DEFAULT_B,
            SigmaProfile::Ramp,
            Self::DEFAULT_EPS0_MARGIN,
        )
    }

    /// Parameters with ε₀ = threshold + `margin`.
    pub fn with_margin(n: usize, v: f64, a: f64, b: f64, profile: SigmaProfile, margin: f64) -> Self {
        let mut p = RadiatingParams { n, eps0: 0.0, v, a, b, profile };
        p.eps0 = p.eps0_threshold() + margin;
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return domain("chain needs at least one island state");
        }
        if !(self.a > 0.0 && self.b > 0.0) {
            return domain(format!("need a > 0 and b > 0, got a = {}, b = {}", self.a, self.b));
        }
        if !self.v.is_finite() {
            return domain("coupling v must be finite");
        }
        if !(self.eps0 > self.a * self.b * self.b + 2.0) {
            return domain(format!("ε₀ = {} must exceed ab² + 2 = {}", self.eps0, self.a * self.b * self.b + 2.0));
        }
        Ok(())
    }

    pub fn sigma_hat(&self, p: f64) -> f64 {
        self.profile.eval(p, self.b)
    }

    /// Lower edge ab² of the continuum.
    pub fn threshold_energy(&self) -> f64 {
        self.a * self.b * self.b
    }

    /// 2 + ab² + 2v² ∫ ρ_μ(λ)/(λ − ab²) dλ.
    pub fn eps0_threshold(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        let rule = momentum_rule(b, b + P_SPAN);
        let integral = rule.integrate(|p| {
            let s = self.sigma_hat(p);
            4.0 * PI * p * p * s * s / (a * (p * p - b * b))
        });
        2.0 + a * b * b + 2.0 * self.v * self.v * integral
    }
}

/// ρ_μ(λ) = (2π/a^{3/2}) √λ |σ̂(√(λ/a))|².
pub fn spectral_density(lambda: f64, params: &RadiatingParams) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain(format!("spectral density needs λ > 0, got {lambda}"));
    }
    let s = params.sigma_hat((lambda / params.a).sqrt());
    Ok(2.0 * PI / params.a.powf(1.5) * lambda.sqrt() * s * s)
}

/// μ((−∞, λ]) = ∫_{ap² < λ} |σ̂(p)|² d³p.
pub fn cumulative_measure(lambda: f64, params: &RadiatingParams) -> f64 {
    if lambda <= params.threshold_energy() {
        return 0.0;
    }
    let p_hi = (lambda / params.a).sqrt();
    momentum_rule(params.b, p_hi.min(params.b + P_SPAN)).integrate(|p| {
        let s = params.sigma_hat(p);
        4.0 * PI * p * p * s * s
    })
}

/// Smallest λ_max (to 1e−6 relative) whose neglected weight μ((λ_max, ∞))
/// is below `fraction` of the total.
pub fn default_lambda_max(params: &RadiatingParams, fraction: f64) -> f64 {
    let (a, b) = (params.a, params.b);
    let total = cumulative_measure(a * (b + P_SPAN).powi(2), params);
    let (mut lo, mut hi) = (b, b + P_SPAN);
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if cumulative_measure(a * mid * mid, params) >= (1.0 - fraction) * total {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    a * hi * hi
}

/// Quadrature discretization of the continuum on [ab², λ_max].
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumModes {
    /// λ_k, strictly increasing.
    pub energies: Vec<f64>,
    /// g_k = √(w_k ρ_μ(λ_k)).
    pub couplings: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ContinuumModes {
    /// M Gauss–Legendre nodes on [ab², λ_max].
    pub fn gauss(params: &RadiatingParams, m: usize, lambda_max: f64) -> Result<Self> {
        params.validate()?;
        let lo = params.threshold_energy();
        if m == 0 {
            return domain("need at least one continuum mode");
        }
        if !(lambda_max > lo) {
            return domain(format!("λ_max = {lambda_max} must exceed ab² = {lo}"));
        }
        let rule = Rule::gauss(lo, lambda_max, m);
        let couplings = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&l, &w)| Ok((w * spectral_density(l, params)?).sqrt()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContinuumModes { energies: rule.nodes, couplings, weights: rule.weights })
    }

    /// M modes with λ_max from [`default_lambda_max`] at fraction 1e−4.
    pub fn with_default_window(params: &RadiatingParams, m: usize) -> Result<Self> {
        Self::gauss(params, m, default_lambda_max(params, 1e-4))
    }

    pub fn count(&self) -> usize {
        self.energies.len()
    }

    /// Σ g_k², the discrete counterpart of ∫ρ_μ over the window.
    pub fn total_weight(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }

    /// 2π/Δλ for the widest node gap; the discretization is faithful only
    /// for earlier times.
    pub fn recurrence_time(&self) -> f64 {
        let gap = self.energies.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        if gap > 0.0 {
            2.0 * PI / gap
        } else {
            f64::INFINITY
        }
    }
}

/// H on H_min: hopping 1 along β₀..β_{N−1}, v²g_k between β_{N−1} and
/// β_N(k), and −ε₀ + λ_k on β_N(k).
pub fn build_minimal_hamiltonian(params: &RadiatingParams, modes: &ContinuumModes) -> Result<DenseOperator> {
    let (h0, v) = split_hamiltonian(params, modes)?;
    Ok(&h0 + &v)
}

/// The free part H₀ (chain block and mode energies) and the coupling V.
pub fn split_hamiltonian(params: &RadiatingParams, modes: &ContinuumModes) -> Result<(DenseOperator, DenseOperator)> {
    params.validate()?;
    let n = params.n;
    let dim = n + modes.count();
    let h0 = DenseOperator::from_real(dim, |i, j| {
        if i < n && j < n {
            if i.abs_diff(j) == 1 {
                1.0
            } else {
                0.0
            }
        } else if i == j {
            -params.eps0 + modes.energies[i - n]
        } else {
            0.0
        }
    });
    let v2 = params.v * params.v;
    let v = DenseOperator::from_real(dim, |i, j| match (i, j) {
        (i, j) if i == n - 1 && j >= n => v2 * modes.couplings[j - n],
        (i, j) if j == n - 1 && i >= n => v2 * modes.couplings[i - n],
        _ => 0.0,
    });
    Ok((h0, v))
}

/// Populations after evolving β_{n0} for time t.
#[derive(Debug, Clone, PartialEq)]
pub struct Populations {
    pub t: f64,
    /// |⟨β_n|e^{−itH}|β_{n0}⟩|² for n < N.
    pub survival: Vec<f64>,
    /// Σ_k |⟨β_N(k)|e^{−itH}|β_{n0}⟩|².
    pub decay: f64,
}

impl Populations {
    pub fn total(&self) -> f64 {
        self.decay + self.survival.iter().sum::<f64>()
    }
}

/// A diagonalized radiating system, reused across many times.
#[derive(Debug, Clone)]
pub struct RadiatingSystem {
    pub params: RadiatingParams,
    pub modes: ContinuumModes,
    pub hamiltonian: DenseOperator,
    eigen: Eigen,
}

impl RadiatingSystem {
    pub fn new(params: RadiatingParams, modes: ContinuumModes) -> Result<Self> {
        let hamiltonian = build_minimal_hamiltonian(&params, &modes)?;
        let eigen = eigh(&hamiltonian)?;
        Ok(RadiatingSystem { params, modes, hamiltonian, eigen })
    }

    pub fn defaults() -> Result<Self> {
        let params = RadiatingParams::defaults();
        let modes = ContinuumModes::with_default_window(&params, RadiatingParams::DEFAULT_M)?;
        Self::new(params, modes)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eigen
    }

    fn check_level(&self, n0: usize) -> Result<()> {
        if n0 >= self.params.n {
            return domain(format!("initial index {n0} outside 0..{}", self.params.n));
        }
        Ok(())
    }

    pub fn populations(&self, n0: usize, t: f64) -> Result<Populations> {
        self.check_level(n0)?;
        let mut psi0 = vec![Complex64::new(0.0, 0.0); self.dim()];
        psi0[n0] = Complex64::new(1.0, 0.0);
        let psi = self.eigen.evolve(&psi0, t)?;
        let n = self.params.n;
        Ok(Populations {
            t,
            survival: psi[..n].iter().map(|z| z.norm_sqr()).collect(),
            decay: psi[n..].iter().map(|z| z.norm_sqr()).sum(),
        })
    }

    pub fn decay_probability(&self, n0: usize, t: f64) -> Result<f64> {
        Ok(self.populations(n0, t)?.decay)
    }

    /// ⟨β_m|e^{itH}|β_n⟩ from the eigendecomposition.
    pub fn matrix_element(&self, m: usize, n: usize, t: f64) -> Complex64 {
        let v = &self.eigen.vectors;
        self.eigen
            .values
            .iter()
            .enumerate()
            .map(|(k, &e)| v.get(m, k) * v.get(n, k).conj() * Complex64::from_polar(1.0, e * t))
            .sum()
    }

    /// ⟨β_m|(H − ξ)⁻¹|β_n⟩ by a direct linear solve.
    pub fn resolvent_element(&self, m: usize, n: usize, xi: Complex64) -> Result<Complex64> {
        let shifted = &self.hamiltonian - &DenseOperator::identity(self.dim()).scale(xi);
        let mut rhs = vec![Complex64::new(0.0, 0.0); self.dim()];
        rhs[n] = Complex64::new(1.0, 0.0);
        Ok(Lu::new(&shifted)?.solve(&rhs)?[m])
    }

    /// (i/√2π)⟨β_m|R_H(ξ)|β_n⟩ and the quadrature of
    /// (1/√2π)∫₀^∞ ⟨β_m|e^{itH}|β_n⟩ e^{−iξt} dt.
    pub fn resolvent_check(&self, m: usize, n: usize, xi: Complex64) -> Result<(Complex64, Complex64)> {
        if !(xi.im < 0.0) {
            return domain(format!("need Im ξ < 0, got {}", xi.im));
        }
        if m >= self.dim() || n >= self.dim() {
            return domain(format!("indices ({m}, {n}) outside the {}-dimensional space", self.dim()));
        }
        let norm = 1.0 / (2.0 * PI).sqrt();
        let direct = Complex64::new(0.0, norm) * self.resolvent_element(m, n, xi)?;

        // |e^{−iξt}| = e^{Im ξ t} < e^{−40} beyond the horizon.
        let horizon = 40.0 / -xi.im;
        let omega = self.eigen.values.iter().fold(xi.re.abs(), |acc, e| acc.max((e - xi.re).abs()));
        let panels = (horizon * (omega + 1.0) / 4.0).ceil() as usize;
        let rule = Rule::composite(0.0, horizon, panels.max(1), 16);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * self.matrix_element(m, n, t) * (Complex64::new(0.0, -1.0) * xi * t).exp();
        }
        Ok((direct, norm * acc))
    }

    /// max |R − R₀(I − VR)| over all entries, with R₀ = (H₀ − ξ)⁻¹.
    pub fn resolvent_identity_residual(&self, xi: Complex64) -> Result<f64> {
        let (h0, v) = split_hamiltonian(&self.params, &self.modes)?;
        let shift = DenseOperator::identity(self.dim()).scale(xi);
        let r = Lu::new(&(&self.hamiltonian - &shift))?.inverse()?;
        let r0 = Lu::new(&(&h0 - &shift))?.inverse()?;
        let rhs = r0.matmul(&(&DenseOperator::identity(self.dim()) - &v.matmul(&r)?))?;
        let diff = &r - &rhs;
        Ok(diff.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// Σ_k |⟨β_N(k)|e^{−itH}|β_{n0}⟩|²; diagonalizes H on every call.
pub fn decay_probability(params: &RadiatingParams, modes: &ContinuumModes, n0: usize, t: f64) -> Result<f64> {
    RadiatingSystem::new(*params, modes.clone())?.decay_probability(n0, t)
}

pub fn resolvent_check(
    params: &RadiatingParams,
    modes: &ContinuumModes,
    m: usize,
    n: usize,
    xi: Complex64,
) -> Result<(Complex64, Complex64)> {
    RadiatingSystem::new(*params, modes.clone())?.resolvent_check(m, n, xi)
}

/// First time on the grid at which the decay probability exceeds `level`.
pub fn first_passage(system: &RadiatingSystem, n0: usize, times: &[f64], level: f64) -> Result<Option<f64>> {
    for &t in times {
        if system.decay_probability(n0, t)? > level {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_vanishes_below_cutoff() {
        let p = RadiatingParams::defaults();
        assert_eq!(spectral_density(0.5 * p.threshold_energy(), &p).unwrap(), 0.0);
        assert!(spectral_density(0.0, &p).is_err());
    }

    #[test]
    fn default_eps0_is_admissible() {
        let p = RadiatingParams::defaults();
        p.validate().unwrap();
        assert!(p.eps0 > p.threshold_energy() + 2.0);
    }
}
