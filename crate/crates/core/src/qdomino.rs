//! Quantum domino chain: Chebyshev eigen-solution of the island
//! Hamiltonian, finite and infinite Green functions, flip probabilities,
//! their t⁻³ approach to certainty, and the ideal-measurement mixture.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j_all, bessel_j_int, finite_kernel, minus_i_pow, FiniteKernelParams};

/// E_j = 2cos(jπ/(N+1)) and c_m(E_j) = √(2/(N+1)) sin(jmπ/(N+1)).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub chain_len: usize,
    pub energies: Vec<f64>,
    /// `amplitudes[j-1][m-1]` = c_m(E_j).
    pub amplitudes: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn new(chain_len: usize) -> Result<Self> {
        if chain_len < 1 {
            return domain("chain length must be at least 1");
        }
        let step = PI / (chain_len + 1) as f64;
        let norm = (2.0 / (chain_len + 1) as f64).sqrt();
        let energies = (1..=chain_len).map(|j| 2.0 * (j as f64 * step).cos()).collect();
        let amplitudes =
            (1..=chain_len).map(|j| (1..=chain_len).map(|m| norm * ((j * m) as f64 * step).sin()).collect()).collect();
        Ok(EigenSystem { chain_len, energies, amplitudes })
    }

    /// Σ_j c_n(E_j) c_m(E_j) e^{−iE_j t}.
    pub fn green(&self, n: usize, m: usize, t: f64) -> Complex64 {
        self.energies
            .iter()
            .zip(&self.amplitudes)
            .map(|(e, c)| Complex64::from_polar(c[n - 1] * c[m - 1], -e * t))
            .sum()
    }
}

fn check_sites(n: usize, m: usize, len: Option<usize>) -> Result<()> {
    let upper = len.unwrap_or(usize::MAX);
    if n < 1 || m < 1 || n > upper || m > upper {
        return domain(format!("sites ({n}, {m}) out of range 1..={upper}"));
    }
    Ok(())
}

/// ⟨n|e^{−itH_N}|m⟩ = (−i)^{n−m} J^(N)_{n−m}(2t) − (−i)^{n+m} J^(N)_{n+m}(2t).
pub fn green_finite(n: usize, m: usize, chain_len: usize, t: f64) -> Result<Complex64> {
    check_sites(n, m, Some(chain_len))?;
    let d = n as i64 - m as i64;
    let s = (n + m) as i64;
    let kd = finite_kernel(FiniteKernelParams { n: d, chain_len, z: 2.0 * t })?;
    let ks = finite_kernel(FiniteKernelParams { n: s, chain_len, z: 2.0 * t })?;
    Ok(minus_i_pow(d) * kd - minus_i_pow(s) * ks)
}

/// The N → ∞ Green function with Bessel functions in place of J^(N).
pub fn green_infinite(n: usize, m: usize, t: f64) -> Result<Complex64> {
    check_sites(n, m, None)?;
    let d = n as i64 - m as i64;
    let s = (n + m) as i64;
    Ok(minus_i_pow(d) * bessel_j_int(d, 2.0 * t)? - minus_i_pow(s) * bessel_j_int(s, 2.0 * t)?)
}

/// Σ_{m=1}^{j−1} [m J_m(2t)/t]², the probability that spin j is still down.
pub fn unflipped_probability(j: usize, t: f64) -> Result<f64> {
    if j < 1 {
        return domain("site index must be at least 1");
    }
    if t < 0.0 || !t.is_finite() {
        return domain(format!("time must be finite and nonnegative, got {t}"));
    }
    if j == 1 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let jv = bessel_j_all(j - 1, 2.0 * t)?;
    Ok((1..j)
        .map(|m| {
            let a = m as f64 * jv[m] / t;
            a * a
        })
        .sum())
}

/// Probability that spin j has flipped up by time t.
pub fn flip_probability(j: usize, t: f64) -> Result<f64> {
    Ok(1.0 - unflipped_probability(j, t)?)
}

/// Least-squares slope of log y against log t through the strict local
/// maxima of an oscillating positive series.
pub fn envelope_slope(ts: &[f64], ys: &[f64]) -> Result<f64> {
    if ts.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: ts.len(), got: ys.len() });
    }
    let mut pts = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > ys[i - 1] && ys[i] > ys[i + 1] && ys[i] > 0.0 {
            pts.push((ts[i].ln(), ys[i].ln()));
        }
    }
    if pts.len() < 5 {
        return Err(Error::Degenerate(format!("only {} envelope points, need at least 5", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("envelope points share one abscissa".into()));
    }
    Ok(sxy / sxx)
}

/// Log-log slope of 1 − flip_probability(j, ·) along its upper envelope.
pub fn asymptotic_exponent(j: usize, t_grid: &[f64]) -> Result<f64> {
    if j < 2 {
        return domain("asymptotic exponent needs j ≥ 2");
    }
    if let Some(&bad) = t_grid.iter().find(|t| !(50.0..=1000.0).contains(*t)) {
        return domain(format!("time {bad} outside [50, 1000]"));
    }
    let ys = t_grid.iter().map(|&t| unflipped_probability(j, t)).collect::<Result<Vec<_>>>()?;
    envelope_slope(t_grid, &ys)
}

/// Which macroscopic observable γ labels the final mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaConvention {
    /// Fraction of flipped spins on the half chain: values 0 and 1.
    #[default]
    HalfChain,
    /// Average over both half chains: values 0 and 1/2.
    TwoSided,
}

/// The incoherent mixture reached after the domino has run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroMixture {
    pub p_down: f64,
    pub p_up: f64,
    pub gamma_down: f64,
    pub gamma_up: f64,
}

pub fn measurement_mixture(c_down: Complex64, c_up: Complex64) -> Result<MacroMixture> {
    measurement_mixture_with(c_down, c_up, GammaConvention::HalfChain)
}

pub fn measurement_mixture_with(
    c_down: Complex64,
    c_up: Complex64,
    convention: GammaConvention,
) -> Result<MacroMixture> {
    let p_down = c_down.norm_sqr();
    let p_up = c_up.norm_sqr();
    if (p_down + p_up - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(p_down + p_up));
    }
    let gamma_up = match convention {
        GammaConvention::HalfChain => 1.0,
        GammaConvention::TwoSided => 0.5,
    };
    Ok(MacroMixture { p_down, p_up, gamma_down: 0.0, gamma_up })
}

impl MacroMixture {
    /// Expectation of γ in the final mixture.
    pub fn gamma_mean(&self) -> f64 {
        self.p_down * self.gamma_down + self.p_up * self.gamma_up
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_identity_at_zero_time() {
        for n in 1..=5 {
            for m in 1..=5 {
                let g = green_finite(n, m, 5, 0.0).unwrap();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!(green_finite(0, 1, 5, 1.0).is_err());
        assert!(green_finite(6, 1, 5, 1.0).is_err());
    }

    #[test]
    fn flip_probability_edges() {
        assert_eq!(flip_probability(1, 3.3).unwrap(), 1.0);
        assert_eq!(flip_probability(2, 0.0).unwrap(), 0.0);
        assert_eq!(flip_probability(5, 0.0).unwrap(), 0.0);
        assert!(flip_probability(0, 1.0).is_err());
    }

    #[test]
    fn constant_series_has_no_envelope() {
        let ts: Vec<f64> = (0..100).map(|k| 50.0 + k as f64).collect();
        let ys = vec![1e-4; 100];
        assert!(matches!(envelope_slope(&ts, &ys), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mixture_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = measurement_mixture(one, zero).unwrap();
        assert_eq!((m.p_down, m.p_up, m.gamma_down, m.gamma_up), (1.0, 0.0, 0.0, 1.0));
        let m = measurement_mixture(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        assert!((m.p_up - 0.64).abs() < 1e-15);
        let two = measurement_mixture_with(one, zero, GammaConvention::TwoSided).unwrap();
        assert_eq!(two.gamma_up, 0.5);
        assert!(measurement_mixture(one, one).is_err());
    }
}
