//! The detection operator W_γ on a finite span of incident packets.

use num_complex::Complex64;

use super::observables::detection_probability_time;
use super::packet::{amplitude_free, amplitude_free_series, RadialPacket};
use super::series::ComplexTimeSeries;
use super::solve::{march, DetectorKernels};
use crate::dense::{eigh, DenseOperator};
use crate::error::{Error, Result};

/// W_γ restricted to span{ψ_i}.
#[derive(Debug, Clone)]
pub struct PovmReport {
    pub gamma: f64,
    /// ⟨ψ_i|ψ_j⟩.
    pub gram: DenseOperator,
    /// ⟨ψ_i|W_γ|ψ_j⟩ by polarization.
    pub matrix: DenseOperator,
    /// G^{−1/2} M G^{−1/2}: the compression of W_γ in an orthonormal basis.
    pub compressed: DenseOperator,
    pub eigenvalues: Vec<f64>,
    /// ‖W² − W‖_F of the compression.
    pub idempotency_defect: f64,
    /// ‖M − M†‖_F.
    pub hermiticity_residual: f64,
}

const PHASES: [Complex64; 4] =
    [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];

/// w(χ) for the non-normalized χ whose free amplitude is `f0`. F⁰ is linear
/// in χ, so the sources of combinations are combined series.
fn w_of_source(base: &DetectorKernels, f0: ComplexTimeSeries) -> Result<f64> {
    let k = base.with_source(f0)?;
    Ok(detection_probability_time(&k, &march(&k)))
}

fn combine(a: &ComplexTimeSeries, alpha: Complex64, b: &ComplexTimeSeries) -> ComplexTimeSeries {
    ComplexTimeSeries { dt: a.dt, values: a.values.iter().zip(&b.values).map(|(x, y)| alpha * x + y).collect() }
}

/// Matrix of W_γ from (1/4) Σ_{α = ±1, ±i} α w(αψ_i + ψ_j).
pub fn povm_matrix(
    phi: &RadialPacket,
    basis: &[RadialPacket],
    gamma: f64,
    dt: f64,
    horizon: f64,
) -> Result<PovmReport> {
    if basis.is_empty() {
        return Err(Error::Degenerate("empty packet span".into()));
    }
    if basis.iter().any(|p| !p.same_grid(phi)) {
        return Err(Error::GridMismatch);
    }
    let n = basis.len();
    let gram = DenseOperator::from_fn(n, |i, j| amplitude_free(&basis[i], &basis[j], 0.0).expect("grids checked"));
    let len = (horizon / dt).round() as usize + 1;
    let g = amplitude_free_series(phi, phi, dt, len)?;
    let sources = basis.iter().map(|psi| amplitude_free_series(phi, psi, dt, len)).collect::<Result<Vec<_>>>()?;
    let base = DetectorKernels::from_series(gamma, g, sources[0].clone())?;

    let mut matrix = DenseOperator::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for alpha in PHASES {
                acc += alpha * w_of_source(&base, combine(&sources[i], alpha, &sources[j]))?;
            }
            matrix.set(i, j, acc / 4.0);
        }
    }
    let hermiticity_residual = (&matrix - &matrix.adjoint()).frobenius_norm();
    let sym = &(&matrix + &matrix.adjoint()) * 0.5;

    let ge = eigh(&(&(&gram + &gram.adjoint()) * 0.5))?;
    if ge.values.iter().any(|&l| l < 1e-10) {
        return Err(Error::Degenerate("packets are numerically linearly dependent".into()));
    }
    let inv_sqrt = DenseOperator::from_fn(n, |i, j| {
        (0..n).map(|k| ge.vectors.get(i, k) * ge.vectors.get(j, k).conj() / ge.values[k].sqrt()).sum()
    });
    let compressed = inv_sqrt.matmul(&sym)?.matmul(&inv_sqrt)?;
    let compressed = &(&compressed + &compressed.adjoint()) * 0.5;
    let eigenvalues = eigh(&compressed)?.values;
    let idempotency_defect = (&compressed.matmul(&compressed)? - &compressed).frobenius_norm();
    Ok(PovmReport { gamma, gram, matrix, compressed, eigenvalues, idempotency_defect, hermiticity_residual })
}

/// Largest γ in `gammas` for which every eigenvalue of the compressed W_γ
/// stays below 1 − 1e−3. Inadmissible couplings are skipped.
pub fn empirical_gamma0(
    phi: &RadialPacket,
    basis: &[RadialPacket],
    dt: f64,
    horizon: f64,
    gammas: &[f64],
) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for &gamma in gammas {
        match povm_matrix(phi, basis, gamma, dt, horizon) {
            Ok(r) if r.eigenvalues.iter().all(|&l| l < 1.0 - 1e-3) => {
                best = Some(best.map_or(gamma, |b: f64| b.max(gamma)));
            }
            Ok(_) | Err(Error::Inadmissible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}
