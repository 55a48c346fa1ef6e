//! Particle detection by the domino chain: a free particle couples to the
//! first chain spin through a packet φ; the returning amplitude F obeys a
//! convolution equation solved here three ways, and the detection
//! probability defines the operator W_γ.

mod observables;
mod packet;
mod povm;
mod series;
mod solve;

pub use observables::{
    detection_from_kernels, detection_probability, detection_probability_spectral, detection_probability_time,
    occupation_series, Detection, OccupationSampler, OccupationSnapshot, CHAIN_TAIL_TOL, NONTRIVIAL_THRESHOLD,
};
pub use packet::{
    amplitude_free, amplitude_free_lambda, amplitude_free_series, fhat_radial, ghat_radial, semicircle_kernel,
    MomentumGrid, PacketShape, RadialPacket,
};
pub use povm::{empirical_gamma0, povm_matrix, PovmReport};
pub use series::ComplexTimeSeries;
pub use solve::{
    f1_samples, f_kernel, g_l1_norm, march, neumann, solve_fourier, solve_volterra, DetectorConfig, DetectorKernels,
    FourierSolution, VolterraSolution, MIN_DENOMINATOR,
};

use std::sync::Arc;

use crate::error::Result;

impl DetectorConfig {
    /// Gaussian φ (width 1.25, centred) and ψ (width 1, centred at p = 0.8)
    /// with γ = 0.5, dt = 0.02, T = 200.
    pub fn default_gaussian() -> Result<Self> {
        Self::gaussian_on(MomentumGrid::shared_default())
    }

    pub fn gaussian_on(grid: Arc<MomentumGrid>) -> Result<Self> {
        Ok(DetectorConfig {
            gamma: Self::DEFAULT_GAMMA,
            phi: RadialPacket::gaussian(grid.clone(), Self::DEFAULT_PHI_WIDTH, 0.0)?,
            psi: RadialPacket::gaussian(grid, Self::DEFAULT_PSI_WIDTH, Self::DEFAULT_PSI_CENTER)?,
            dt: Self::DEFAULT_DT,
            horizon: Self::DEFAULT_HORIZON,
        })
    }
}

/// Four linearly independent Gaussian incident packets for the POVM span.
pub fn default_povm_basis(grid: &Arc<MomentumGrid>) -> Result<Vec<RadialPacket>> {
    [(1.0, 0.8), (0.7, 0.0), (1.5, 1.2), (0.9, 2.0)]
        .iter()
        .map(|&(w, c)| RadialPacket::gaussian(grid.clone(), w, c))
        .collect()
}
