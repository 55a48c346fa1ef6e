//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use qlab_core::detector::{DetectorConfig, DetectorKernels, MomentumGrid};
use qlab_core::radiating::{ContinuumModes, RadiatingParams, RadiatingSystem};
use qlab_core::Result;

/// Default packets on a coarser momentum grid and a 40-unit horizon.
pub fn detector_kernels() -> Result<DetectorKernels> {
    let grid = Arc::new(MomentumGrid::new(12.0, 400, 16)?);
    let cfg = DetectorConfig { horizon: 40.0, ..DetectorConfig::gaussian_on(grid)? };
    DetectorKernels::new(&cfg)
}

/// The default radiating chain with `m` continuum modes.
pub fn radiating_system(m: usize) -> Result<RadiatingSystem> {
    let p = RadiatingParams::defaults();
    RadiatingSystem::new(p, ContinuumModes::with_default_window(&p, m)?)
}
