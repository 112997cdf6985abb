//! Shared inputs for the criterion benchmarks in `benches/`.

use pbt_core::channels::{amplitude_damping, choi};
use pbt_core::{DensityMatrix, Result};

/// Amplitude-damping Choi pair used by the fidelity benchmarks.
pub fn ad_choi_pair(p0: f64, p1: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    let a = choi(&amplitude_damping(p0)?)?.state().clone();
    let b = choi(&amplitude_damping(p1)?)?.state().clone();
    Ok((a, b))
}
