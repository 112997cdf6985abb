//! Closed-form quantities of qubit port-based teleportation.
//!
//! The `M`-port qubit protocol induces a depolarizing channel with
//! probability `ξ_M`. From `ξ_M` follow the entanglement fidelity
//! `f_e = 1 - 3ξ_M/4`, the simulation error `δ_M = 3ξ_M/2` and the Choi matrix
//! of any qubit channel composed with the protocol.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::channels::{apply_to_subsystem, ChoiMatrix, KrausChannel};
use crate::error::{check_ports, check_probability, check_range, Error, Result};
use crate::linalg::{abs_hermitian, partial_trace_matrix, trace_norm, ComplexMatrix, NUM_TOL};

/// Above this port count binomials switch from exact integers to log-gamma.
const EXACT_BINOMIAL_MAX: usize = 50;

/// How a [`PbtQuantities`] bundle was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    UpperBound,
    Oracle,
}

/// Per-`(M, d)` PBT figures of merit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PbtQuantities {
    pub ports: usize,
    pub d: usize,
    /// Depolarizing probability; only known for qubits.
    pub xi: Option<f64>,
    pub f_e: f64,
    pub delta: f64,
    pub provenance: Provenance,
}

impl PbtQuantities {
    /// Exact qubit values.
    pub fn qubit(ports: usize) -> Result<Self> {
        Self::from_qubit_xi(ports, xi(ports)?, Provenance::ClosedForm)
    }

    /// Qubit bundle built from an externally obtained `ξ`.
    pub fn from_qubit_xi(ports: usize, xi: f64, provenance: Provenance) -> Result<Self> {
        check_ports(ports)?;
        Ok(Self {
            ports,
            d: 2,
            xi: Some(xi),
            f_e: 1.0 - 0.75 * xi,
            delta: 1.5 * xi,
            provenance,
        })
    }

    /// Generic-dimension bundle from `δ ≤ 2d(d-1)/M`; `f_e` is the matching
    /// lower bound `1 - d(d-1)/M`.
    pub fn upper_bound(ports: usize, d: usize) -> Result<Self> {
        let delta = delta_upper(ports, d)?;
        Ok(Self {
            ports,
            d,
            xi: None,
            f_e: 1.0 - delta / 2.0,
            delta,
            provenance: Provenance::UpperBound,
        })
    }

    /// Exact values for qubits, the upper bound otherwise.
    pub fn best(ports: usize, d: usize) -> Result<Self> {
        if d == 2 {
            Self::qubit(ports)
        } else {
            Self::upper_bound(ports, d)
        }
    }
}

fn binomial_exact(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `C(M, k) · 2^{shift - M}`, kept finite for large `M`.
fn scaled_binomial(m: usize, k: usize, shift: i32) -> f64 {
    if m <= EXACT_BINOMIAL_MAX {
        binomial_exact(m, k) * 2f64.powi(shift - m as i32)
    } else {
        (ln_binomial(m, k) + (shift as f64 - m as f64) * std::f64::consts::LN_2).exp()
    }
}

/// PBT number `ξ_M` of the `M`-port qubit protocol.
///
/// The sum runs over `k = (M-1)/2 - s = 0, …, ⌊(M-1)/2⌋` so that `2s+1 = M-2k`.
/// With `a = M+2` and `b = M-2k` the summand's ratio
/// `[a - sqrt(a²-b²)]/(a²-b²)` is rewritten as `b²/[(a²-b²)(a+sqrt(a²-b²))]`
/// to avoid cancellation, where `a²-b² = 4(M-k+1)(k+1)`.
pub fn xi(m: usize) -> Result<f64> {
    check_ports(m)?;
    let mf = m as f64;
    let mut total = (mf + 2.0) * scaled_binomial(m, 0, 1) / 3.0;
    for k in 0..=(m - 1) / 2 {
        let a = mf + 2.0;
        let b = (m - 2 * k) as f64;
        let gap = 4.0 * (mf - k as f64 + 1.0) * (k as f64 + 1.0);
        let ratio = b * b / (gap * (a + gap.sqrt()));
        // s(s+1) = (b² - 1)/4
        let spin = (b * b - 1.0) / 4.0;
        total += spin * scaled_binomial(m, k, 4) * ratio / 3.0;
    }
    Ok(total)
}

/// Entanglement fidelity of qubit PBT from its own binomial sum over
/// `k = 0..=M`, independent of [`xi`].
pub fn entanglement_fidelity_qubit(m: usize) -> Result<f64> {
    check_ports(m)?;
    let mf = m as f64;
    let mut total = 0.0;
    for k in 0..=m {
        let kf = k as f64;
        let u = (mf - 2.0 * kf - 1.0) / (kf + 1.0).sqrt()
            + (mf - 2.0 * kf + 1.0) / (mf - kf + 1.0).sqrt();
        total += u * u * scaled_binomial(m, k, -3);
    }
    Ok(total)
}

/// Exact qubit simulation error `δ_M = 3ξ_M/2`.
pub fn delta_exact_qubit(m: usize) -> Result<f64> {
    Ok(1.5 * xi(m)?)
}

/// Dimension-generic upper bound `2d(d-1)/M` on the simulation error.
pub fn delta_upper(m: usize, d: usize) -> Result<f64> {
    check_ports(m)?;
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    Ok(2.0 * (d * (d - 1)) as f64 / m as f64)
}

/// Choi matrix of a qubit depolarizing channel with probability `ξ`:
/// diagonal `(1/2 - ξ/4, ξ/4, ξ/4, 1/2 - ξ/4)` and corners `1/2 - ξ/2`.
pub fn isotropic_choi_qubit(xi: f64) -> Result<ChoiMatrix> {
    check_probability("xi", xi)?;
    let a = 0.5 - xi / 4.0;
    let b = xi / 4.0;
    let c = 0.5 - xi / 2.0;
    let m = ComplexMatrix::from_real_row_major(
        4,
        4,
        &[
            a, 0.0, 0.0, c, //
            0.0, b, 0.0, 0.0, //
            0.0, 0.0, b, 0.0, //
            c, 0.0, 0.0, a,
        ],
    )?;
    ChoiMatrix::from_matrix(m, 2, 2)
}

/// Choi matrix of the `M`-port qubit PBT channel.
pub fn pbt_choi_qubit(m: usize) -> Result<ChoiMatrix> {
    isotropic_choi_qubit(xi(m)?)
}

/// Choi matrix of `E ∘ Γ_M` for a qubit-input channel `E`.
pub fn simulate_channel_choi(ch: &KrausChannel, m: usize) -> Result<ChoiMatrix> {
    if ch.d_in() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ch.d_in(),
        });
    }
    let pbt = pbt_choi_qubit(m)?;
    ChoiMatrix::new(apply_to_subsystem(ch, pbt.state(), 1)?)
}

/// Diamond distance of two channels when it reduces to a Choi trace norm.
///
/// With `J = ρ_a - ρ_b`, returns `||J||_1` if `Tr_2|J|` is proportional to the
/// identity within `NUM_TOL`, and `None` otherwise.
pub fn diamond_via_choi_scalar_check(
    choi_a: &ChoiMatrix,
    choi_b: &ChoiMatrix,
) -> Result<Option<f64>> {
    if choi_a.state().dims() != choi_b.state().dims() {
        return Err(Error::DimensionMismatch {
            expected: choi_a.state().dim(),
            found: choi_b.state().dim(),
        });
    }
    let j = choi_a.matrix() - choi_b.matrix();
    let phi = partial_trace_matrix(&abs_hermitian(&j)?, choi_a.state().dims(), &[0])?;
    if scalar_residual(&phi) > NUM_TOL {
        return Ok(None);
    }
    Ok(Some(trace_norm(&j)?))
}

/// Largest entrywise deviation of `A` from `(Tr A / n) I`.
pub(crate) fn scalar_residual(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mean = a.trace() / n as f64;
    let target = ComplexMatrix::identity(n).scale_complex(mean);
    a.max_abs_diff(&target)
}

/// Simulation error of qubit amplitude damping, `ξ_M((1-p)/2 + sqrt(1-p))`.
pub fn delta_ad(m: usize, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(xi(m)? * ((1.0 - p) / 2.0 + (1.0 - p).sqrt()))
}
