//! Brute-force qubit port-based teleportation.
//!
//! Builds the signal states `σ^i`, their sum `ρ`, and the square-root POVM
//! explicitly on the `2^{M+1}`-dimensional space of Alice's qubits, then runs
//! the protocol on `Φ_CD ⊗ Φ_{A_1B_1} ⊗ … ⊗ Φ_{A_MB_M}` to read off the channel
//! `C → B_i`. Nothing here uses the closed forms of [`crate::pbt`].
//!
//! Qubit order on Alice's side is `[C, A_1, …, A_M]` with `C` the most
//! significant bit; Bob's side is `[D, B_1, …, B_M]` in the same layout.

use crate::channels::ChoiMatrix;
use crate::error::{check_range, Result};
use crate::linalg::{eig_hermitian, partial_trace_matrix, ComplexMatrix, C64, NUM_TOL};
use crate::pbt::isotropic_choi_qubit;

/// Largest supported port count (Alice's space is then 512-dimensional).
pub const M_MAX: usize = 8;

/// Eigenvalues of `ρ` below this are exact zeros of the representation.
const SUPPORT_TOL: f64 = 1e-10;

/// Signal states, their sum and the square-root measurement.
#[derive(Clone, Debug)]
pub struct PbtEnsemble {
    pub ports: usize,
    pub sigma: Vec<ComplexMatrix>,
    pub rho_sum: ComplexMatrix,
    pub povm: Vec<ComplexMatrix>,
    /// Number of eigenvalues of `ρ` below the support threshold.
    pub null_dimension: usize,
}

impl PbtEnsemble {
    /// `max |Σ Π^i - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.rho_sum.dim();
        let mut sum = ComplexMatrix::zeros(n);
        for p in &self.povm {
            sum = &sum + p;
        }
        sum.max_abs_diff(&ComplexMatrix::identity(n))
    }

    /// Smallest eigenvalue over all POVM elements.
    pub fn min_povm_eigenvalue(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for p in &self.povm {
            let e = eig_hermitian(&p.hermitian_symmetrized())?;
            min = min.min(*e.values.last().unwrap_or(&0.0));
        }
        Ok(min)
    }
}

impl ComplexMatrix {
    /// `(A + A^†)/2`.
    pub(crate) fn hermitian_symmetrized(&self) -> ComplexMatrix {
        (self + &self.adjoint()).scale(0.5)
    }
}

fn check_oracle_ports(ports: usize) -> Result<()> {
    check_range(
        "M",
        ports as f64,
        (2..=M_MAX).contains(&ports),
        "2 <= M <= 8",
    )
}

/// Bit position of `A_i` (1-based) in an `(M+1)`-qubit index.
fn port_bit(ports: usize, i: usize) -> usize {
    ports - i
}

/// `σ^i = 2^{-(M-1)} |Φ><Φ|_{A_i C} ⊗ I_{rest}` with `|Φ> = (|00>+|11>)/√2`.
fn signal_state(ports: usize, i: usize) -> ComplexMatrix {
    let n = 1usize << (ports + 1);
    let c_bit = ports;
    let a_bit = port_bit(ports, i);
    let pair_mask = (1usize << c_bit) | (1usize << a_bit);
    let weight = 2f64.powi(-(ports as i32));
    let paired = |x: usize| ((x >> c_bit) & 1) == ((x >> a_bit) & 1);
    ComplexMatrix::from_fn(n, n, |x, y| {
        if (x & !pair_mask) == (y & !pair_mask) && paired(x) && paired(y) {
            C64::new(weight, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Constructs `σ^i`, `ρ` and `Π^i = ρ^{-1/2}σ^iρ^{-1/2} + (I - P_ρ)/M`, with
/// the inverse square root and the support projector `P_ρ` taken on the
/// support of `ρ`.
pub fn build_ensemble(ports: usize) -> Result<PbtEnsemble> {
    check_oracle_ports(ports)?;
    let n = 1usize << (ports + 1);
    let sigma: Vec<ComplexMatrix> = (1..=ports).map(|i| signal_state(ports, i)).collect();
    let mut rho_sum = ComplexMatrix::zeros(n);
    for s in &sigma {
        rho_sum = &rho_sum + s;
    }

    let eig = eig_hermitian(&rho_sum)?;
    let null_dimension = eig.values.iter().filter(|&&x| x < SUPPORT_TOL).count();
    let inv_sqrt = eig.map(|x| if x < SUPPORT_TOL { 0.0 } else { 1.0 / x.sqrt() });
    let kernel = eig.map(|x| if x < SUPPORT_TOL { 1.0 } else { 0.0 });
    let completion = kernel.scale(1.0 / ports as f64);

    let povm = sigma
        .iter()
        .map(|s| &(&(&inv_sqrt * s) * &inv_sqrt) + &completion)
        .collect();

    Ok(PbtEnsemble {
        ports,
        sigma,
        rho_sum,
        povm,
        null_dimension,
    })
}

/// Amplitudes of `Φ_CD ⊗ Φ_{A_1B_1} ⊗ …`, reshaped to a matrix with rows over
/// `[C, A_1..A_M]` and columns over `[D, B_1..B_M]`.
///
/// The state is first written in pair order `(C D)(A_1 B_1)…` and then
/// permuted bit by bit.
fn resource_matrix(ports: usize) -> ComplexMatrix {
    let pairs = ports + 1;
    let n = 1usize << pairs;
    let amp = 2f64.powf(-(pairs as f64) / 2.0);
    let mut psi = vec![C64::new(0.0, 0.0); n * n];
    for pair_index in 0..(n * n) {
        // Pair `j` occupies bits (2(pairs-1-j)+1, 2(pairs-1-j)) as (left, right).
        let mut nonzero = true;
        let mut row = 0usize;
        let mut col = 0usize;
        for j in 0..pairs {
            let shift = 2 * (pairs - 1 - j);
            let left = (pair_index >> (shift + 1)) & 1;
            let right = (pair_index >> shift) & 1;
            if left != right {
                nonzero = false;
                break;
            }
            row |= left << (pairs - 1 - j);
            col |= right << (pairs - 1 - j);
        }
        if nonzero {
            psi[row * n + col] = C64::new(amp, 0.0);
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| psi[r * n + c])
}

/// Full diagnostic output of one oracle run.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub ports: usize,
    /// `Tr ρ_DB^{(i)}` for each port.
    pub outcome_probabilities: Vec<f64>,
    pub completeness_residual: f64,
    pub null_dimension: usize,
    pub min_povm_eigenvalue: f64,
    /// Channel Choi over `[D, B_out]`, summed over outcomes.
    pub choi: ChoiMatrix,
    /// `4 M <01|ρ^{(1)}|01>` from the first-port contribution alone.
    pub xi_port: f64,
    /// `4 <01|ρ|01>` from the full Choi matrix.
    pub xi_fit: f64,
    /// Max entry deviation of `choi` from the isotropic Choi at `xi_fit`.
    pub isotropy_residual: f64,
    /// Max entry deviation of any port's contribution from port 1's.
    pub port_asymmetry: f64,
}

/// Runs the protocol for `M` ports and collects all checks.
pub fn oracle_report(ports: usize) -> Result<OracleReport> {
    let ensemble = build_ensemble(ports)?;
    let psi = resource_matrix(ports);
    let psi_dag = psi.adjoint();
    let dims = vec![2usize; ports + 1];

    let mut contributions = Vec::with_capacity(ports);
    let mut outcome_probabilities = Vec::with_capacity(ports);
    for (idx, pi) in ensemble.povm.iter().enumerate() {
        // ρ_DB^{(i)} = Tr_CA[(Π^i ⊗ I)|ψ><ψ|] = (Ψ^† Π^i Ψ)^T
        let post = (&(&psi_dag * pi) * &psi).transpose();
        outcome_probabilities.push(post.trace().re);
        // Keeping D and B_i relabels port i as the output.
        contributions.push(partial_trace_matrix(&post, &dims, &[0, idx + 1])?);
    }

    let mut total = ComplexMatrix::zeros(4);
    for c in &contributions {
        total = &total + c;
    }
    let port_asymmetry = contributions
        .iter()
        .map(|c| c.max_abs_diff(&contributions[0]))
        .fold(0.0, f64::max);
    let choi = ChoiMatrix::from_matrix(total.hermitian_symmetrized(), 2, 2)?;

    let xi_port = 4.0 * ports as f64 * contributions[0].get(1, 1).re;
    let xi_fit = 4.0 * choi.matrix().get(1, 1).re;
    let isotropy_residual = choi
        .matrix()
        .max_abs_diff(isotropic_choi_qubit(xi_fit.clamp(0.0, 1.0))?.matrix());

    Ok(OracleReport {
        ports,
        outcome_probabilities,
        completeness_residual: ensemble.completeness_residual(),
        null_dimension: ensemble.null_dimension,
        min_povm_eigenvalue: ensemble.min_povm_eigenvalue()?,
        choi,
        xi_port,
        xi_fit,
        isotropy_residual,
        port_asymmetry,
    })
}

/// Choi matrix of the brute-force PBT channel.
pub fn oracle_channel_choi(ports: usize) -> Result<ChoiMatrix> {
    Ok(oracle_report(ports)?.choi)
}

/// `ξ_M` read from the first port's `|01><01|` entry; port symmetry supplies
/// the factor `M` and is checked in [`oracle_report`].
pub fn oracle_xi(ports: usize) -> Result<f64> {
    Ok(oracle_report(ports)?.xi_port)
}

/// Whether a report meets every oracle invariant at `NUM_TOL`.
pub fn report_is_consistent(r: &OracleReport) -> bool {
    let uniform = r
        .outcome_probabilities
        .iter()
        .all(|p| (p - 1.0 / r.ports as f64).abs() < NUM_TOL);
    uniform
        && r.completeness_residual < NUM_TOL
        && r.min_povm_eigenvalue > -crate::linalg::PSD_TOL
        && r.port_asymmetry < NUM_TOL
        && r.isotropy_residual < NUM_TOL
}
