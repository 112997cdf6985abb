//! Application bounds: single-photon optical resolution, discrete-variable
//! quantum illumination, adaptive metrology and secret-key rates.

use serde::Serialize;

use crate::channels::ChoiMatrix;
use crate::discrimination::{bound_b_near_identity, NEAR_IDENTITY_EPS_MAX};
use crate::error::{check_probability, check_range, Error, Result};
use crate::linalg::{bures_distance, fidelity, ComplexMatrix, DensityMatrix, C64};

/// Leading-order illumination expansions are flagged above this `η` or `b`.
pub const ILLUMINATION_REGIME_MAX: f64 = 0.05;
/// Default finite-difference step for [`qfi_choi`].
pub const QFI_DEFAULT_STEP: f64 = 1e-3;
/// Illumination exact fidelity uses the structured path above this `d`.
pub const STRUCTURED_MIN_D: usize = 9;

// ---------------------------------------------------------------- resolution

/// Two point sources separated by `s` Rayleigh lengths, probed `n` times
/// through a channel of transmissivity `eta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResolutionParams {
    pub eta: f64,
    pub s: f64,
    /// Gaussian overlap `exp(-s²/8)`.
    pub delta_overlap: f64,
    pub n: usize,
}

impl ResolutionParams {
    pub fn new(eta: f64, s: f64, n: usize) -> Result<Self> {
        check_probability("eta", eta)?;
        check_range("s", s, s >= 0.0, ">= 0")?;
        Ok(Self {
            eta,
            s,
            delta_overlap: (-s * s / 8.0).exp(),
            n,
        })
    }
}

/// Choi states of the two truncated channels on qubit input ⊗ qutrit
/// output, output basis `{|0>, |1+>, |1->}`.
pub fn resolution_chois(eta: f64, s: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    let p = ResolutionParams::new(eta, s, 1)?;
    let eta_plus = (1.0 + p.delta_overlap) * eta / 2.0;
    let eta_minus = (1.0 - p.delta_overlap) * eta / 2.0;
    let norm = (1.0 + eta).sqrt();
    let build = |sign: f64| -> Result<DensityMatrix> {
        // index = 3·input + output
        let mut psi = vec![C64::new(0.0, 0.0); 6];
        psi[3] = C64::new(1.0 / norm, 0.0);
        psi[1] = C64::new(eta_plus.sqrt() / norm, 0.0);
        psi[2] = C64::new(sign * eta_minus.sqrt() / norm, 0.0);
        let mut m = ComplexMatrix::outer(&psi).scale((1.0 + eta) / 2.0);
        m.set(0, 0, m.get(0, 0) + (1.0 - eta) / 2.0);
        DensityMatrix::new(m, vec![2, 3])
    };
    Ok((build(1.0)?, build(-1.0)?))
}

/// `1 - η(1 - exp(-s²/8))/2`.
pub fn resolution_fidelity(eta: f64, s: f64) -> Result<f64> {
    let p = ResolutionParams::new(eta, s, 1)?;
    Ok(1.0 - eta * (1.0 - p.delta_overlap) / 2.0)
}

/// Resolution lower bound and its unexpanded counterpart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResolutionBound {
    /// `exp(-2ns sqrt(η))/4`.
    pub value: f64,
    /// `exp(-8n sqrt(ε))/4` with the exact infidelity `ε = η(1 - e^{-s²/8})/2`.
    pub exact_epsilon_value: f64,
    pub epsilon_exact: f64,
    /// Small-separation infidelity `ηs²/16`.
    pub epsilon_approx: f64,
    pub regime_warning: bool,
}

pub fn resolution_bound(n: usize, eta: f64, s: f64) -> Result<ResolutionBound> {
    let p = ResolutionParams::new(eta, s, n)?;
    let epsilon_exact = eta * (1.0 - p.delta_overlap) / 2.0;
    let epsilon_approx = eta * s * s / 16.0;
    let near = bound_b_near_identity(n.max(1), 2, epsilon_exact)?;
    Ok(ResolutionBound {
        value: (-2.0 * n as f64 * s * eta.sqrt()).exp() / 4.0,
        exact_epsilon_value: near.real("exponential").unwrap_or(f64::NAN),
        epsilon_exact,
        epsilon_approx,
        regime_warning: epsilon_approx > NEAR_IDENTITY_EPS_MAX,
    })
}

// -------------------------------------------------------------- illumination

/// `d` signal modes, reflectivity `eta`, `b` thermal photons per mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IlluminationParams {
    pub d: usize,
    pub eta: f64,
    pub b: f64,
    pub n: usize,
}

impl IlluminationParams {
    pub fn new(d: usize, eta: f64, b: f64, n: usize) -> Result<Self> {
        check_range("d", d as f64, d >= 1, "d >= 1")?;
        check_probability("eta", eta)?;
        check_range("b", b, b >= 0.0 && d as f64 * b < 1.0, "b >= 0 and d·b < 1")?;
        Ok(Self { d, eta, b, n })
    }

    /// True when the leading-order expansion is outside its regime.
    pub fn regime_warning(&self) -> bool {
        self.eta > ILLUMINATION_REGIME_MAX || self.b > ILLUMINATION_REGIME_MAX
    }
}

/// Target-absent `σ = ρ_th ⊗ I/(d+1)` and target-present
/// `ρ = (1-η)σ + ηΨ_si`, ordered (signal, idler).
pub fn illumination_chois(d: usize, eta: f64, b: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    IlluminationParams::new(d, eta, b, 1)?;
    let k = d + 1;
    let mut thermal = vec![b; k];
    thermal[0] = 1.0 - d as f64 * b;
    let sigma_diag: Vec<f64> = thermal
        .iter()
        .flat_map(|&t| std::iter::repeat_n(t / k as f64, k))
        .collect();
    let sigma = ComplexMatrix::diag_real(&sigma_diag);
    let psi = DensityMatrix::maximally_entangled(k);
    let rho = &sigma.scale(1.0 - eta) + &psi.matrix().scale(eta);
    Ok((
        DensityMatrix::new(sigma, vec![k, k])?,
        DensityMatrix::new(rho, vec![k, k])?,
    ))
}

/// `F(σ, ρ)` by a full eigensolve of `sqrt(σ) ρ sqrt(σ)`.
pub fn illumination_fidelity_generic(d: usize, eta: f64, b: f64) -> Result<f64> {
    let (sigma, rho) = illumination_chois(d, eta, b)?;
    fidelity(&sigma, &rho)
}

/// `F(σ, ρ)` from the block structure of `sqrt(σ) ρ sqrt(σ)`: with
/// `x = sqrt(1 - bd)` its spectrum is `(1-η)b²/(d+1)²` (`d²` times),
/// `(1-η)x⁴/(d+1)²` (`d` times) and the eigenvalues of `M/(d+1)²`, where the
/// `(d+1)`-dimensional `M` has `M_00 = (1-η)x⁴ + ηx²`, `M_0k = ηx sqrt(b)`,
/// `M_kk = (1-η)b² + ηb` and `M_kl = ηb`.
///
/// The lower block of `M` is `(1-η)b² I + ηb J`, so `M` has `d-1` eigenvalues
/// `(1-η)b²` and two more from its restriction to `span{e_0, Σ_k e_k}`. The
/// smaller of those is taken as `det/λ_max`, which keeps full relative
/// precision when `η, b → 0`.
pub fn illumination_fidelity_structured(d: usize, eta: f64, b: f64) -> Result<f64> {
    IlluminationParams::new(d, eta, b, 1)?;
    Ok(illumination_spectrum(d, eta, b)
        .iter()
        .map(|&(lambda, mult)| mult as f64 * lambda.max(0.0).sqrt())
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

/// Eigenvalues of `sqrt(σ) ρ sqrt(σ)` with multiplicities.
fn illumination_spectrum(d: usize, eta: f64, b: f64) -> [(f64, usize); 5] {
    let k = (d + 1) as f64;
    let kk = k * k;
    let df = d as f64;
    let x2 = 1.0 - df * b;
    let x4 = x2 * x2;
    let thermal = (1.0 - eta) * b * b;

    let a = (1.0 - eta) * x4 + eta * x2;
    let c = thermal + eta * b * df;
    // det of [[a, ηx sqrt(bd)], [ηx sqrt(bd), c]], expanded without cancellation
    let det = (1.0 - eta) * x4 * c + eta * x2 * thermal;
    let trace = a + c;
    let big = (trace + ((a - c) * (a - c) + 4.0 * eta * eta * x2 * b * df).sqrt()) / 2.0;
    let small = if big > 0.0 { det / big } else { 0.0 };

    [
        (thermal / kk, d * d),
        ((1.0 - eta) * x4 / kk, d),
        (thermal / kk, d - 1),
        (big / kk, 1),
        (small / kk, 1),
    ]
}

/// The `(d+1)`-dimensional block `M` of the structured spectrum, for
/// cross-checking [`illumination_fidelity_structured`] by direct eigensolve.
pub fn illumination_m_block(d: usize, eta: f64, b: f64) -> Result<ComplexMatrix> {
    IlluminationParams::new(d, eta, b, 1)?;
    let k = d + 1;
    let x2 = 1.0 - d as f64 * b;
    let x = x2.sqrt();
    Ok(ComplexMatrix::from_fn(k, k, |i, j| {
        let v = match (i, j) {
            (0, 0) => (1.0 - eta) * x2 * x2 + eta * x2,
            (0, _) | (_, 0) => eta * x * b.sqrt(),
            _ if i == j => (1.0 - eta) * b * b + eta * b,
            _ => eta * b,
        };
        C64::new(v, 0.0)
    }))
}

/// Exact fidelity: the generic eigensolve for small `d`, the structured
/// spectrum for `d >= STRUCTURED_MIN_D`.
pub fn illumination_fidelity_exact(d: usize, eta: f64, b: f64) -> Result<f64> {
    if d >= STRUCTURED_MIN_D {
        illumination_fidelity_structured(d, eta, b)
    } else {
        illumination_fidelity_generic(d, eta, b)
    }
}

/// Leading-order fidelity `1 - (ηd + 2b - 2 sqrt(ηdb))/(2(d+1))`.
pub fn illumination_fidelity_approx(d: usize, eta: f64, b: f64) -> Result<f64> {
    IlluminationParams::new(d, eta, b, 1)?;
    let df = d as f64;
    Ok(1.0 - (eta * df + 2.0 * b - 2.0 * (eta * df * b).sqrt()) / (2.0 * (df + 1.0)))
}

/// Leading-order fidelity with the mixed term taken from the exact spectrum:
/// `1 - (sqrt(ηd + b) - sqrt(b))²/(2(d+1))`.
///
/// Agrees with [`illumination_fidelity_approx`] when `b ≪ ηd`; unlike it, the
/// remainder stays below the leading order when `ηd ≈ b`.
pub fn illumination_fidelity_approx_corrected(d: usize, eta: f64, b: f64) -> Result<f64> {
    IlluminationParams::new(d, eta, b, 1)?;
    let df = d as f64;
    let gap = (eta * df + b).sqrt() - b.sqrt();
    Ok(1.0 - gap * gap / (2.0 * (df + 1.0)))
}

/// Adaptive lower bound with the separable-probe reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IlluminationBound {
    /// `exp(-4nd sqrt(η))/4`.
    pub value: f64,
    /// `exp(-nη/(8d))/2`.
    pub separable_reference: f64,
}

pub fn illumination_bound(n: usize, d: usize, eta: f64) -> Result<IlluminationBound> {
    check_range("d", d as f64, d >= 1, "d >= 1")?;
    check_probability("eta", eta)?;
    let (nf, df) = (n as f64, d as f64);
    Ok(IlluminationBound {
        value: (-4.0 * nf * df * eta.sqrt()).exp() / 4.0,
        separable_reference: (-nf * eta / (8.0 * df)).exp() / 2.0,
    })
}

// ---------------------------------------------------------------- metrology

/// Finite-difference QFI with its step-size diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QfiEstimate {
    /// Richardson combination `(4Q(h/2) - Q(h))/3`.
    pub value: f64,
    pub coarse: f64,
    pub fine: f64,
    /// `|Q(h/2) - Q(h)| / |Q(h/2)|`, zero when both vanish.
    pub step_sensitivity: f64,
    pub step: f64,
}

/// QFI of a Choi family at `theta` from `Q(h) = 4 d_B²(ρ_{θ-h/2}, ρ_{θ+h/2})/h²`
/// at `h = dtheta` and `h/2`.
pub fn qfi_choi<F>(choi_at: F, theta: f64, dtheta: f64) -> Result<QfiEstimate>
where
    F: Fn(f64) -> Result<ChoiMatrix>,
{
    check_range("dtheta", dtheta, dtheta > 0.0, "> 0")?;
    let q = |h: f64| -> Result<f64> {
        let lo = choi_at(theta - h / 2.0)?;
        let hi = choi_at(theta + h / 2.0)?;
        let db = bures_distance(lo.state(), hi.state())?;
        let v = 4.0 * db * db / (h * h);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    };
    let coarse = q(dtheta)?;
    let fine = q(dtheta / 2.0)?;
    let step_sensitivity = if fine == 0.0 && coarse == 0.0 {
        0.0
    } else {
        (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE)
    };
    Ok(QfiEstimate {
        value: ((4.0 * fine - coarse) / 3.0).max(0.0),
        coarse,
        fine,
        step_sensitivity,
        step: dtheta,
    })
}

/// `n²·QFI` and the matching Cramér–Rao variance floor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetrologyBound {
    pub qfi_total: f64,
    pub variance_floor: f64,
}

pub fn metrology_bound(n: usize, qfi_choi_value: f64) -> Result<MetrologyBound> {
    check_range("qfi", qfi_choi_value, qfi_choi_value >= 0.0, ">= 0")?;
    let qfi_total = (n as f64).powi(2) * qfi_choi_value;
    let variance_floor = if qfi_total > 0.0 {
        1.0 / qfi_total
    } else {
        f64::INFINITY
    };
    Ok(MetrologyBound {
        qfi_total,
        variance_floor,
    })
}

// ---------------------------------------------------------------- key rates

/// Entanglement measure whose value on the Choi state is supplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementMeasure {
    /// Relative entropy of entanglement.
    Ree,
    /// Squashed entanglement.
    Se,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KeyRateParams {
    pub d: usize,
    /// Measure value on the channel's Choi state, in bits.
    pub e_r: f64,
    pub measure: EntanglementMeasure,
    pub n: usize,
    pub epsilon: f64,
    /// Private-state size constant: `log₂ d_key ≤ c n`.
    pub c: f64,
}

impl KeyRateParams {
    pub fn new(
        d: usize,
        e_r: f64,
        measure: EntanglementMeasure,
        n: usize,
        epsilon: f64,
    ) -> Result<Self> {
        let p = Self {
            d,
            e_r,
            measure,
            n,
            epsilon,
            c: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        self.c = c;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        check_range("d", self.d as f64, self.d >= 2, "d >= 2")?;
        check_range("e_r", self.e_r, self.e_r >= 0.0, ">= 0")?;
        check_range("n", self.n as f64, self.n >= 1, "n >= 1")?;
        check_range("epsilon", self.epsilon, self.epsilon >= 0.0, ">= 0")?;
        check_range("c", self.c, self.c >= 0.0, ">= 0")
    }
}

/// Binary entropy in bits on `[0, 1]`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiniteKeyRate {
    /// `+∞` when invalid.
    pub value: f64,
    pub gamma: f64,
    pub valid: bool,
}

/// `M e_r + [g(γ) c n + h(γ)]/n` with `γ = nδ + ε`; `(g, h)` is
/// `(4γ, 2H₂(γ))` for REE and `(16 sqrt(γ), 2H₂(2 sqrt(γ)))` for SE.
pub fn key_rate_bound_finite(
    params: &KeyRateParams,
    m: usize,
    delta: f64,
) -> Result<FiniteKeyRate> {
    params.validate()?;
    check_range("delta", delta, delta >= 0.0, ">= 0")?;
    let nf = params.n as f64;
    let gamma = nf * delta + params.epsilon;
    let (g, h_arg) = match params.measure {
        EntanglementMeasure::Ree => (4.0 * gamma, gamma),
        EntanglementMeasure::Se => (16.0 * gamma.sqrt(), 2.0 * gamma.sqrt()),
    };
    if h_arg > 1.0 {
        return Ok(FiniteKeyRate {
            value: f64::INFINITY,
            gamma,
            valid: false,
        });
    }
    let h = 2.0 * binary_entropy(h_arg);
    Ok(FiniteKeyRate {
        value: m as f64 * params.e_r + (g * params.c * nf + h) / nf,
        gamma,
        valid: true,
    })
}

fn key_rate_correction(eps: f64) -> f64 {
    let tail = if eps > 0.0 { eps * eps.log2() } else { 0.0 };
    (1.0 + eps) * (1.0 + eps).log2() - tail
}

/// `M e_r + (2d(d-1)/M) log₂d + f(d(d-1)/M)` with
/// `f(ε) = (1+ε)log₂(1+ε) - ε log₂ε`; `M` may be fractional.
pub fn key_rate_bound_asymptotic(d: usize, e_r: f64, m: f64) -> Result<f64> {
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    check_range("e_r", e_r, e_r >= 0.0, ">= 0")?;
    check_range("M", m, m >= 2.0, "M >= 2")?;
    let dd = (d * (d - 1)) as f64;
    Ok(m * e_r + 2.0 * dd / m * (d as f64).log2() + key_rate_correction(dd / m))
}

/// `M̃ = sqrt(2d(d-1) log₂d / e_r)`; `+∞` for `e_r = 0`.
pub fn key_rate_m_tilde(d: usize, e_r: f64) -> Result<f64> {
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    check_range("e_r", e_r, e_r >= 0.0, ">= 0")?;
    Ok((2.0 * (d * (d - 1)) as f64 * (d as f64).log2() / e_r).sqrt())
}

/// Grid minimiser of the asymptotic bound; ties go to the smallest `M`.
pub fn minimize_key_rate_over_m(d: usize, e_r: f64, grid: &[usize]) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for &m in grid {
        let v = key_rate_bound_asymptotic(d, e_r, m as f64)?;
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((m, v));
        }
    }
    best.ok_or(Error::EmptyGrid)
}

/// `2..=max(64, 4⌈M̃⌉)`, the default search range for the minimiser.
pub fn key_rate_default_grid(d: usize, e_r: f64) -> Result<Vec<usize>> {
    let tilde = key_rate_m_tilde(d, e_r)?;
    let upper = if tilde.is_finite() {
        (4.0 * tilde.ceil()).min(1e7) as usize
    } else {
        0
    };
    Ok((2..=upper.max(64)).collect())
}
