//! Lower bounds on the error probability of adaptive discrimination between
//! two channels, from simulating each use with `M`-port teleportation.
//!
//! After `n` uses the error probability is at least
//! `B = (1 - nδ - D)/2`, where `δ` is the simulation error and `D` is any
//! upper bound on the trace distance between `ρ_0^{⊗nM}` and `ρ_1^{⊗nM}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{check_probability, check_range, Error, Result};
use crate::linalg::{fidelity, relative_entropy, trace_norm, DensityMatrix};
use crate::pbt::{delta_ad, PbtQuantities};

/// Infidelity above which the near-identity expansion is flagged.
pub const NEAR_IDENTITY_EPS_MAX: f64 = 0.01;

/// A parameter recorded alongside a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
    Flag(bool),
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Flag(v)
    }
}

/// A named lower bound with every input that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    /// Clamped to `[0, 1/2]`; the unclamped value is `params["raw"]`.
    pub value: f64,
    pub params: BTreeMap<String, ParamValue>,
    /// False when the raw value fell outside `[0, 1/2]`.
    pub valid: bool,
}

impl BoundReport {
    /// Clamps `raw` into `[0, 1/2]` and records it.
    pub fn lower_bound(name: &str, raw: f64) -> Self {
        let valid = raw.is_finite() && (0.0..=0.5).contains(&raw);
        let value = if raw.is_nan() {
            0.0
        } else {
            raw.clamp(0.0, 0.5)
        };
        let mut params = BTreeMap::new();
        params.insert("raw".to_string(), ParamValue::Real(raw));
        Self {
            name: name.to_string(),
            value,
            params,
            valid,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn raw(&self) -> f64 {
        match self.params.get("raw") {
            Some(ParamValue::Real(x)) => *x,
            _ => self.value,
        }
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.params.get(key)? {
            ParamValue::Real(x) => Some(*x),
            ParamValue::Int(x) => Some(*x as f64),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.params.get(key)? {
            ParamValue::Int(x) => Some(*x),
            _ => None,
        }
    }
}

fn check_counts(n: usize, m: usize) -> Result<()> {
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    check_range("M", m as f64, m >= 1, "M >= 1")
}

/// `sqrt(1 - F^{2nM})`, with the power taken in the log domain.
pub fn d_upper_fuchs(f: f64, n: usize, m: usize) -> Result<f64> {
    check_probability("F", f)?;
    check_counts(n, m)?;
    let exponent = 2.0 * n as f64 * m as f64;
    Ok((-(exponent * f.ln()).exp_m1()).max(0.0).sqrt())
}

/// `nM ||ρ_0 - ρ_1||_1`, not capped at 1.
pub fn d_upper_subadd(choi_dist: f64, n: usize, m: usize) -> Result<f64> {
    check_range("choi_dist", choi_dist, choi_dist >= 0.0, ">= 0")?;
    check_counts(n, m)?;
    Ok(n as f64 * m as f64 * choi_dist)
}

/// `sqrt(nM ln(√2) S_min)` with `S_min` in bits; `+∞` passes through.
pub fn d_upper_pinsker(s_min: f64, n: usize, m: usize) -> Result<f64> {
    if s_min == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    check_range("s_min", s_min, s_min >= 0.0, ">= 0")?;
    check_counts(n, m)?;
    Ok((n as f64 * m as f64 * std::f64::consts::SQRT_2.ln() * s_min).sqrt())
}

/// Which trace-distance upper bound produced `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Fuchs,
    Subadditivity,
    Pinsker,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Fuchs => "fuchs",
            Estimator::Subadditivity => "subadditivity",
            Estimator::Pinsker => "pinsker",
        }
    }
}

/// Single-copy Choi data from which the `nM`-copy estimators are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EstimatorInputs {
    pub fidelity: Option<f64>,
    pub choi_trace_norm: Option<f64>,
    /// `min(S(ρ_0||ρ_1), S(ρ_1||ρ_0))` in bits, possibly `+∞`.
    pub rel_entropy_min: Option<f64>,
}

impl EstimatorInputs {
    pub fn fuchs_only(f: f64) -> Self {
        Self {
            fidelity: Some(f),
            ..Self::default()
        }
    }

    /// Evaluates all three single-copy quantities on a Choi pair.
    pub fn from_chois(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Self> {
        let s01 = relative_entropy(rho0, rho1)?;
        let s10 = relative_entropy(rho1, rho0)?;
        Ok(Self {
            fidelity: Some(fidelity(rho0, rho1)?),
            choi_trace_norm: Some(trace_norm(&(rho0.matrix() - rho1.matrix()))?),
            rel_entropy_min: Some(s01.min(s10)),
        })
    }

    /// Smallest available estimate of `D` at `(n, M)`. Ties keep the earlier
    /// estimator in the order Fuchs, subadditivity, Pinsker.
    pub fn best(&self, n: usize, m: usize) -> Result<(f64, Estimator)> {
        let mut candidates = Vec::with_capacity(3);
        if let Some(f) = self.fidelity {
            candidates.push((d_upper_fuchs(f, n, m)?, Estimator::Fuchs));
        }
        if let Some(t) = self.choi_trace_norm {
            candidates.push((d_upper_subadd(t, n, m)?, Estimator::Subadditivity));
        }
        if let Some(s) = self.rel_entropy_min {
            candidates.push((d_upper_pinsker(s, n, m)?, Estimator::Pinsker));
        }
        candidates
            .into_iter()
            .reduce(|best, c| if c.0 < best.0 { c } else { best })
            .ok_or(Error::OutOfRange {
                name: "estimator inputs",
                value: 0.0,
                expected: "at least one estimator",
            })
    }
}

/// `B = (1 - nδ - D)/2`.
pub fn bound_b(n: usize, m: usize, delta: f64, d_estimate: f64) -> BoundReport {
    BoundReport::lower_bound("B", (1.0 - n as f64 * delta - d_estimate) / 2.0)
        .with("n", n)
        .with("M", m)
        .with("delta", delta)
        .with("d_estimate", d_estimate)
}

/// `B` with the simulation error averaged over the two channels.
pub fn lower_bound_tightened(n: usize, m: usize, delta_bar: f64, d_estimate: f64) -> BoundReport {
    let mut report = bound_b(n, m, delta_bar, d_estimate);
    report.name = "B_tightened".to_string();
    report.params.remove("delta");
    report.with("delta_bar", delta_bar)
}

/// `{2..=64} ∪ {round(x d(d-1) n) : x ∈ {2,3,4,6,8}}`, sorted.
pub fn default_m_grid(d: usize, n: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = (2..=64).collect();
    let scale = (d * d.saturating_sub(1) * n) as f64;
    for x in [2.0, 3.0, 4.0, 6.0, 8.0] {
        grid.push(((x * scale).round() as usize).max(2));
    }
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Maximises `B` over `m_grid`. Qubits use the exact `δ_M`, other dimensions
/// the upper bound. Ties go to the largest `M`.
pub fn bound_b_optimized(
    n: usize,
    d: usize,
    inputs: &EstimatorInputs,
    m_grid: &[usize],
) -> Result<BoundReport> {
    if m_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut best: Option<(f64, BoundReport)> = None;
    for &m in m_grid {
        let pbt = PbtQuantities::best(m, d)?;
        let (d_est, estimator) = inputs.best(n, m)?;
        let report = bound_b(n, m, pbt.delta, d_est)
            .with("d", d)
            .with("estimator", estimator.as_str())
            .with("delta_source", provenance_name(&pbt));
        let raw = report.raw();
        let better = match &best {
            None => true,
            Some((b, r)) => raw > *b || (raw == *b && m as i64 > r.int("M").unwrap_or(0)),
        };
        if better {
            best = Some((raw, report));
        }
    }
    let (_, mut report) = best.expect("grid is nonempty");
    report.name = "B_optimized".to_string();
    Ok(report.with("grid_size", m_grid.len()))
}

fn provenance_name(q: &PbtQuantities) -> &'static str {
    match q.provenance {
        crate::pbt::Provenance::ClosedForm => "closed_form",
        crate::pbt::Provenance::UpperBound => "upper_bound",
        crate::pbt::Provenance::Oracle => "oracle",
    }
}

/// `B` at `M = 4d(d-1)n` with the Fuchs estimator and `δ` at its upper
/// bound: `(1 - 2 sqrt(1 - F^{8d(d-1)n²}))/4`.
pub fn bound_b_analytic_m(n: usize, d: usize, f: f64) -> Result<BoundReport> {
    check_probability("F", f)?;
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    let dd = (d * (d - 1)) as f64;
    let nf = n as f64;
    let power = (8.0 * dd * nf * nf * f.ln()).exp_m1();
    let raw = (1.0 - 2.0 * (-power).max(0.0).sqrt()) / 4.0;
    Ok(BoundReport::lower_bound("B_analytic_M", raw)
        .with("n", n)
        .with("d", d)
        .with("F", f)
        .with("M", 4 * d * (d - 1) * n))
}

/// Small-infidelity form of the analytic-`M` bound at `F = 1 - ε`.
///
/// `value` is `max(1/4 - n sqrt(2d(d-1)ε), 0)`; `params["exponential"]` is
/// `exp(-4n sqrt(2d(d-1)ε))/4`.
pub fn bound_b_near_identity(n: usize, d: usize, epsilon: f64) -> Result<BoundReport> {
    check_probability("epsilon", epsilon)?;
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    let root = (2.0 * (d * (d - 1)) as f64 * epsilon).sqrt();
    let nf = n as f64;
    let linear = 0.25 - nf * root;
    let exponential = (-4.0 * nf * root).exp() / 4.0;
    Ok(BoundReport::lower_bound("B_near_identity", linear)
        .with("n", n)
        .with("d", d)
        .with("epsilon", epsilon)
        .with("exponential", exponential)
        .with("regime_warning", epsilon > NEAR_IDENTITY_EPS_MAX))
}

/// Upper bound `F^n/2` on the optimal block-protocol error probability.
pub fn block_upper_fidelity(f: f64, n: usize) -> Result<f64> {
    check_probability("F", f)?;
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    Ok((n as f64 * f.ln()).exp() / 2.0)
}

/// Choi fidelity of two amplitude-damping channels,
/// `(1 + sqrt((1-p0)(1-p1)) + sqrt(p0 p1))/2`.
pub fn ad_fidelity(p0: f64, p1: f64) -> Result<f64> {
    check_probability("p0", p0)?;
    check_probability("p1", p1)?;
    Ok(((1.0 + ((1.0 - p0) * (1.0 - p1)).sqrt() + (p0 * p1).sqrt()) / 2.0).min(1.0))
}

/// Fidelity bounds `([1 - sqrt(1 - F^{2n})]/2, F^n/2)` on the optimal block
/// error probability for amplitude damping.
pub fn block_bounds_ad(p0: f64, p1: f64, n: usize) -> Result<(f64, f64)> {
    let f = ad_fidelity(p0, p1)?;
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    let lower = (1.0 - (-(2.0 * n as f64 * f.ln()).exp_m1()).max(0.0).sqrt()) / 2.0;
    Ok((lower, block_upper_fidelity(f, n)?))
}

/// One `p` of an amplitude-damping sweep between rates `p0` and `p0 + dp`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdSweepRow {
    pub p0: f64,
    pub p1: f64,
    pub block_lower: f64,
    pub block_upper: f64,
    /// Tightened bound at each requested `M`, in request order.
    pub fixed_m: Vec<BoundReport>,
    pub optimized: BoundReport,
}

fn ad_tightened(n: usize, m: usize, p0: f64, p1: f64, f: f64) -> Result<BoundReport> {
    let delta_bar = (delta_ad(m, p0)? + delta_ad(m, p1)?) / 2.0;
    let d_est = d_upper_fuchs(f, n, m)?;
    Ok(lower_bound_tightened(n, m, delta_bar, d_est).with("estimator", Estimator::Fuchs.as_str()))
}

/// Tightened bounds for amplitude damping with the Fuchs estimator.
///
/// Fixed-`M` columns follow `m_list`; the optimum is taken over
/// `m_list ∪ default_m_grid(2, n)` so it dominates every fixed column.
pub fn ad_discrimination_sweep(
    p_grid: &[f64],
    dp: f64,
    n: usize,
    m_list: &[usize],
) -> Result<Vec<AdSweepRow>> {
    if p_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_range("dp", dp, dp >= 0.0, ">= 0")?;
    let mut opt_grid = default_m_grid(2, n);
    opt_grid.extend_from_slice(m_list);
    opt_grid.sort_unstable();
    opt_grid.dedup();

    p_grid
        .iter()
        .map(|&p0| {
            let p1 = p0 + dp;
            check_probability("p0", p0)?;
            check_probability("p0 + dp", p1)?;
            let f = ad_fidelity(p0, p1)?;
            let (block_lower, block_upper) = block_bounds_ad(p0, p1, n)?;
            let fixed_m = m_list
                .iter()
                .map(|&m| ad_tightened(n, m, p0, p1, f))
                .collect::<Result<Vec<_>>>()?;

            let mut best: Option<BoundReport> = None;
            for &m in &opt_grid {
                let r = ad_tightened(n, m, p0, p1, f)?;
                if best.as_ref().is_none_or(|b| r.raw() >= b.raw()) {
                    best = Some(r);
                }
            }
            let mut optimized = best.expect("grid is nonempty");
            optimized.name = "B_tightened_optimized".to_string();

            Ok(AdSweepRow {
                p0,
                p1,
                block_lower,
                block_upper,
                fixed_m,
                optimized,
            })
        })
        .collect()
}
