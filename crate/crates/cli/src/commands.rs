//! One function per subcommand, each returning a filled [`Table`].

use pbt_core::applications::{
    illumination_bound, illumination_fidelity_approx, illumination_fidelity_approx_corrected,
    illumination_fidelity_exact, key_rate_bound_asymptotic, key_rate_bound_finite,
    key_rate_default_grid, key_rate_m_tilde, metrology_bound, minimize_key_rate_over_m, qfi_choi,
    resolution_bound, resolution_fidelity, EntanglementMeasure, IlluminationParams, KeyRateParams,
    STRUCTURED_MIN_D,
};
use pbt_core::channels::{amplitude_damping, choi, depolarizing};
use pbt_core::discrimination::ad_discrimination_sweep;
use pbt_core::pbt::{delta_upper, entanglement_fidelity_qubit, xi};
use pbt_core::pbt_oracle::{oracle_report, M_MAX};
use pbt_core::PbtQuantities;

use crate::table::{Cell, Table};
use crate::{
    AdSweepArgs, CliError, CliResult, Family, IlluminationArgs, KeyrateArgs, Measure,
    MetrologyArgs, OracleVerifyArgs, Output, ResolutionArgs, XiTableArgs,
};

/// Tolerance on `f_e + δ/2 = 1` for the `identity_ok` column.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Oracle agreement threshold on `|ξ_closed - ξ_oracle|` and isotropy.
pub const ORACLE_TOL: f64 = 1e-9;
/// Relative step-halving change above which `step_warning` is raised.
pub const QFI_STEP_WARN: f64 = 0.01;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn ok(table: Table) -> CliResult<Output> {
    Ok(Output {
        table,
        check_failure: None,
    })
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(invalid(format!("bad range [{lo}, {hi}]")));
    }
    match steps {
        0 => Err(invalid("steps must be >= 1")),
        1 => Ok(vec![lo]),
        _ => Ok((0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect()),
    }
}

fn require_nonempty<T>(name: &str, v: &[T]) -> CliResult<()> {
    if v.is_empty() {
        Err(invalid(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

pub fn xi_table(a: &XiTableArgs) -> CliResult<Output> {
    if a.m_min < 2 || a.m_min > a.m_max {
        return Err(invalid("need 2 <= m-min <= m-max"));
    }
    let mut t = Table::new(
        "xi-table",
        &[
            "M",
            "xi",
            "f_e",
            "delta",
            "delta_upper",
            "M_xi",
            "identity_ok",
        ],
    );
    for m in a.m_min..=a.m_max {
        let x = xi(m)?;
        let q = PbtQuantities::qubit(m)?;
        let f_e = entanglement_fidelity_qubit(m)?;
        let identity_ok = (f_e + q.delta / 2.0 - 1.0).abs() <= IDENTITY_TOL;
        t.push(vec![
            m.into(),
            x.into(),
            f_e.into(),
            q.delta.into(),
            delta_upper(m, 2)?.into(),
            (m as f64 * x).into(),
            identity_ok.into(),
        ]);
    }
    ok(t)
}

pub fn oracle_verify(a: &OracleVerifyArgs) -> CliResult<Output> {
    if a.m_min < 2 || a.m_min > a.m_max || a.m_max > M_MAX {
        return Err(invalid(format!("need 2 <= m-min <= m-max <= {M_MAX}")));
    }
    let mut t = Table::new(
        "oracle-verify",
        &[
            "M",
            "xi_closed",
            "xi_oracle",
            "abs_diff",
            "isotropy_residual",
            "completeness_residual",
            "null_dimension",
            "port_asymmetry",
            "pass",
        ],
    );
    let mut failures = Vec::new();
    for m in a.m_min..=a.m_max {
        let closed = xi(m)?;
        let r = oracle_report(m)?;
        let diff = (closed - r.xi_port).abs();
        let pass = diff <= ORACLE_TOL && r.isotropy_residual <= ORACLE_TOL;
        if !pass {
            failures.push(m.to_string());
        }
        t.push(vec![
            m.into(),
            closed.into(),
            r.xi_port.into(),
            diff.into(),
            r.isotropy_residual.into(),
            r.completeness_residual.into(),
            r.null_dimension.into(),
            r.port_asymmetry.into(),
            pass.into(),
        ]);
    }
    Ok(Output {
        table: t,
        check_failure: (!failures.is_empty()).then(|| format!("M = {}", failures.join(", "))),
    })
}

pub fn ad_sweep(a: &AdSweepArgs) -> CliResult<Output> {
    if a.n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    if a.m_list.iter().any(|&m| m < 2) {
        return Err(invalid("every entry of m-list must be >= 2"));
    }
    let grid = linspace(a.p_min, a.p_max, a.steps)?;
    let rows = ad_discrimination_sweep(&grid, a.dp, a.n, &a.m_list)?;

    let mut columns = vec!["p".to_string(), "block_lower".into(), "block_upper".into()];
    columns.extend(a.m_list.iter().map(|m| format!("lb_M{m}")));
    if !a.no_optimize {
        columns.push("lb_optimized".into());
        columns.push("argmax_M".into());
    }
    let mut t = Table::with_columns("ad-sweep", columns);
    for r in rows {
        let mut row: Vec<Cell> = vec![r.p0.into(), r.block_lower.into(), r.block_upper.into()];
        row.extend(r.fixed_m.iter().map(|b| Cell::Real(b.value)));
        if !a.no_optimize {
            row.push(r.optimized.value.into());
            row.push(Cell::Int(r.optimized.int("M").unwrap_or(0)));
        }
        t.push(row);
    }
    ok(t)
}

pub fn resolution(a: &ResolutionArgs) -> CliResult<Output> {
    let mut t = Table::new(
        "resolution",
        &[
            "s",
            "eta",
            "n",
            "fidelity",
            "epsilon_exact",
            "epsilon_approx",
            "bound",
            "bound_exact_epsilon",
            "regime_warning",
        ],
    );
    for s in linspace(a.s_min, a.s_max, a.steps)? {
        let f = resolution_fidelity(a.eta, s)?;
        let b = resolution_bound(a.n, a.eta, s)?;
        t.push(vec![
            s.into(),
            a.eta.into(),
            a.n.into(),
            f.into(),
            b.epsilon_exact.into(),
            b.epsilon_approx.into(),
            b.value.into(),
            b.exact_epsilon_value.into(),
            b.regime_warning.into(),
        ]);
    }
    ok(t)
}

pub fn illumination(a: &IlluminationArgs) -> CliResult<Output> {
    require_nonempty("eta", &a.eta)?;
    require_nonempty("b", &a.b)?;
    let mut t = Table::new(
        "illumination",
        &[
            "d",
            "eta",
            "b",
            "n",
            "fidelity_exact",
            "fidelity_approx",
            "fidelity_approx_corrected",
            "approx_gap",
            "method",
            "bound",
            "separable_reference",
            "regime_warning",
        ],
    );
    for &eta in &a.eta {
        for &b in &a.b {
            let params = IlluminationParams::new(a.d, eta, b, a.n)?;
            let exact = illumination_fidelity_exact(a.d, eta, b)?;
            let approx = illumination_fidelity_approx(a.d, eta, b)?;
            let corrected = illumination_fidelity_approx_corrected(a.d, eta, b)?;
            let bound = illumination_bound(a.n, a.d, eta)?;
            let method = if a.d >= STRUCTURED_MIN_D {
                "structured"
            } else {
                "generic"
            };
            t.push(vec![
                a.d.into(),
                eta.into(),
                b.into(),
                a.n.into(),
                exact.into(),
                approx.into(),
                corrected.into(),
                (exact - approx).abs().into(),
                method.into(),
                bound.value.into(),
                bound.separable_reference.into(),
                params.regime_warning().into(),
            ]);
        }
    }
    ok(t)
}

pub fn metrology(a: &MetrologyArgs) -> CliResult<Output> {
    require_nonempty("theta", &a.theta)?;
    let family = match a.family {
        Family::Ad => "ad",
        Family::Depolarizing => "depolarizing",
    };
    let mut t = Table::new(
        "metrology",
        &[
            "family",
            "theta",
            "n",
            "qfi",
            "qfi_coarse",
            "qfi_fine",
            "step_sensitivity",
            "qfi_total",
            "variance_floor",
            "step_warning",
        ],
    );
    for &theta in &a.theta {
        let est = match a.family {
            Family::Ad => qfi_choi(|p| choi(&amplitude_damping(p)?), theta, a.dtheta)?,
            Family::Depolarizing => qfi_choi(|x| choi(&depolarizing(x, 2)?), theta, a.dtheta)?,
        };
        let bound = metrology_bound(a.n, est.value)?;
        t.push(vec![
            family.into(),
            theta.into(),
            a.n.into(),
            est.value.into(),
            est.coarse.into(),
            est.fine.into(),
            est.step_sensitivity.into(),
            bound.qfi_total.into(),
            bound.variance_floor.into(),
            (est.step_sensitivity >= QFI_STEP_WARN).into(),
        ]);
    }
    ok(t)
}

pub fn keyrate(a: &KeyrateArgs) -> CliResult<Output> {
    require_nonempty("d", &a.d)?;
    require_nonempty("e-r", &a.e_r)?;
    let measure = match a.measure {
        Measure::Ree => EntanglementMeasure::Ree,
        Measure::Se => EntanglementMeasure::Se,
    };
    let label = match a.measure {
        Measure::Ree => "ree",
        Measure::Se => "se",
    };
    let mut t = Table::new(
        "keyrate",
        &[
            "d",
            "e_r",
            "measure",
            "m_tilde",
            "k_at_m_tilde",
            "argmin_M",
            "k_min",
            "n",
            "delta",
            "gamma",
            "k_finite",
            "finite_valid",
        ],
    );
    for &d in &a.d {
        for &e_r in &a.e_r {
            let params = KeyRateParams::new(d, e_r, measure, a.n, a.epsilon)?.with_c(a.c)?;
            let m_tilde = key_rate_m_tilde(d, e_r)?;
            let at_tilde = if m_tilde.is_finite() && m_tilde >= 2.0 {
                key_rate_bound_asymptotic(d, e_r, m_tilde)?
            } else {
                f64::NAN
            };
            let grid = key_rate_default_grid(d, e_r)?;
            let (m_best, k_min) = minimize_key_rate_over_m(d, e_r, &grid)?;
            let delta = PbtQuantities::best(m_best, d)?.delta;
            let finite = key_rate_bound_finite(&params, m_best, delta)?;
            t.push(vec![
                d.into(),
                e_r.into(),
                label.into(),
                m_tilde.into(),
                at_tilde.into(),
                m_best.into(),
                k_min.into(),
                a.n.into(),
                delta.into(),
                finite.gamma.into(),
                finite.value.into(),
                finite.valid.into(),
            ]);
        }
    }
    ok(t)
}
