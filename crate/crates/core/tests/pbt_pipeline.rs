use approx::assert_abs_diff_eq;
use pbt_core::channels::{amplitude_damping, choi, identity};
use pbt_core::discrimination::{
    ad_discrimination_sweep, ad_fidelity, bound_b_optimized, default_m_grid, EstimatorInputs,
};
use pbt_core::linalg::{fidelity, partial_trace_matrix, trace_norm};
use pbt_core::pbt::{
    delta_ad, delta_exact_qubit, diamond_via_choi_scalar_check, pbt_choi_qubit,
    simulate_channel_choi, xi,
};
use pbt_core::pbt_oracle::{oracle_channel_choi, oracle_report, oracle_xi};
use pbt_core::{PbtQuantities, Provenance};

#[test]
fn oracle_and_closed_form_agree_on_xi() {
    for m in 2..=6 {
        assert_abs_diff_eq!(oracle_xi(m).unwrap(), xi(m).unwrap(), epsilon = 1e-9);
    }
    assert!((oracle_xi(6).unwrap() - 0.2).abs() < 0.01);
}

#[test]
fn oracle_choi_feeds_the_simulation_error() {
    let m = 4;
    let oracle = oracle_channel_choi(m).unwrap();
    let q = PbtQuantities::from_qubit_xi(m, 4.0 * oracle.matrix().get(1, 1).re, Provenance::Oracle)
        .unwrap();
    let closed = PbtQuantities::qubit(m).unwrap();
    assert_abs_diff_eq!(q.delta, closed.delta, epsilon = 1e-9);

    let d = diamond_via_choi_scalar_check(&choi(&identity(2)).unwrap(), &oracle)
        .unwrap()
        .unwrap();
    assert_abs_diff_eq!(d, delta_exact_qubit(m).unwrap(), epsilon = 1e-9);
}

#[test]
fn reference_marginal_of_identity_gap_is_scalar() {
    for m in 2..=10 {
        let j = choi(&identity(2)).unwrap().matrix() - pbt_choi_qubit(m).unwrap().matrix();
        let abs = pbt_core::linalg::abs_hermitian(&j).unwrap();
        let phi = partial_trace_matrix(&abs, &[2, 2], &[1]).unwrap();
        // Tr₂|ρ_I - ρ_Γ| = (3/4)ξ_M I for qubits.
        let expected = pbt_core::ComplexMatrix::identity(2).scale(0.75 * xi(m).unwrap());
        assert!(phi.max_abs_diff(&expected) < 1e-12);
        assert_abs_diff_eq!(
            trace_norm(&j).unwrap(),
            1.5 * xi(m).unwrap(),
            epsilon = 1e-12
        );
    }
}

#[test]
fn amplitude_damping_simulation_error_grid() {
    for m in (2..=20).step_by(2) {
        for k in 0..10 {
            let p = k as f64 / 9.0;
            let ad = amplitude_damping(p).unwrap();
            let sim = simulate_channel_choi(&ad, m).unwrap();
            let d = diamond_via_choi_scalar_check(&choi(&ad).unwrap(), &sim)
                .unwrap()
                .expect("scalar criterion");
            assert_abs_diff_eq!(d, delta_ad(m, p).unwrap(), epsilon = 1e-10);
        }
    }
}

#[test]
fn fidelity_closed_form_on_amplitude_damping_grid() {
    for i in 0..=10 {
        for j in 0..=10 {
            let (p0, p1) = (i as f64 / 10.0, j as f64 / 10.0);
            let a = choi(&amplitude_damping(p0).unwrap()).unwrap();
            let b = choi(&amplitude_damping(p1).unwrap()).unwrap();
            let generic = fidelity(a.state(), b.state()).unwrap();
            assert_abs_diff_eq!(generic, ad_fidelity(p0, p1).unwrap(), epsilon = 1e-10);
        }
    }
}

#[test]
fn sweep_orderings_at_default_settings() {
    let p_grid: Vec<f64> = (0..=18).map(|k| 0.8 + 0.01 * k as f64).collect();
    let rows = ad_discrimination_sweep(&p_grid, 0.01, 20, &[4, 16, 64, 256]).unwrap();
    for row in &rows {
        assert!(row.optimized.value <= row.block_lower);
        assert!(row.block_lower <= row.block_upper);
        assert_eq!(row.fixed_m[0].value, 0.0);
        assert!(row.optimized.value > 0.0);
    }
}

#[test]
fn generic_optimizer_on_amplitude_damping_chois() {
    let a = choi(&amplitude_damping(0.8).unwrap()).unwrap();
    let b = choi(&amplitude_damping(0.81).unwrap()).unwrap();
    let inputs = EstimatorInputs::from_chois(a.state(), b.state()).unwrap();
    assert_eq!(inputs.rel_entropy_min, Some(f64::INFINITY));
    let report = bound_b_optimized(20, 2, &inputs, &default_m_grid(2, 20)).unwrap();
    assert!(report.value > 0.0 && report.value < 0.5);
}

#[test]
fn oracle_report_diagnostics() {
    let r = oracle_report(3).unwrap();
    assert_eq!(r.null_dimension, 5);
    assert!(r.port_asymmetry < 1e-10);
    assert!(r.min_povm_eigenvalue > -1e-9);
}
