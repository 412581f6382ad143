use majorana_core::model::{self, InteractionSpec, ModelSpec};
use majorana_core::zero_modes::{
    kernel_solve, localization_profile, series_residual_scaling, series_solve, Gauge, DEFAULT_KERNEL_TOL,
};
use majorana_core::commutator;

fn c1234(n: usize, kappa: f64, g: f64) -> ModelSpec {
    ModelSpec::chain(n, kappa).with_interaction(InteractionSpec::C1C2C3C4, g)
}

#[test]
fn kernel_at_zero_coupling_is_exact_mode() {
    let spec = c1234(4, 0.5, 0.0);
    let rep = kernel_solve(&spec, DEFAULT_KERNEL_TOL).unwrap();
    assert_eq!(rep.basis_size(), 64);
    assert!(rep.matrix_defect < 1e-12);
    assert!(rep.trivial_residual < 1e-12);
    assert!(rep.kernel_dim >= 2 && rep.kernel_dim.is_multiple_of(2));
    let expected = model::build_gamma0_normalized(&spec).unwrap();
    assert!((&rep.gamma - &expected).max_abs_coefficient() < 1e-10, "{}", rep.gamma);
    assert!(rep.residual_fock < 1e-10);
}

#[test]
fn kernel_at_small_coupling() {
    let spec = c1234(4, 0.5, 0.1);
    let rep = kernel_solve(&spec, DEFAULT_KERNEL_TOL).unwrap();
    assert!(rep.matrix_defect < 1e-12);
    assert!(rep.trivial_in_kernel);
    assert!(rep.kernel_dim >= 2 && rep.kernel_dim.is_multiple_of(2));
    assert!(rep.residual_symbolic < 1e-10);
    assert!(rep.residual_fock < 1e-10);
    assert!(rep.trivial_overlap < 1e-12);
    let bound = rep.basis_size() as f64 * rep.kernel_tol * rep.h_norm;
    assert!(rep.kernel_consistency <= bound, "{} > {bound}", rep.kernel_consistency);
}

#[test]
fn kernel_mode_profile_decreases() {
    let spec = c1234(5, 0.4, 0.1);
    let rep = kernel_solve(&spec, DEFAULT_KERNEL_TOL).unwrap();
    assert!(rep.profile.is_strictly_decreasing(), "{:?}", rep.profile.residuals);
}

#[test]
fn kernel_rejects_ladders() {
    let spec = ModelSpec::ladder(2, 2, 0.5).with_interaction(InteractionSpec::InterchainEdge { pairs: None }, 0.1);
    assert!(kernel_solve(&spec, DEFAULT_KERNEL_TOL).is_err());
}

#[test]
fn first_order_truncation_scales_quadratically() {
    let spec = c1234(5, 0.3, 0.0);
    let sol = series_solve(&spec, 1, Gauge::MinNorm).unwrap();
    let grid: Vec<f64> = (1..=10).map(|k| 0.02 * k as f64).collect();
    let rep = series_residual_scaling(&spec, &sol, &grid).unwrap();
    assert!(rep.slope.unwrap() >= 1.8, "slope {:?}", rep.slope);
}

#[test]
fn min_norm_orders_satisfy_recursion() {
    let spec = c1234(4, 0.5, 0.0);
    let sol = series_solve(&spec, 3, Gauge::MinNorm).unwrap();
    let h0 = model::build_h0(&spec).unwrap();
    let v = model::build_interaction(&spec).unwrap();
    for n in 1..=3 {
        let lhs = commutator(&h0, &sol.gamma[n]);
        let rhs = -&commutator(&v, &sol.gamma[n - 1]);
        assert!((&lhs - &rhs).max_abs_coefficient() < 1e-10, "order {n}");
    }
}

#[test]
fn lambda_gauge_at_one() {
    // the first-order family is valid for any λ, but only λ = 0 continues to κ²
    let spec = c1234(5, 0.3, 0.0);
    let sol = series_solve(&spec, 2, Gauge::PaperLambda(1.0)).unwrap();
    assert!(sol.residuals.iter().all(|r| *r < 1e-10));
    let orders = sol.kappa_orders.unwrap();
    assert_eq!(orders.len(), 2);
    assert!(sol.kappa2_obstruction.unwrap() > 1.0);
    let (h01, h00) = model::chain_h0_split(5, 0);
    let lhs = &commutator(&h01, &orders[0]) + &commutator(&h00, &orders[1]);
    let expected: majorana_core::MajoranaOperator = "(2.0+0.0i) * c[1]c[2]c[4]".parse().unwrap();
    assert!((&lhs - &expected).max_abs_coefficient() < 1e-14);
}

#[test]
fn exact_mode_profile_rate() {
    for kappa in [0.3, 0.5, -0.6] {
        let spec = ModelSpec::chain(7, kappa);
        let p = localization_profile(&model::build_gamma0(&spec).unwrap(), &spec).unwrap();
        assert!((p.rate.unwrap() - f64::ln(f64::abs(kappa))).abs() < 1e-10);
    }
}
