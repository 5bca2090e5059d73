//! Observed convergence rates on the built-in problem.

use std::sync::OnceLock;

use urysohn::{
    builtin, convergence_study, solve_discrete_galerkin, ConvergenceReport, GalerkinSetup, NewtonConfig, StudyConfig,
};

fn phi(s: f64) -> f64 {
    2.0 / (2.0 * s + 1.0)
}

fn ladder() -> &'static ConvergenceReport {
    static REPORT: OnceLock<ConvergenceReport> = OnceLock::new();
    REPORT.get_or_init(|| convergence_study(&builtin(), &StudyConfig::new(1, vec![10, 20, 40])).unwrap())
}

fn max_eps_s(n: usize) -> f64 {
    ladder()
        .level(n)
        .unwrap()
        .rows
        .iter()
        .map(|r| r.eps_s)
        .fold(0.0, f64::max)
}

#[test]
fn partition_point_errors_superconverge() {
    let e: Vec<f64> = [10, 20, 40].map(max_eps_s).to_vec();
    for w in e.windows(2) {
        let d = (w[0] / w[1]).log2();
        assert!((d - 2.0).abs() <= 0.05, "max-norm order {d:.3} from {e:?}");
    }
}

#[test]
fn global_error_of_iterated_solution_is_second_order() {
    let samples: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let errs: Vec<f64> = [10usize, 20, 40]
        .iter()
        .map(|&n| {
            let sol = solve_discrete_galerkin(&builtin(), &GalerkinSetup::new(n, 1).unwrap(), &NewtonConfig::default())
                .unwrap();
            let z = sol.iterated().eval_many(&samples).unwrap();
            samples
                .iter()
                .zip(z)
                .map(|(&s, z)| (z - phi(s)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errs.windows(2) {
        let d = (w[0] / w[1]).log2();
        assert!((d - 2.0).abs() <= 0.2, "global order {d:.3} from {errs:?}");
    }
}

#[test]
fn extrapolation_gains_two_orders_of_magnitude() {
    let l = ladder().level(20).unwrap();
    let ex = l.rows.iter().map(|r| r.eps_ex.unwrap()).fold(0.0, f64::max);
    let s = max_eps_s(20);
    assert!(ex < s / 100.0, "max eps_EX {ex:.3e} vs max eps_S {s:.3e}");
}

#[test]
fn pointwise_orders_between_20_and_40() {
    let l = ladder().level(20).unwrap();
    let off: Vec<String> = l
        .rows
        .iter()
        .filter(|r| r.order_s.is_none_or(|d| !(1.95..=2.05).contains(&d)))
        .map(|r| format!("t={}: {:?}", r.t, r.order_s))
        .collect();
    assert!(off.is_empty(), "orders outside [1.95, 2.05]: {off:?}");
}

#[test]
fn extrapolated_orders_near_four() {
    let l = ladder().level(10).unwrap();
    for r in &l.rows {
        let d = r.order_ex.unwrap();
        assert!((3.8..=4.05).contains(&d), "t = {}: {d}", r.t);
    }
}

#[test]
fn newton_converges_within_eight_iterations() {
    for level in &ladder().levels {
        assert!(level.stats.newton_iterations <= 8, "{:?}", level.stats);
        assert!(level.stats.final_residual <= 1e-12);
    }
}
