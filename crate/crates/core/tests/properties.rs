use proptest::prelude::*;
use urysohn::extrapolation::ORDER_FLOOR;
use urysohn::nystrom::apply_km_many;
use urysohn::poly_basis::{bernoulli, j_k, legendre};
use urysohn::problem::Branch;
use urysohn::projection::{discrete_inner_product, project_values};
use urysohn::quadrature::integrate_composite;
use urysohn::{
    builtin, estimate_order, project, richardson, CompositeGrid, DiscreteBasis, Execution, GridFunction, PointValues,
    QuadratureRule,
};

fn grid(n: usize, p: usize, rho: usize) -> CompositeGrid {
    CompositeGrid::new(n, p, QuadratureRule::gauss(rho).unwrap()).unwrap()
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * t + ci)
}

fn uniform(n: usize, f: impl Fn(f64) -> f64) -> PointValues {
    PointValues::from_pairs((0..=n).map(|i| {
        let t = i as f64 / n as f64;
        (t, f(t))
    }))
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composite_rule_is_exact_to_degree_2rho_minus_1(
        rho in 1usize..=6,
        n in 1usize..=6,
        p in 1usize..=4,
        raw in prop::collection::vec(-1.0f64..1.0, 12),
    ) {
        let c = &raw[..2 * rho];
        let exact: f64 = c.iter().enumerate().map(|(k, ck)| ck / (k + 1) as f64).sum();
        let approx = integrate_composite(|t| horner(c, t), &grid(n, p, rho)).unwrap();
        prop_assert!((approx - exact).abs() <= 1e-12, "{approx} vs {exact}");
    }

    #[test]
    fn grids_are_deterministic(n in 1usize..=10, p in 1usize..=5, rho in 1usize..=5) {
        let a = grid(n, p, rho);
        let b = grid(n, p, rho);
        prop_assert_eq!(a.nodes(), b.nodes());
        prop_assert_eq!(a.weights(), b.weights());
    }

    #[test]
    fn projection_is_idempotent_and_reproduces_polynomials(
        r in 1usize..=3,
        n in 1usize..=6,
        p in 1usize..=3,
        raw in prop::collection::vec(-2.0f64..2.0, 3),
        freq in 0.5f64..6.0,
    ) {
        let g = grid(n, p, (3 * r + 2) / 2);
        let basis = DiscreteBasis::new(&g, r).unwrap();
        let x = |t: f64| (freq * t).sin() + t.exp();
        let px = project(x, &g, r).unwrap();
        let ppx = project_values(&px.node_values(&g, &basis), &g, &basis);
        for (a, b) in px.coeffs().iter().zip(ppx.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let c = &raw[..r];
        let pq = project(|t| horner(c, t), &g, r).unwrap();
        for i in 0..=40 {
            let s = i as f64 / 40.0;
            prop_assert!((pq.evaluate(s).unwrap() - horner(c, s)).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_is_self_adjoint_on_each_subinterval(
        r in 1usize..=3,
        n in 1usize..=5,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let g = grid(n, 2, (3 * r + 2) / 2);
        let x = |t: f64| (a * t).exp();
        let y = |t: f64| (b * t).cos() + t;
        let px = project(x, &g, r).unwrap();
        let py = project(y, &g, r).unwrap();
        let h = g.h();
        for j in 0..n {
            // evaluate on the closed subinterval so the nodes of Δ_j use its own polynomial
            let on = |pl: &urysohn::PiecewiseLegendre, t: f64| -> f64 {
                let tau = ((t - j as f64 * h) / h).clamp(0.0, 1.0);
                (0..r).map(|eta| pl.coefficient(j, eta) * legendre(eta, tau).unwrap() / h.sqrt()).sum()
            };
            let lhs = discrete_inner_product(|t| on(&px, t), y, j, &g).unwrap();
            let rhs = discrete_inner_product(x, |t| on(&py, t), j, &g).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn j_k_matches_discrete_sum(r in 1usize..=3, p in prop::sample::select(vec![1usize, 2, 4]), k_off in 0usize..7, tau in 0.0f64..=1.0) {
        let k = 1 + k_off % (2 * r + 1);
        let g = grid(1, p, (3 * r + 2) / 2);
        let kf: f64 = (1..=k).map(|i| i as f64).product();
        let discrete: f64 = g
            .offsets()
            .iter()
            .zip(g.offset_weights())
            .map(|(&mu, &w)| {
                let lam: f64 = (0..r).map(|eta| legendre(eta, mu).unwrap() * legendre(eta, tau).unwrap()).sum();
                w * lam * (mu - tau).powi(k as i32) / kf
            })
            .sum::<f64>()
            / p as f64;
        prop_assert!((j_k(r, k, tau).unwrap() - discrete).abs() <= 1e-12);
    }

    #[test]
    fn bernoulli_periodicity_and_derivative(k in 2usize..=12, s in 0.05f64..0.95) {
        prop_assert!((bernoulli(k, 1.0).unwrap() - bernoulli(k, 0.0).unwrap()).abs() <= 1e-10);
        let e = 1e-6;
        let fd = (bernoulli(k, s + e).unwrap() - bernoulli(k, s - e).unwrap()) / (2.0 * e);
        let exact = k as f64 * bernoulli(k - 1, s).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-8 * exact.abs().max(1.0), "{fd} vs {exact}");
    }

    #[test]
    fn branch_follows_lower_triangle(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let expected = if t <= s { Branch::Lower } else { Branch::Upper };
        prop_assert_eq!(Branch::of(s, t), expected);
        prop_assert_eq!(Branch::of(s, s), Branch::Lower);
    }

    #[test]
    fn richardson_cancels_the_leading_term(
        r in 1usize..=2,
        n in 1usize..=30,
        a in -5.0f64..5.0,
        b in -50.0f64..50.0,
    ) {
        let sample = |n: usize| {
            let h = 1.0 / n as f64;
            uniform(n, |t| a * (1.0 + t) + b * t.sin() * h.powi(2 * r as i32))
        };
        let ex = richardson(&sample(n), &sample(2 * n), r).unwrap();
        for (t, v) in ex.iter() {
            prop_assert!((v - a * (1.0 + t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn richardson_of_agreeing_values_is_identity(n in 1usize..=20, c in -10.0f64..10.0, r in 1usize..=4) {
        let ex = richardson(&uniform(n, |_| c), &uniform(2 * n, |_| c), r).unwrap();
        for v in ex.values() {
            prop_assert!((v - c).abs() <= 1e-14 * c.abs().max(1.0));
        }
    }

    #[test]
    fn order_estimate_recovers_power_laws(c in 1e-6f64..1.0, q in 0.5f64..6.0) {
        let fine = c * 2f64.powf(-q);
        match estimate_order(c, fine) {
            Some(d) => prop_assert!((d - q).abs() <= 1e-12),
            None => prop_assert!(fine <= ORDER_FLOOR),
        }
    }

    #[test]
    fn execution_modes_agree_for_operator_application(
        raw in prop::collection::vec(0.5f64..2.0, 24),
        targets in prop::collection::vec(0.0f64..=1.0, 1..20),
    ) {
        let g = grid(6, 2, 2);
        let p = builtin();
        let x = GridFunction::new(&g, raw).unwrap();
        let seq = apply_km_many(&p, &g, &x, &targets, Execution::Sequential).unwrap();
        let par = apply_km_many(&p, &g, &x, &targets, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}

#[test]
fn halving_the_fine_step_gains_at_least_factor_3_5() {
    let exact = std::f64::consts::E - 1.0;
    for rho in 1..=3 {
        let errs: Vec<f64> = [1usize, 2, 4]
            .iter()
            .map(|&p| (integrate_composite(f64::exp, &grid(2, p, rho)).unwrap() - exact).abs())
            .collect();
        for w in errs.windows(2) {
            if w[1] > 1e-14 {
                assert!(w[0] / w[1] >= 3.5, "rho = {rho}: {errs:?}");
            }
        }
    }
}
