use d2d_stackelberg::energy_trading::{follower_power, inner_optima, PriceConstants};
use d2d_stackelberg::game::{bs_utility, leader_utility};
use d2d_stackelberg::model::channel::{harvested_energy, max_d2d_power};
use d2d_stackelberg::model::{null_space_basis, ChannelRealization};
use d2d_stackelberg::non_energy_trading::NetGameConstants;
use d2d_stackelberg::numerics::{cubic_tolerance, depressed_cubic, solve_depressed_cubic_positive};
use d2d_stackelberg::secrecy::outage_closed_form;
use d2d_stackelberg::social_welfare::welfare;
use d2d_stackelberg::{sample_channels, SystemParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn scenario() -> impl Strategy<Value = (SystemParams, ChannelRealization)> {
    (
        2usize..=8,
        1usize..=4,
        0.1f64..0.95,
        0.01f64..0.5,
        0.1f64..10.0,
        0.1f64..10.0,
        0.1f64..10.0,
        0.1f64..10.0,
        any::<u64>(),
    )
        .prop_map(|(n_t, k_eves, xi, eps_outage, mu, cost_a, cost_b, sigma_s2, seed)| {
            let p = SystemParams {
                n_t,
                k_eves,
                xi,
                eps_outage,
                mu,
                cost_a,
                cost_b,
                sigma_s2,
                ..Default::default()
            };
            let c = sample_channels(&p, seed);
            (p, c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn max_power_spends_harvested_energy((p, c) in scenario(), theta in 0.01f64..0.99, pb in 0.0f64..50.0) {
        let e = harvested_energy(&p, &c, theta, pb).unwrap();
        let ps = max_d2d_power(&p, &c, theta, pb).unwrap();
        prop_assert!((ps * (1.0 - theta) - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn welfare_is_sum_of_utilities(
        (p, c) in scenario(),
        theta in 0.01f64..0.99,
        lambda in 0.0f64..50.0,
        pb in 0.0f64..50.0,
    ) {
        let sw = welfare(&p, &c, theta, pb).unwrap();
        let sum = leader_utility(&p, &c, theta, lambda, pb).unwrap() + bs_utility(&p, &c, theta, lambda, pb);
        prop_assert!((sw - sum).abs() <= 1e-10, "{sw} vs {sum}");
    }

    #[test]
    fn optimal_threshold_meets_outage_budget((p, c) in scenario(), theta in 0.01f64..0.99, pb in 0.01f64..50.0) {
        let (ps, rho) = inner_optima(&p, &c, theta, pb).unwrap();
        let out = outage_closed_form(&p, ps, pb, rho).unwrap();
        prop_assert!((out - p.eps_outage).abs() <= 1e-9);
    }

    #[test]
    fn outage_decreases_in_threshold((p, _c) in scenario(), ps in 0.1f64..10.0, pb in 0.1f64..10.0, rho in 0.01f64..20.0) {
        let lo = outage_closed_form(&p, ps, pb, rho).unwrap();
        let hi = outage_closed_form(&p, ps, pb, rho * 1.5).unwrap();
        prop_assert!(hi <= lo + 1e-15);
        prop_assert!((0.0..=1.0).contains(&lo));
    }

    #[test]
    fn leader_utility_concave_in_price((p, c) in scenario(), theta in 0.05f64..0.95, t in 0.0f64..1.0) {
        // Concavity on the region where the follower buys.
        let floor = p.cost_b / c.h_norm2;
        let k = PriceConstants::new(&p, &c, theta).unwrap();
        let lambda = floor * (1.05 + 5.0 * t);
        let h = 1e-3 * floor;
        let u = |l: f64| leader_utility(&p, &c, theta, l, follower_power(&p, &c, l)).unwrap();
        let second = u(lambda + h) - 2.0 * u(lambda) + u(lambda - h);
        prop_assert!(second <= 1e-7 * u(lambda).abs().max(1.0), "second difference {second}");
        prop_assert!(k.snr_factor(lambda) >= 1.0);
    }

    #[test]
    fn net_demand_strictly_decreasing((p, c) in scenario(), theta in 0.05f64..0.95, a in 0.01f64..0.98) {
        let k = NetGameConstants::new(&p, &c, theta).unwrap();
        let shut = k.shutdown_price();
        let l1 = a * shut;
        let l2 = (a + 0.01) * shut;
        prop_assert!(k.demand(l1) > k.demand(l2));
        prop_assert!(k.c_coef < 0.0 && k.x_const > 0.0 && k.y_const > 0.0);
    }

    #[test]
    fn cubic_root_residual(b in -100.0f64..100.0, c in -100.0f64..-0.001) {
        let r = solve_depressed_cubic_positive(b, c, |x| -x).unwrap();
        prop_assert!(r > 0.0);
        prop_assert!(depressed_cubic(b, c, r).abs() <= cubic_tolerance(c));
    }

    #[test]
    fn null_space_is_orthonormal_and_orthogonal(
        re in prop::collection::vec(-3.0f64..3.0, 2..=8),
        seed in any::<u64>(),
    ) {
        let n = re.len();
        let p = SystemParams { n_t: n, ..Default::default() };
        let mut g = sample_channels(&p, seed).g_s;
        for (gi, r) in g.iter_mut().zip(&re) {
            *gi += Complex64::new(*r, 0.0);
        }
        let t = null_space_basis(&g).unwrap();
        prop_assert_eq!((t.rows(), t.cols()), (n, n - 1));
        for j in 0..n - 1 {
            let dot: Complex64 = (0..n).map(|i| g[i] * t.get(i, j)).sum();
            prop_assert!(dot.norm() <= 1e-10 * g.iter().map(|x| x.norm()).sum::<f64>());
            for l in 0..n - 1 {
                let ip: Complex64 = (0..n).map(|i| t.get(i, j).conj() * t.get(i, l)).sum();
                let want = if j == l { 1.0 } else { 0.0 };
                prop_assert!((ip - want).norm() <= 1e-10);
            }
        }
    }
}
