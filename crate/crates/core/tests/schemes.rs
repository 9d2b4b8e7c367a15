use d2d_stackelberg::energy_trading::{THETA_GRID_N, THETA_HI, THETA_LO};
use d2d_stackelberg::harness::acceptance::random_scenario;
use d2d_stackelberg::harness::sweep::{run_sweep, SweepSpec, SweepVariable};
use d2d_stackelberg::{energy_trading, non_energy_trading, sample_channels, social_welfare, Scheme, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn non_energy_trading_pays_more() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut counterexamples = Vec::new();
    let n = 60;
    for s in 0..n {
        let (p, c) = random_scenario(&mut rng);
        let theta = rng.random_range(0.05..0.95);
        let et = energy_trading::solve_at_theta(&p, &c, theta).unwrap();
        let net = non_energy_trading::solve(&p, &c, theta).unwrap();
        if net.payment < et.payment {
            counterexamples.push(format!(
                "scenario {s}: theta={theta:.3} net payment {:.6} < et payment {:.6}",
                net.payment, et.payment
            ));
        }
    }
    for line in &counterexamples {
        println!("{line}");
    }
    println!("payment ordering held on {}/{n} scenarios", n - counterexamples.len());
    assert!(counterexamples.is_empty());
}

#[test]
fn welfare_split_not_above_energy_trading_split() {
    // Mean optimal split over draws where both schemes are feasible and
    // profitable, per point of a xi sweep at the default scenario.
    let step = (THETA_HI - THETA_LO) / (THETA_GRID_N - 1) as f64;
    let mut ok = true;
    for i in 1..10 {
        let p = SystemParams {
            xi: i as f64 * 0.1,
            ..Default::default()
        };
        let (mut et_sum, mut sw_sum, mut n) = (0.0, 0.0, 0);
        for seed in 0..200 {
            let c = sample_channels(&p, seed);
            if let (Ok(et), Ok(sw)) = (energy_trading::solve(&p, &c), social_welfare::solve(&p, &c)) {
                if !et.diagnostics.unprofitable && !sw.diagnostics.unprofitable {
                    et_sum += et.theta;
                    sw_sum += sw.theta;
                    n += 1;
                }
            }
        }
        let (et, sw) = (et_sum / n as f64, sw_sum / n as f64);
        let holds = sw <= et + step;
        println!(
            "xi={:.1}: {n} draws, theta_opt sw {sw:.5} vs et {et:.5} {}",
            p.xi,
            if holds { "ok" } else { "VIOLATED" }
        );
        ok &= holds;
    }
    assert!(ok);
}

/// Index of the maximum, and whether the series rises strictly up to it and
/// falls strictly after it, up to `noise`.
fn single_peak(xs: &[f64], noise: f64) -> (usize, bool) {
    let peak = (0..xs.len()).fold(0, |b, i| if xs[i] > xs[b] { i } else { b });
    let rising = xs[..=peak].windows(2).all(|w| w[1] >= w[0] - noise);
    let falling = xs[peak..].windows(2).all(|w| w[1] <= w[0] + noise);
    (peak, rising && falling)
}

#[test]
fn leader_utility_has_interior_peak_in_theta() {
    let values: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    let mut spec = SweepSpec::new(SweepVariable::Theta, values.clone());
    spec.schemes = vec![Scheme::EnergyTrading, Scheme::SocialWelfare];
    let result = run_sweep(&spec, &SystemParams::default()).unwrap();
    let mut ok = true;
    for scheme in [Scheme::EnergyTrading, Scheme::SocialWelfare] {
        let u = result.series(scheme, "u_leader");
        let (peak, unimodal) = single_peak(&u, 1e-9);
        let interior = peak > 0 && peak + 1 < u.len();
        println!(
            "{scheme}: peak at theta={:.2}, interior={interior}, unimodal={unimodal}",
            values[peak]
        );
        println!("  {:?}", u.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>());
        ok &= interior && unimodal;
    }
    assert!(ok);
}

#[test]
fn single_peak_helper() {
    assert_eq!(single_peak(&[1.0, 3.0, 2.0], 0.0), (1, true));
    assert_eq!(single_peak(&[3.0, 1.0, 2.0], 0.0), (0, false));
}
