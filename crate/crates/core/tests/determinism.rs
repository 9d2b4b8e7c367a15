use std::fs;

use d2d_stackelberg::harness::sweep::{run_sweep, SweepSpec, SweepVariable};
use d2d_stackelberg::numerics::grid_refine_maximize;
use d2d_stackelberg::secrecy::outage_monte_carlo;
use d2d_stackelberg::{Scheme, SystemParams};

fn single_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(f)
}

fn small_sweep() -> SweepSpec {
    let mut spec = SweepSpec::new(SweepVariable::Xi, vec![0.3, 0.6, 0.9]);
    spec.n_channel_draws = 16;
    spec.base_seed = 11;
    spec
}

#[test]
fn csv_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let params = SystemParams::default();
    let mut files = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let result = run_sweep(&small_sweep(), &params).unwrap();
        result.write_csv(fs::File::create(&path).unwrap()).unwrap();
        files.push(fs::read(&path).unwrap());
    }
    assert!(!files[0].is_empty());
    assert_eq!(files[0], files[1]);
}

#[test]
fn sweep_serial_matches_parallel() {
    let params = SystemParams::default();
    let parallel = run_sweep(&small_sweep(), &params).unwrap();
    let serial = single_thread(|| run_sweep(&small_sweep(), &params).unwrap());
    assert_eq!(parallel, serial);
    assert_eq!(parallel.rows.len(), 3 * Scheme::ALL.len());
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let p = SystemParams::default();
    let a = outage_monte_carlo(&p, 1.0, 2.0, 1.5, 100_000, 9).unwrap();
    let b = single_thread(|| outage_monte_carlo(&p, 1.0, 2.0, 1.5, 100_000, 9).unwrap());
    assert_eq!(a, b);
}

#[test]
fn monte_carlo_pairs_eavesdroppers_across_k() {
    // Eavesdropper k draws from the same stream for every K, so adding an
    // eavesdropper can only add outages.
    let p1 = SystemParams {
        k_eves: 1,
        ..Default::default()
    };
    let p2 = SystemParams {
        k_eves: 2,
        ..Default::default()
    };
    let a = outage_monte_carlo(&p1, 1.0, 2.0, 1.5, 50_000, 3).unwrap();
    let b = outage_monte_carlo(&p2, 1.0, 2.0, 1.5, 50_000, 3).unwrap();
    assert!(b.outages >= a.outages);
}

#[test]
fn grid_search_independent_of_thread_count() {
    let f = |x: f64| -(x - 0.37).powi(2) + 0.1 * (20.0 * x).sin();
    let a = grid_refine_maximize(f, 0.0, 1.0, 1000, 1e-12);
    let b = single_thread(|| grid_refine_maximize(f, 0.0, 1.0, 1000, 1e-12));
    assert_eq!(a, b);
}
