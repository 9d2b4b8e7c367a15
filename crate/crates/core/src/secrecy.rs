//! Rates, secrecy outage (closed form and Monte Carlo) and secrecy throughput.
//!
//! Eavesdroppers are noiseless (worst case), so each one sees the SINR
//! `p_s |h_e|^2 / (P_BS ||g_e T||^2 / (N_T - 1))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_nonneg, check_theta, Error, Result};
use crate::model::channel::complex_gaussian;
use crate::model::{ChannelRealization, JammingBasis, SystemParams};

/// Operating point of the secrecy link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyPoint {
    pub p_s: f64,
    pub p_bs: f64,
    pub rho_e: f64,
    pub theta: f64,
}

impl SecrecyPoint {
    pub fn validate(&self) -> Result<()> {
        check_nonneg("p_s", self.p_s)?;
        check_nonneg("p_bs", self.p_bs)?;
        check_nonneg("rho_e", self.rho_e)?;
        check_theta(self.theta)
    }
}

/// Main-link capacity `log(1 + p_s |h_s|^2 / sigma_s^2)`.
pub fn capacity_d2d(params: &SystemParams, chan: &ChannelRealization, p_s: f64) -> f64 {
    params.log(1.0 + p_s * chan.h_s_abs2 / params.sigma_s2)
}

/// `C_s - log(1 + rho_e)`; negative when the leakage threshold exceeds the link SNR.
pub fn secrecy_rate(params: &SystemParams, chan: &ChannelRealization, p_s: f64, rho_e: f64) -> f64 {
    capacity_d2d(params, chan, p_s) - params.log(1.0 + rho_e)
}

/// `(1 - theta) * R`.
pub fn secrecy_throughput(params: &SystemParams, chan: &ChannelRealization, point: &SecrecyPoint) -> Result<f64> {
    point.validate()?;
    Ok((1.0 - point.theta) * secrecy_rate(params, chan, point.p_s, point.rho_e))
}

/// `P_BS delta_e^2 / (p_s gamma_e^2 (N_T - 1))`: scales `rho_e` inside the
/// per-eavesdropper CDF. `|h_e|^2` is exponential with mean `gamma_e^2` and
/// `||g_e T||^2` is Gamma(N_T - 1) with scale `delta_e^2`.
fn jamming_ratio(params: &SystemParams, p_s: f64, p_bs: f64) -> f64 {
    p_bs * params.delta_e2 / (p_s * params.gamma_e2 * params.jam_dims())
}

/// Closed-form secrecy outage probability
/// `1 - {1 - [1 + rho_e * r]^(1 - N_T)}^K` with `r` from [`jamming_ratio`].
pub fn outage_closed_form(params: &SystemParams, p_s: f64, p_bs: f64, rho_e: f64) -> Result<f64> {
    check_nonneg("p_s", p_s)?;
    check_nonneg("p_bs", p_bs)?;
    check_nonneg("rho_e", rho_e)?;
    if rho_e == 0.0 {
        return Ok(1.0);
    }
    if p_s == 0.0 {
        return Err(Error::Domain {
            name: "p_s",
            value: p_s,
            domain: "(0, inf) when rho_e > 0",
        });
    }
    let x = rho_e * jamming_ratio(params, p_s, p_bs);
    // 1 - (1+x)^(1-N), evaluated without cancellation for small x.
    let per_eve = -(-params.jam_dims() * x.ln_1p()).exp_m1();
    let p = -(params.k_eves as f64 * per_eve.ln()).exp_m1();
    Ok(clamp_probability(p))
}

/// The threshold `rho_e` at which the outage equals `eps` exactly; the inverse
/// of [`outage_closed_form`] in `rho_e`.
pub fn threshold_for_outage(params: &SystemParams, p_s: f64, p_bs: f64, eps: f64) -> f64 {
    let w = SystemParams {
        eps_outage: eps,
        ..*params
    }
    .leakage_factor();
    w / jamming_ratio(params, p_s, p_bs)
}

fn clamp_probability(p: f64) -> f64 {
    if p < 0.0 {
        debug_assert!(p > -1e-12, "probability {p} below zero");
        0.0
    } else if p > 1.0 {
        debug_assert!(p < 1.0 + 1e-12, "probability {p} above one");
        1.0
    } else {
        p
    }
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub estimate: f64,
    pub std_err: f64,
    pub n_trials: u64,
    pub outages: u64,
}

pub const MIN_MC_TRIALS: u64 = 10_000;
const CHUNK: u64 = 1 << 14;

/// Monte-Carlo secrecy outage: draws `h_{e,k}` and the `N_T - 1` entries of
/// `g_{e,k} T` directly and counts trials where the best eavesdropper's SINR
/// exceeds `rho_e`.
///
/// Trials are cut into fixed chunks; each (chunk, eavesdropper) pair owns its
/// own ChaCha stream, so the result does not depend on thread scheduling and
/// eavesdropper `k`'s draws are shared between runs with different `K`.
pub fn outage_monte_carlo(
    params: &SystemParams,
    p_s: f64,
    p_bs: f64,
    rho_e: f64,
    n_trials: u64,
    seed: u64,
) -> Result<OutageEstimate> {
    monte_carlo(params, None, p_s, p_bs, rho_e, n_trials, seed)
}

/// As [`outage_monte_carlo`], but draws the full `N_T`-entry channel `g_{e,k}`
/// with variance `delta_e^2` per entry and projects it through `basis`.
pub fn outage_monte_carlo_with_basis(
    params: &SystemParams,
    basis: &JammingBasis,
    p_s: f64,
    p_bs: f64,
    rho_e: f64,
    n_trials: u64,
    seed: u64,
) -> Result<OutageEstimate> {
    if basis.rows() != params.n_t {
        return Err(Error::InvalidParam {
            name: "basis",
            reason: format!("basis has {} rows, expected n_t = {}", basis.rows(), params.n_t),
        });
    }
    monte_carlo(params, Some(basis), p_s, p_bs, rho_e, n_trials, seed)
}

fn monte_carlo(
    params: &SystemParams,
    basis: Option<&JammingBasis>,
    p_s: f64,
    p_bs: f64,
    rho_e: f64,
    n_trials: u64,
    seed: u64,
) -> Result<OutageEstimate> {
    params.validate()?;
    check_nonneg("p_s", p_s)?;
    check_nonneg("p_bs", p_bs)?;
    check_nonneg("rho_e", rho_e)?;
    if n_trials < MIN_MC_TRIALS {
        return Err(Error::Domain {
            name: "n_trials",
            value: n_trials as f64,
            domain: "[10000, inf)",
        });
    }
    let n_chunks = n_trials.div_ceil(CHUNK);
    let jam_dims = params.n_t - 1;
    let outages: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let len = CHUNK.min(n_trials - chunk * CHUNK) as usize;
            let mut best = vec![0.0f64; len];
            for k in 0..params.k_eves {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((chunk << 16) | k as u64);
                for slot in best.iter_mut() {
                    let he = complex_gaussian(&mut rng, params.gamma_e2).norm_sqr();
                    let jam = match basis {
                        None => (0..jam_dims)
                            .map(|_| complex_gaussian(&mut rng, params.delta_e2).norm_sqr())
                            .sum::<f64>(),
                        Some(t) => {
                            let g: Vec<_> = (0..params.n_t)
                                .map(|_| complex_gaussian(&mut rng, params.delta_e2))
                                .collect();
                            t.project_row(&g).iter().map(|z| z.norm_sqr()).sum()
                        }
                    };
                    let sinr = p_s * jam_dims as f64 * he / (p_bs * jam);
                    // p_s = 0 gives 0/0 when p_bs is also zero: no signal, no leak.
                    let sinr = if p_s == 0.0 { 0.0 } else { sinr };
                    if sinr > *slot {
                        *slot = sinr;
                    }
                }
            }
            best.iter().filter(|&&s| s > rho_e).count() as u64
        })
        .sum();
    let p = outages as f64 / n_trials as f64;
    Ok(OutageEstimate {
        estimate: p,
        std_err: (p * (1.0 - p) / n_trials as f64).sqrt(),
        n_trials,
        outages,
    })
}
