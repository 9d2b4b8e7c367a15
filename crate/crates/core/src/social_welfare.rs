//! Cooperative scheme: one operator picks the time split and BS power to
//! maximize secrecy benefit minus energy cost. The price is internal.

use crate::energy_trading::{leakage_slope, THETA_GRID_N, THETA_HI, THETA_LO, THETA_TOL};
use crate::error::{check_nonneg, check_theta, Error, Result};
use crate::game::{assemble, energy_cost, optimal_throughput, EquilibriumPoint, Scheme};
use crate::model::{ChannelRealization, SystemParams};
use crate::numerics::{grid_refine_maximize, solve_quadratic_positive};

/// `mu T_s - theta (A P_BS^2 + B P_BS)` with the D2D side's optimal
/// `(p_s, rho_e)`. With zero BS power nothing is transmitted and the welfare is zero.
pub fn welfare(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> Result<f64> {
    check_theta(theta)?;
    check_nonneg("p_bs", p_bs)?;
    Ok(params.mu * optimal_throughput(params, chan, theta, p_bs)? - theta * energy_cost(params, p_bs))
}

/// Root of `2 theta A d P^2 + (2 theta A + d B theta) P + (B theta - a d) = 0`
/// clamped at zero. `a` is in natural-log units.
pub fn power_from_constants(theta: f64, cost_a: f64, cost_b: f64, a: f64, d: f64) -> f64 {
    let root = solve_quadratic_positive(
        2.0 * theta * cost_a * d,
        2.0 * theta * cost_a + d * cost_b * theta,
        cost_b * theta - a * d,
    )
    .ok()
    .flatten()
    .expect("discriminant (2 theta A - d B theta)^2 + 8 theta A a d^2 is positive");
    root.max(0.0)
}

/// Welfare-maximizing BS power for a fixed time split.
pub fn optimal_power(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let a = params.mu * (1.0 - theta) * params.rate_scale();
    let d = theta * params.xi * chan.h_norm2 * chan.h_s_abs2 / ((1.0 - theta) * params.sigma_s2);
    Ok(power_from_constants(theta, params.cost_a, params.cost_b, a, d))
}

/// Welfare optimum at a fixed time split.
pub fn solve_at_theta(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<EquilibriumPoint> {
    params.validate()?;
    let p_bs = optimal_power(params, chan, theta)?;
    let mut point = assemble(params, chan, Scheme::SocialWelfare, theta, 0.0, p_bs, 0.0)?;
    point.diagnostics.stationarity_residual = marginal_welfare(params, chan, theta, p_bs);
    Ok(point)
}

/// `dU_SW / dP_BS` in configured rate units, evaluated at an interior power.
fn marginal_welfare(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> f64 {
    if p_bs == 0.0 {
        return 0.0;
    }
    let a = params.mu * (1.0 - theta) * params.rate_scale();
    let d = theta * params.xi * chan.h_norm2 * chan.h_s_abs2 / ((1.0 - theta) * params.sigma_s2);
    a * d / (1.0 + d * p_bs) - 2.0 * theta * params.cost_a * p_bs - theta * params.cost_b
}

/// Joint optimum over the time split (grid plus golden section) and BS power
/// (closed form).
pub fn solve(params: &SystemParams, chan: &ChannelRealization) -> Result<EquilibriumPoint> {
    params.validate()?;
    let t2 = leakage_slope(params, chan);
    let secure_somewhere = (0..THETA_GRID_N).any(|i| {
        let theta = THETA_LO + (THETA_HI - THETA_LO) * i as f64 / (THETA_GRID_N - 1) as f64;
        let p = optimal_power(params, chan, theta).unwrap_or(0.0);
        params.xi * p * chan.h_norm2 * chan.h_s_abs2 / params.sigma_s2 > t2
    });
    if !secure_somewhere {
        return Err(Error::NoPositiveSecrecy);
    }
    let report = grid_refine_maximize(
        |t| {
            optimal_power(params, chan, t)
                .and_then(|p| welfare(params, chan, t, p))
                .unwrap_or(f64::NEG_INFINITY)
        },
        THETA_LO,
        THETA_HI,
        THETA_GRID_N,
        THETA_TOL,
    );
    solve_at_theta(params, chan, report.argmax)
}
