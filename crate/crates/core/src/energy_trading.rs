//! Energy-trading game: the D2D transmitter leads with a price and a time
//! split, the BS follows with its transmit power.

use crate::error::{check_nonneg, check_theta, Error, Result};
use crate::game::{assemble, leader_utility, EquilibriumPoint, Scheme};
use crate::model::{ChannelRealization, SystemParams};
use crate::numerics::{
    bisect_increasing_decreasing, grid_refine_maximize, solve_quadratic_positive, DEFAULT_CROSSING_TOL,
};

/// Outer time-split search grid: `THETA_GRID_N` points on `[THETA_LO, THETA_HI]`.
pub const THETA_LO: f64 = 0.001;
pub const THETA_HI: f64 = 0.999;
pub const THETA_GRID_N: usize = 2000;
pub const THETA_TOL: f64 = 1e-10;

/// BS best response `[(lambda ||h||^2 - B) / (2A)]^+`; the time split cancels.
pub fn follower_power(params: &SystemParams, chan: &ChannelRealization, lambda_price: f64) -> f64 {
    ((lambda_price * chan.h_norm2 - params.cost_b) / (2.0 * params.cost_a)).max(0.0)
}

/// `xi ||h||^2 (N_T - 1) W gamma_e^2 / delta_e^2`: the optimal leakage
/// threshold is this slope times `theta / (1 - theta)`.
pub fn leakage_slope(params: &SystemParams, chan: &ChannelRealization) -> f64 {
    params.xi * chan.h_norm2 * params.jam_dims() * params.leakage_factor() * params.gamma_e2 / params.delta_e2
}

/// D2D power and leakage threshold that maximize the secrecy rate subject to
/// the outage budget: the whole harvested energy is spent, and `rho_e` sits
/// exactly on the outage constraint. Without harvested power nothing is sent
/// and the threshold is zero.
pub fn inner_optima(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    check_nonneg("p_bs", p_bs)?;
    if p_bs == 0.0 {
        return Ok((0.0, 0.0));
    }
    let u = theta / (1.0 - theta);
    let p_s = u * params.xi * p_bs * chan.h_norm2;
    let rho_e = u * leakage_slope(params, chan);
    Ok((p_s, rho_e))
}

/// Constants of the leader's price problem at a fixed time split:
/// `U_L(lambda) = a [ln(1 + d (lambda C - 2D)) - ln(1 + rho_e)] - lambda^2 C + 2 lambda D`.
///
/// `a` is in natural-log units, so it carries the `1 / ln(base)` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceConstants {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub dd: f64,
}

impl PriceConstants {
    pub fn new(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let h2 = chan.h_norm2;
        Ok(Self {
            a: params.mu * (1.0 - theta) * params.rate_scale(),
            c: theta * h2 * h2 / (2.0 * params.cost_a),
            d: params.xi * chan.h_s_abs2 / ((1.0 - theta) * params.sigma_s2),
            dd: theta * params.cost_b * h2 / (4.0 * params.cost_a),
        })
    }

    /// Stationary price: with `x = lambda C - D`,
    /// `2d x^2 + 2(1 - dD) x - a d C = 0`; the positive root gives
    /// `lambda = [-(1 - 3dD) + sqrt((1 - dD)^2 + 2 a d^2 C)] / (2 d C)`.
    pub fn optimal_price(&self) -> f64 {
        let Self { a, c, d, dd } = *self;
        let x = solve_quadratic_positive(2.0 * d, 2.0 * (1.0 - d * dd), -a * d * c)
            .ok()
            .flatten()
            .expect("discriminant (1-dD)^2 + 2ad^2C is positive");
        (x + dd) / c
    }

    /// `dU_L / dlambda`.
    pub fn marginal(&self, lambda: f64) -> f64 {
        let Self { a, c, d, dd } = *self;
        a * d * c / (1.0 + d * (lambda * c - 2.0 * dd)) - 2.0 * lambda * c + 2.0 * dd
    }

    /// `1 + d (lambda C - 2D)`, the link SNR factor at the follower's
    /// unconstrained power. Exceeds one exactly when `a d C > 2 D`.
    pub fn snr_factor(&self, lambda: f64) -> f64 {
        1.0 + self.d * (lambda * self.c - 2.0 * self.dd)
    }
}

/// Leader's optimal price for a fixed time split.
pub fn optimal_price(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<f64> {
    Ok(PriceConstants::new(params, chan, theta)?.optimal_price())
}

/// The `t1, t2, t3` constants of the time-split problem with the price held
/// fixed:
/// `U_L(theta) = mu (1-theta) [ln(1 + t1 u) - ln(1 + t2 u)] - theta t3`, `u = theta / (1-theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    /// `mu / ln(base)`.
    pub mu: f64,
}

impl ThetaTerms {
    pub fn at_price(params: &SystemParams, chan: &ChannelRealization, lambda: f64) -> Self {
        let h2 = chan.h_norm2;
        let spread = (lambda * h2 * h2 - params.cost_b * h2) / (2.0 * params.cost_a);
        Self {
            t1: params.xi * chan.h_s_abs2 * spread / params.sigma_s2,
            t2: leakage_slope(params, chan),
            t3: lambda * spread,
            mu: params.mu * params.rate_scale(),
        }
    }

    pub fn objective(&self, theta: f64) -> f64 {
        let u = theta / (1.0 - theta);
        self.mu * (1.0 - theta) * ((self.t1 * u).ln_1p() - (self.t2 * u).ln_1p()) - theta * self.t3
    }

    /// Left side of the first-order condition; nondecreasing when `t1 > t2`.
    pub fn f(&self, theta: f64) -> f64 {
        self.mu * (((self.t1 - 1.0) * theta + 1.0) / ((self.t2 - 1.0) * theta + 1.0)).ln()
    }

    /// Right side of the first-order condition; nonincreasing.
    pub fn g(&self, theta: f64) -> f64 {
        let s1 = self.t1 - 1.0;
        let s2 = self.t2 - 1.0;
        self.mu * (1.0 - theta) * (s1 / (s1 * theta + 1.0) - s2 / (s2 * theta + 1.0)) - self.t3
    }

    /// Time split where `f` meets `g`, searched on `[0, 1]`.
    pub fn crossing(&self) -> Result<f64> {
        bisect_increasing_decreasing(|t| self.f(t), |t| self.g(t), 0.0, 1.0, DEFAULT_CROSSING_TOL)
    }
}

/// How the outer time-split problem treats the price.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ThetaSearch {
    /// Re-optimize the price at every candidate split (grid plus golden section).
    #[default]
    Nested,
    /// Fix the price at its optimum for `reference_theta` and solve the
    /// first-order condition by the f/g crossing.
    FrozenPrice { reference_theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOptimum {
    pub theta: f64,
    pub lambda_price: f64,
}

/// Leader utility at `theta` with the price at its optimum for that `theta`
/// and the BS on its best response.
pub fn nested_utility(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<f64> {
    let lambda = optimal_price(params, chan, theta)?;
    leader_utility(params, chan, theta, lambda, follower_power(params, chan, lambda))
}

fn grid_point(i: usize) -> f64 {
    THETA_LO + (THETA_HI - THETA_LO) * i as f64 / (THETA_GRID_N - 1) as f64
}

/// Optimal time split and the price that goes with it.
pub fn optimal_theta(params: &SystemParams, chan: &ChannelRealization, search: ThetaSearch) -> Result<ThetaOptimum> {
    params.validate()?;
    let t2 = leakage_slope(params, chan);
    let secure_somewhere = (0..THETA_GRID_N).any(|i| {
        let lambda = optimal_price(params, chan, grid_point(i)).unwrap_or(0.0);
        ThetaTerms::at_price(params, chan, lambda).t1 > t2
    });
    if !secure_somewhere {
        return Err(Error::NoPositiveSecrecy);
    }
    match search {
        ThetaSearch::Nested => {
            let report = grid_refine_maximize(
                |t| nested_utility(params, chan, t).unwrap_or(f64::NEG_INFINITY),
                THETA_LO,
                THETA_HI,
                THETA_GRID_N,
                THETA_TOL,
            );
            Ok(ThetaOptimum {
                theta: report.argmax,
                lambda_price: optimal_price(params, chan, report.argmax)?,
            })
        }
        ThetaSearch::FrozenPrice { reference_theta } => {
            let lambda = optimal_price(params, chan, reference_theta)?;
            let theta = ThetaTerms::at_price(params, chan, lambda).crossing()?;
            let theta = theta.clamp(THETA_LO, THETA_HI);
            Ok(ThetaOptimum {
                theta,
                lambda_price: lambda,
            })
        }
    }
}

/// Equilibrium at a fixed time split: optimal price, BS best response, and
/// the D2D side's optimal power and leakage threshold.
pub fn solve_at_theta(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<EquilibriumPoint> {
    params.validate()?;
    let k = PriceConstants::new(params, chan, theta)?;
    let lambda = k.optimal_price();
    let p_bs = follower_power(params, chan, lambda);
    assemble(
        params,
        chan,
        Scheme::EnergyTrading,
        theta,
        lambda,
        p_bs,
        k.marginal(lambda),
    )
}

/// Full Stackelberg equilibrium with the time split optimized.
pub fn solve(params: &SystemParams, chan: &ChannelRealization) -> Result<EquilibriumPoint> {
    solve_with(params, chan, ThetaSearch::Nested)
}

pub fn solve_with(params: &SystemParams, chan: &ChannelRealization, search: ThetaSearch) -> Result<EquilibriumPoint> {
    let opt = optimal_theta(params, chan, search)?;
    let k = PriceConstants::new(params, chan, opt.theta)?;
    let p_bs = follower_power(params, chan, opt.lambda_price);
    let mut point = assemble(
        params,
        chan,
        Scheme::EnergyTrading,
        opt.theta,
        opt.lambda_price,
        p_bs,
        k.marginal(opt.lambda_price),
    )?;
    point.diagnostics.crossing_gap = ThetaTerms::at_price(params, chan, opt.lambda_price)
        .crossing()
        .ok()
        .map(|t| (t - opt.theta).abs());
    Ok(point)
}
