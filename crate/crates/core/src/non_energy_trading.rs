//! Non-energy-trading game at a fixed time split: the BS leads with a
//! price, the D2D transmitter follows with the power it buys.

use crate::error::{check_theta, Error, Result};
use crate::game::{assemble, EquilibriumPoint, Scheme};
use crate::model::{ChannelRealization, SystemParams};
use crate::numerics::{depressed_cubic, solve_depressed_cubic_positive};

/// Default time split for this scheme.
pub const DEFAULT_THETA: f64 = 0.5;

/// Constants of the follower demand `P_BS = [X / lambda - Y]^+` and of the
/// leader's stationarity cubic `lambda^3 + b lambda + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetGameConstants {
    /// `mu (1 - theta) / (theta ||h||^2)`, in natural-log units.
    pub x_const: f64,
    /// `(1 - theta) sigma_s^2 / (xi theta ||h||^2 |h_s|^2)`.
    pub y_const: f64,
    pub b_coef: f64,
    pub c_coef: f64,
}

impl NetGameConstants {
    pub fn new(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let h2 = chan.h_norm2;
        let x = params.mu * params.rate_scale() * (1.0 - theta) / (theta * h2);
        let y = (1.0 - theta) * params.sigma_s2 / (params.xi * theta * h2 * chan.h_s_abs2);
        Ok(Self::from_xy(params, h2, x, y))
    }

    pub fn from_xy(params: &SystemParams, h_norm2: f64, x: f64, y: f64) -> Self {
        let (a, b) = (params.cost_a, params.cost_b);
        Self {
            x_const: x,
            y_const: y,
            b_coef: (2.0 * a * x * y - b * x) / (y * h_norm2),
            c_coef: -2.0 * a * x * x / (y * h_norm2),
        }
    }

    /// Price at which the follower stops buying.
    pub fn shutdown_price(&self) -> f64 {
        self.x_const / self.y_const
    }

    pub fn demand(&self, lambda: f64) -> f64 {
        (self.x_const / lambda - self.y_const).max(0.0)
    }
}

/// D2D demand for BS power at price `lambda`, from its first-order condition.
pub fn follower_power_demand(
    params: &SystemParams,
    chan: &ChannelRealization,
    theta: f64,
    lambda_price: f64,
) -> Result<f64> {
    if !(lambda_price > 0.0) {
        return Err(Error::Domain {
            name: "lambda_price",
            value: lambda_price,
            domain: "(0, inf)",
        });
    }
    Ok(NetGameConstants::new(params, chan, theta)?.demand(lambda_price))
}

/// BS profit along the follower's unclamped demand curve.
fn leader_profit(
    params: &SystemParams,
    chan: &ChannelRealization,
    theta: f64,
    k: &NetGameConstants,
    lambda: f64,
) -> f64 {
    let p = k.x_const / lambda - k.y_const;
    theta * (lambda * p * chan.h_norm2 - params.cost_a * p * p - params.cost_b * p)
}

/// Leader's stationary price: the positive root of the cubic, choosing the
/// most profitable one if several exist.
pub fn leader_price(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<f64> {
    let k = NetGameConstants::new(params, chan, theta)?;
    solve_depressed_cubic_positive(k.b_coef, k.c_coef, |l| leader_profit(params, chan, theta, &k, l))
}

/// Equilibrium at time split `theta`. If the stationary price reaches the
/// shutdown price the point is the no-trade corner (price at shutdown, zero power).
pub fn solve(params: &SystemParams, chan: &ChannelRealization, theta: f64) -> Result<EquilibriumPoint> {
    params.validate()?;
    let k = NetGameConstants::new(params, chan, theta)?;
    let root = leader_price(params, chan, theta)?;
    let residual = depressed_cubic(k.b_coef, k.c_coef, root);
    let lambda = root.min(k.shutdown_price());
    let p_bs = k.demand(lambda);
    assemble(params, chan, Scheme::NonEnergyTrading, theta, lambda, p_bs, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_channels;

    fn setup() -> (SystemParams, ChannelRealization) {
        let p = SystemParams::default();
        (p, ChannelRealization::from_gains(p.n_t, 3.0, 1.5))
    }

    #[test]
    fn demand_boundary_values() {
        let (p, c) = setup();
        let k = NetGameConstants::new(&p, &c, 0.4).unwrap();
        let shut = k.shutdown_price();
        assert!(follower_power_demand(&p, &c, 0.4, shut).unwrap().abs() < 1e-12);
        let half = follower_power_demand(&p, &c, 0.4, shut / 2.0).unwrap();
        assert!((half - k.y_const).abs() <= 1e-12 * k.y_const);
        assert!(follower_power_demand(&p, &c, 0.4, 0.0).is_err());
        assert!(follower_power_demand(&p, &c, 0.0, 1.0).is_err());
    }

    #[test]
    fn demand_strictly_decreasing_below_shutdown() {
        let (p, c) = setup();
        let k = NetGameConstants::new(&p, &c, 0.5).unwrap();
        let shut = k.shutdown_price();
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let v = k.demand(shut * i as f64 / 100.0);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn contrived_factorable_cubic() {
        // With h2 = A = B = 1: c = -2X^2/Y = -6 gives Y = X^2/3, and
        // b = 2X - X/Y = -7 then gives 2X^2 + 7X - 3 = 0.
        let p = SystemParams::default();
        let h2 = 1.0;
        let x = (-7.0 + (49.0f64 + 24.0).sqrt()) / 4.0;
        let y = x * x / 3.0;
        let k = NetGameConstants::from_xy(&p, h2, x, y);
        assert!((k.b_coef + 7.0).abs() < 1e-12 && (k.c_coef + 6.0).abs() < 1e-12);
        let r = solve_depressed_cubic_positive(k.b_coef, k.c_coef, |l| -l).unwrap();
        assert!((r - 3.0).abs() < 1e-10);
    }

    #[test]
    fn pure_cube_branch() {
        // B = 2 A Y makes b vanish
        let (p0, c) = setup();
        let theta = 0.5;
        let y = NetGameConstants::new(&p0, &c, theta).unwrap().y_const;
        let p = SystemParams {
            cost_b: 2.0 * p0.cost_a * y,
            ..p0
        };
        let k = NetGameConstants::new(&p, &c, theta).unwrap();
        assert!(k.b_coef.abs() < 1e-12 * k.c_coef.abs());
        let lambda = leader_price(&p, &c, theta).unwrap();
        assert!((lambda - (-k.c_coef).cbrt()).abs() < 1e-10 * lambda);
    }

    #[test]
    fn solve_at_default_split() {
        let p = SystemParams::default();
        for seed in 0..30 {
            let c = sample_channels(&p, seed);
            let eq = solve(&p, &c, DEFAULT_THETA).unwrap();
            assert_eq!(eq.theta, 0.5);
            assert_eq!(eq.scheme_tag, Scheme::NonEnergyTrading);
            let k = NetGameConstants::new(&p, &c, 0.5).unwrap();
            assert!(eq.diagnostics.stationarity_residual.abs() <= 1e-8 * k.c_coef.abs().max(1.0));
            assert!(eq.lambda_price <= k.shutdown_price());
        }
    }

    #[test]
    fn no_trade_above_shutdown() {
        // Marginal cost B above the follower's top willingness to pay.
        let p = SystemParams {
            cost_b: 1e6,
            ..Default::default()
        };
        let c = ChannelRealization::from_gains(p.n_t, 1.0, 1.0);
        let eq = solve(&p, &c, 0.5).unwrap();
        assert_eq!(eq.p_bs, 0.0);
        assert_eq!(eq.u_bs, 0.0);
        assert!(eq.diagnostics.no_trade);
    }
}
