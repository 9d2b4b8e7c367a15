//! Shared strategy-profile bookkeeping for the three schemes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::energy_trading::inner_optima;
use crate::error::{check_nonneg, check_theta, Error, Result};
use crate::model::{ChannelRealization, SystemParams};
use crate::secrecy::{outage_closed_form, secrecy_rate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    EnergyTrading,
    NonEnergyTrading,
    SocialWelfare,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::EnergyTrading, Scheme::NonEnergyTrading, Scheme::SocialWelfare];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::EnergyTrading => "energy_trading",
            Scheme::NonEnergyTrading => "non_energy_trading",
            Scheme::SocialWelfare => "social_welfare",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "energy_trading" => Ok(Scheme::EnergyTrading),
            "non_energy_trading" => Ok(Scheme::NonEnergyTrading),
            "social_welfare" => Ok(Scheme::SocialWelfare),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// First-order condition residual of the scheme's closed-form step.
    pub stationarity_residual: f64,
    /// Closed-form outage at `(p_s, p_bs, rho_e)`; equals `eps` when transmitting.
    pub outage_at_point: f64,
    /// `mu T_s - theta (A P^2 + B P)`; the objective for the social scheme.
    pub welfare: f64,
    pub secrecy_throughput: f64,
    /// BS power is zero: no energy changes hands.
    pub no_trade: bool,
    /// The solver's maximizer leaves the D2D side with negative utility.
    pub unprofitable: bool,
    /// Energy trading only: distance between the f/g crossing at frozen
    /// price and the nested optimum, when the crossing is bracketed.
    pub crossing_gap: Option<f64>,
}

/// A solved operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub theta: f64,
    pub lambda_price: f64,
    pub p_bs: f64,
    pub p_s: f64,
    pub rho_e: f64,
    pub u_leader: f64,
    pub u_bs: f64,
    pub payment: f64,
    pub scheme_tag: Scheme,
    pub diagnostics: Diagnostics,
}

impl EquilibriumPoint {
    /// `key=value` lines, one per field, in a fixed order.
    pub fn to_key_values(&self) -> String {
        let d = &self.diagnostics;
        let mut lines = vec![
            format!("scheme={}", self.scheme_tag),
            format!("theta={}", self.theta),
            format!("lambda_price={}", self.lambda_price),
            format!("p_bs={}", self.p_bs),
            format!("p_s={}", self.p_s),
            format!("rho_e={}", self.rho_e),
            format!("u_leader={}", self.u_leader),
            format!("u_bs={}", self.u_bs),
            format!("payment={}", self.payment),
            format!("welfare={}", d.welfare),
            format!("secrecy_throughput={}", d.secrecy_throughput),
            format!("outage={}", d.outage_at_point),
            format!("stationarity_residual={}", d.stationarity_residual),
            format!("no_trade={}", d.no_trade),
            format!("unprofitable={}", d.unprofitable),
        ];
        if let Some(g) = d.crossing_gap {
            lines.push(format!("crossing_gap={g}"));
        }
        lines.join("\n")
    }
}

/// `lambda theta P_BS ||h||^2`.
pub fn payment(chan: &ChannelRealization, theta: f64, lambda: f64, p_bs: f64) -> f64 {
    lambda * theta * p_bs * chan.h_norm2
}

/// Quadratic energy cost per unit time, `A x^2 + B x`.
pub fn energy_cost(params: &SystemParams, p_bs: f64) -> f64 {
    params.cost_a * p_bs * p_bs + params.cost_b * p_bs
}

/// BS profit `theta (lambda P_BS ||h||^2 - A P_BS^2 - B P_BS)`.
pub fn bs_utility(params: &SystemParams, chan: &ChannelRealization, theta: f64, lambda: f64, p_bs: f64) -> f64 {
    theta * (lambda * p_bs * chan.h_norm2 - energy_cost(params, p_bs))
}

/// Secrecy throughput at `(theta, P_BS)` with the D2D side's optimal
/// `(p_s, rho_e)`.
pub fn optimal_throughput(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> Result<f64> {
    let (p_s, rho_e) = inner_optima(params, chan, theta, p_bs)?;
    Ok((1.0 - theta) * secrecy_rate(params, chan, p_s, rho_e))
}

/// D2D utility `mu T_s - payment` with `(p_s, rho_e)` at their optimum for the
/// given `(theta, P_BS)`.
pub fn leader_utility(
    params: &SystemParams,
    chan: &ChannelRealization,
    theta: f64,
    lambda: f64,
    p_bs: f64,
) -> Result<f64> {
    Ok(params.mu * optimal_throughput(params, chan, theta, p_bs)? - payment(chan, theta, lambda, p_bs))
}

/// Assembles an [`EquilibriumPoint`] from the strategic variables.
pub(crate) fn assemble(
    params: &SystemParams,
    chan: &ChannelRealization,
    scheme: Scheme,
    theta: f64,
    lambda: f64,
    p_bs: f64,
    stationarity_residual: f64,
) -> Result<EquilibriumPoint> {
    check_theta(theta)?;
    check_nonneg("lambda_price", lambda)?;
    check_nonneg("p_bs", p_bs)?;
    let (p_s, rho_e) = inner_optima(params, chan, theta, p_bs)?;
    let throughput = (1.0 - theta) * secrecy_rate(params, chan, p_s, rho_e);
    let pay = payment(chan, theta, lambda, p_bs);
    let u_leader = params.mu * throughput - pay;
    let u_bs = bs_utility(params, chan, theta, lambda, p_bs);
    let outage = if p_s > 0.0 {
        outage_closed_form(params, p_s, p_bs, rho_e)?
    } else {
        0.0
    };
    Ok(EquilibriumPoint {
        theta,
        lambda_price: lambda,
        p_bs,
        p_s,
        rho_e,
        u_leader,
        u_bs,
        payment: pay,
        scheme_tag: scheme,
        diagnostics: Diagnostics {
            stationarity_residual,
            outage_at_point: outage,
            welfare: params.mu * throughput - theta * energy_cost(params, p_bs),
            secrecy_throughput: throughput,
            no_trade: p_bs == 0.0,
            unprofitable: u_leader < 0.0,
            crossing_gap: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!(
            "non-energy-trading".parse::<Scheme>().unwrap(),
            Scheme::NonEnergyTrading
        );
        assert!("barter".parse::<Scheme>().is_err());
    }

    #[test]
    fn utilities_split_welfare() {
        let p = SystemParams::default();
        let c = ChannelRealization::from_gains(p.n_t, 3.0, 2.0);
        for &(theta, lambda, p_bs) in &[(0.3, 1.2, 4.0), (0.7, 0.0, 2.5), (0.5, 10.0, 0.0)] {
            let pt = assemble(&p, &c, Scheme::EnergyTrading, theta, lambda, p_bs, 0.0).unwrap();
            let sum = pt.u_leader + pt.u_bs;
            assert!((pt.diagnostics.welfare - sum).abs() <= 1e-10 * sum.abs().max(1.0));
        }
    }
}
