use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar constants describing one scenario.
///
/// Rates are measured in units of `log_base` (bits by default). The closed-form
/// optimizers are stationarity conditions of natural-log utilities, so every
/// marginal-benefit term is scaled by `1 / ln(log_base)`; see [`SystemParams::rate_scale`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    /// BS transmit antennas.
    pub n_t: usize,
    /// Number of eavesdroppers.
    pub k_eves: usize,
    /// Energy-harvesting efficiency in (0, 1).
    pub xi: f64,
    /// Maximum tolerated secrecy outage probability in (0, 1).
    pub eps_outage: f64,
    /// Gain per unit secrecy throughput.
    pub mu: f64,
    /// Quadratic coefficient of the BS energy cost `A x^2 + B x`.
    pub cost_a: f64,
    /// Linear coefficient of the BS energy cost.
    pub cost_b: f64,
    /// Noise plus cellular interference power at the D2D receiver.
    pub sigma_s2: f64,
    /// Variance of the D2D transmitter to eavesdropper coefficient.
    pub gamma_e2: f64,
    /// Variance of the entries of the jamming-projected BS to eavesdropper channel.
    pub delta_e2: f64,
    /// Per-entry variance of the BS to D2D transmitter channel.
    pub h_var: f64,
    /// Variance of the D2D link coefficient.
    pub hs_var: f64,
    /// Logarithm base for every rate.
    pub log_base: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_t: 5,
            k_eves: 2,
            xi: 0.8,
            eps_outage: 0.1,
            mu: 100.0,
            cost_a: 1.0,
            cost_b: 1.0,
            sigma_s2: 1.0,
            gamma_e2: 1.0,
            delta_e2: 1.0,
            h_var: 1.0,
            hs_var: 1.0,
            log_base: 2.0,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must be finite and > 0, got {v}"),
        })
    }
}

fn unit_open(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must lie in (0, 1), got {v}"),
        })
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_t < 2 {
            return Err(Error::InvalidParam {
                name: "n_t",
                reason: format!("need at least 2 antennas, got {}", self.n_t),
            });
        }
        if self.k_eves < 1 {
            return Err(Error::InvalidParam {
                name: "k_eves",
                reason: "need at least one eavesdropper".into(),
            });
        }
        unit_open("xi", self.xi)?;
        unit_open("eps_outage", self.eps_outage)?;
        positive("mu", self.mu)?;
        positive("cost_a", self.cost_a)?;
        positive("cost_b", self.cost_b)?;
        positive("sigma_s2", self.sigma_s2)?;
        positive("gamma_e2", self.gamma_e2)?;
        positive("delta_e2", self.delta_e2)?;
        positive("h_var", self.h_var)?;
        positive("hs_var", self.hs_var)?;
        if !(self.log_base > 1.0 && self.log_base.is_finite()) {
            return Err(Error::InvalidParam {
                name: "log_base",
                reason: format!("must be > 1, got {}", self.log_base),
            });
        }
        Ok(())
    }

    /// Logarithm in the configured base.
    #[inline]
    pub fn log(&self, x: f64) -> f64 {
        x.ln() / self.log_base.ln()
    }

    /// `1 / ln(base)`: converts a natural-log marginal into configured rate units.
    #[inline]
    pub fn rate_scale(&self) -> f64 {
        1.0 / self.log_base.ln()
    }

    /// Jamming dimensions `N_T - 1`.
    #[inline]
    pub fn jam_dims(&self) -> f64 {
        (self.n_t - 1) as f64
    }

    /// Leakage factor `W = [1 - (1-eps)^(1/K)]^(1/(1-N_T)) - 1`.
    ///
    /// `1 + W` is the per-eavesdropper SINR-to-threshold ratio at which the
    /// outage constraint binds exactly.
    pub fn leakage_factor(&self) -> f64 {
        let per_eve = 1.0 - (1.0 - self.eps_outage).powf(1.0 / self.k_eves as f64);
        per_eve.powf(-1.0 / self.jam_dims()) - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SystemParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_single_antenna() {
        let p = SystemParams {
            n_t: 1,
            ..Default::default()
        };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "n_t", .. })));
    }

    #[test]
    fn rejects_out_of_range_fractions() {
        for (xi, eps) in [(0.0, 0.1), (1.0, 0.1), (0.5, 0.0), (0.5, 1.0)] {
            let p = SystemParams {
                xi,
                eps_outage: eps,
                ..Default::default()
            };
            assert!(p.validate().is_err());
        }
        let p = SystemParams {
            cost_b: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn leakage_factor_collapses_for_two_antennas_one_eve() {
        let p = SystemParams {
            n_t: 2,
            k_eves: 1,
            eps_outage: 0.5,
            ..Default::default()
        };
        assert!((p.leakage_factor() - 1.0).abs() < 1e-15);
    }
}
