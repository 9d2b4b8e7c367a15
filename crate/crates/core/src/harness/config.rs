//! Flat TOML configuration: one key per `SystemParams` / `SweepSpec` field,
//! plus `seed`, `scheme` and `theta` for single-scenario commands.
//!
//! ```toml
//! n_t = 5
//! k_eves = 2
//! xi = 0.8
//! variable = "xi"
//! values = [0.2, 0.4, 0.6, 0.8]
//! schemes = ["energy_trading", "social_welfare"]
//! n_channel_draws = 200
//! ```

use std::path::Path;

use serde::Deserialize;

use super::sweep::{SweepSpec, SweepVariable, DEFAULT_CHANNEL_DRAWS};
use crate::error::{Error, Result};
use crate::game::Scheme;
use crate::model::SystemParams;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct NonParamKeys {
    variable: Option<SweepVariable>,
    values: Option<Vec<f64>>,
    schemes: Option<Vec<Scheme>>,
    n_channel_draws: Option<usize>,
    base_seed: Option<u64>,
    fixed_theta: Option<f64>,
    seed: Option<u64>,
    scheme: Option<Scheme>,
    theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub variable: Option<SweepVariable>,
    pub values: Option<Vec<f64>>,
    pub schemes: Option<Vec<Scheme>>,
    pub n_channel_draws: Option<usize>,
    pub base_seed: Option<u64>,
    pub fixed_theta: Option<f64>,
    pub seed: Option<u64>,
    pub scheme: Option<Scheme>,
    pub theta: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_parts(SystemParams::default(), NonParamKeys::default())
    }
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    fn from_parts(params: SystemParams, rest: NonParamKeys) -> Self {
        Self {
            params,
            variable: rest.variable,
            values: rest.values,
            schemes: rest.schemes,
            n_channel_draws: rest.n_channel_draws,
            base_seed: rest.base_seed,
            fixed_theta: rest.fixed_theta,
            seed: rest.seed,
            scheme: rest.scheme,
            theta: rest.theta,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(config_err)?;
        let mut params_table = toml::Table::try_from(SystemParams::default()).map_err(config_err)?;
        let mut rest = toml::Table::new();
        for (k, v) in table {
            if params_table.contains_key(&k) {
                params_table.insert(k, v);
            } else {
                rest.insert(k, v);
            }
        }
        let params: SystemParams = params_table.try_into().map_err(config_err)?;
        let rest: NonParamKeys = rest.try_into().map_err(config_err)?;
        Ok(Self::from_parts(params, rest))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Sweep description; `variable` and `values` are required.
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let variable = self
            .variable
            .ok_or_else(|| Error::Config("sweep needs `variable`".into()))?;
        let values = self
            .values
            .clone()
            .ok_or_else(|| Error::Config("sweep needs `values`".into()))?;
        let spec = SweepSpec {
            variable,
            values,
            schemes: self.schemes.clone().unwrap_or_else(|| Scheme::ALL.to_vec()),
            n_channel_draws: self.n_channel_draws.unwrap_or(DEFAULT_CHANNEL_DRAWS),
            base_seed: self.base_seed.unwrap_or(0),
            fixed_theta: self.fixed_theta,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let cfg = RunConfig::from_toml_str(
            r#"
            n_t = 4
            xi = 0.6
            mu = 50
            variable = "k_eves"
            values = [1, 2, 3]
            schemes = ["energy_trading", "non_energy_trading"]
            n_channel_draws = 10
            base_seed = 7
            "#,
        )
        .unwrap();
        assert_eq!(cfg.params.n_t, 4);
        assert_eq!(cfg.params.xi, 0.6);
        assert_eq!(cfg.params.mu, 50.0);
        assert_eq!(cfg.params.k_eves, 2);
        let spec = cfg.sweep_spec().unwrap();
        assert_eq!(spec.variable, SweepVariable::KEves);
        assert_eq!(spec.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(spec.schemes.len(), 2);
        assert_eq!(spec.base_seed, 7);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::from_toml_str("n_tx = 4").is_err());
        assert!(RunConfig::from_toml_str("xi = \"high\"").is_err());
        assert!(RunConfig::from_toml_str("scheme = \"auction\"").is_err());
        let cfg = RunConfig::from_toml_str("variable = \"xi\"\nvalues = [0.5, 0.3]").unwrap();
        assert!(cfg.sweep_spec().is_err());
        assert!(RunConfig::default().sweep_spec().is_err());
    }
}
