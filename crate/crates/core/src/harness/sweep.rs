//! One-dimensional parameter sweeps over the three schemes.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{EquilibriumPoint, Scheme};
use crate::model::{sample_channels, SystemParams};
use crate::{energy_trading, non_energy_trading, social_welfare};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Theta,
    Xi,
    DeltaE2,
    KEves,
    Mu,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta",
            SweepVariable::Xi => "xi",
            SweepVariable::DeltaE2 => "delta_e2",
            SweepVariable::KEves => "k_eves",
            SweepVariable::Mu => "mu",
        }
    }

    fn check(&self, v: f64) -> Result<()> {
        let ok = match self {
            SweepVariable::Theta | SweepVariable::Xi => v > 0.0 && v < 1.0,
            SweepVariable::DeltaE2 | SweepVariable::Mu => v > 0.0 && v.is_finite(),
            SweepVariable::KEves => v >= 1.0 && v.fract() == 0.0 && v < 1e6,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("sweep value {v} is out of range for `{self}`")))
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SweepVariable::Theta),
            "xi" => Ok(SweepVariable::Xi),
            "delta_e2" => Ok(SweepVariable::DeltaE2),
            "k_eves" => Ok(SweepVariable::KEves),
            "mu" => Ok(SweepVariable::Mu),
            other => Err(Error::Config(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub n_channel_draws: usize,
    pub base_seed: u64,
    /// Time split for schemes run at a fixed split. Energy trading and social
    /// welfare optimize the split when this is `None`; the non-energy-trading
    /// scheme falls back to 0.5.
    pub fixed_theta: Option<f64>,
}

pub const DEFAULT_CHANNEL_DRAWS: usize = 200;

impl SweepSpec {
    pub fn new(variable: SweepVariable, values: Vec<f64>) -> Self {
        Self {
            variable,
            values,
            schemes: Scheme::ALL.to_vec(),
            n_channel_draws: DEFAULT_CHANNEL_DRAWS,
            base_seed: 0,
            fixed_theta: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("sweep values must be strictly increasing".into()));
        }
        for &v in &self.values {
            self.variable.check(v)?;
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("sweep needs at least one scheme".into()));
        }
        if self.n_channel_draws == 0 {
            return Err(Error::Config("n_channel_draws must be at least 1".into()));
        }
        if let Some(t) = self.fixed_theta {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Config(format!("fixed_theta {t} is outside (0, 1)")));
            }
        }
        Ok(())
    }

    fn apply(&self, params: &SystemParams, value: f64) -> SystemParams {
        let mut p = *params;
        match self.variable {
            SweepVariable::Theta => {}
            SweepVariable::Xi => p.xi = value,
            SweepVariable::DeltaE2 => p.delta_e2 = value,
            SweepVariable::KEves => p.k_eves = value as usize,
            SweepVariable::Mu => p.mu = value,
        }
        p
    }

    fn theta_for(&self, value: f64) -> Option<f64> {
        match self.variable {
            SweepVariable::Theta => Some(value),
            _ => self.fixed_theta,
        }
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Stat {
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Stat { mean, std }
    }
}

pub const METRICS: [&str; 8] = [
    "u_leader",
    "u_bs",
    "welfare",
    "payment",
    "p_bs",
    "p_s",
    "theta_opt",
    "secrecy_throughput",
];

const THETA_OPT: usize = 6;

/// Metrics of one solved draw and whether it was unprofitable.
type DrawOutcome = ([f64; 8], bool);

fn metrics_of(pt: &EquilibriumPoint) -> [f64; 8] {
    [
        pt.u_leader,
        pt.u_bs,
        pt.diagnostics.welfare,
        pt.payment,
        pt.p_bs,
        pt.p_s,
        pt.theta,
        pt.diagnostics.secrecy_throughput,
    ]
}

/// Aggregate over the channel draws of one (value, scheme) pair. Statistics
/// cover the draws that solved; the rest are counted in `n_failed`.
///
/// When θ is optimized, `theta_opt` is averaged over profitable draws only:
/// on a draw where the leader loses money at every split the maximizer sits
/// on a boundary of the θ interval and carries no information.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub scheme: Scheme,
    pub n_draws: usize,
    pub n_failed: usize,
    pub n_unprofitable: usize,
    pub stats: [Stat; 8],
}

impl SweepRow {
    pub fn status(&self) -> &'static str {
        match self.n_failed {
            0 => "ok",
            n if n == self.n_draws => "infeasible",
            _ => "partial",
        }
    }

    pub fn metric(&self, name: &str) -> Stat {
        let i = METRICS
            .iter()
            .position(|m| *m == name)
            .unwrap_or_else(|| panic!("unknown metric {name}"));
        self.stats[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Means of `metric` for `scheme` in sweep order.
    pub fn series(&self, scheme: Scheme, metric: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme)
            .map(|r| r.metric(metric).mean)
            .collect()
    }

    pub fn all_infeasible(&self) -> bool {
        self.rows.iter().all(|r| r.n_failed == r.n_draws)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "variable".to_string(),
            "value".into(),
            "scheme".into(),
            "status".into(),
            "n_draws".into(),
            "n_failed".into(),
            "n_unprofitable".into(),
        ];
        for m in METRICS {
            header.push(format!("{m}_mean"));
            header.push(format!("{m}_std"));
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                self.variable.to_string(),
                r.value.to_string(),
                r.scheme.to_string(),
                r.status().to_string(),
                r.n_draws.to_string(),
                r.n_failed.to_string(),
                r.n_unprofitable.to_string(),
            ];
            for s in &r.stats {
                rec.push(s.mean.to_string());
                rec.push(s.std.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Solves one scheme on one channel draw.
pub fn solve_scheme(
    scheme: Scheme,
    params: &SystemParams,
    chan: &crate::model::ChannelRealization,
    theta: Option<f64>,
) -> Result<EquilibriumPoint> {
    match (scheme, theta) {
        (Scheme::EnergyTrading, None) => energy_trading::solve(params, chan),
        (Scheme::EnergyTrading, Some(t)) => energy_trading::solve_at_theta(params, chan, t),
        (Scheme::SocialWelfare, None) => social_welfare::solve(params, chan),
        (Scheme::SocialWelfare, Some(t)) => social_welfare::solve_at_theta(params, chan, t),
        (Scheme::NonEnergyTrading, t) => {
            non_energy_trading::solve(params, chan, t.unwrap_or(non_energy_trading::DEFAULT_THETA))
        }
    }
}

/// Runs every (value, scheme) pair over `n_channel_draws` channel draws with
/// seeds `base_seed + i`. The same seeds are used at every sweep value, so
/// neighbouring points are paired. Work is parallel; results are gathered in
/// sweep order.
pub fn run_sweep(spec: &SweepSpec, params: &SystemParams) -> Result<SweepResult> {
    spec.validate()?;
    params.validate()?;
    let mut rows = Vec::with_capacity(spec.values.len() * spec.schemes.len());
    for &value in &spec.values {
        let p = spec.apply(params, value);
        p.validate()?;
        let theta = spec.theta_for(value);
        let per_draw: Vec<Vec<Option<DrawOutcome>>> = (0..spec.n_channel_draws)
            .into_par_iter()
            .map(|i| {
                let chan = sample_channels(&p, spec.base_seed.wrapping_add(i as u64));
                spec.schemes
                    .iter()
                    .map(|&s| {
                        solve_scheme(s, &p, &chan, theta)
                            .ok()
                            .map(|pt| (metrics_of(&pt), pt.diagnostics.unprofitable))
                    })
                    .collect()
            })
            .collect();
        for (j, &scheme) in spec.schemes.iter().enumerate() {
            let ok: Vec<DrawOutcome> = per_draw.iter().filter_map(|d| d[j]).collect();
            let optimized = theta.is_none() && scheme != Scheme::NonEnergyTrading;
            let mut stats = [Stat::default(); 8];
            for (m, stat) in stats.iter_mut().enumerate() {
                let xs: Vec<f64> = ok
                    .iter()
                    .filter(|(_, unprofitable)| !(optimized && m == THETA_OPT && *unprofitable))
                    .map(|(r, _)| r[m])
                    .collect();
                *stat = Stat::of(&xs);
            }
            rows.push(SweepRow {
                value,
                scheme,
                n_draws: spec.n_channel_draws,
                n_failed: spec.n_channel_draws - ok.len(),
                n_unprofitable: ok.iter().filter(|(_, u)| *u).count(),
                stats,
            });
        }
    }
    Ok(SweepResult {
        variable: spec.variable,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = SweepSpec::new(SweepVariable::Xi, vec![0.2, 0.1]);
        assert!(s.validate().is_err());
        s.values = vec![0.5, 1.2];
        assert!(s.validate().is_err());
        s.values = vec![0.2, 0.4];
        s.validate().unwrap();
        s.n_channel_draws = 0;
        assert!(s.validate().is_err());
        let k = SweepSpec::new(SweepVariable::KEves, vec![1.0, 2.5]);
        assert!(k.validate().is_err());
    }

    #[test]
    fn row_count_and_determinism() {
        let mut s = SweepSpec::new(SweepVariable::KEves, vec![1.0, 2.0, 3.0]);
        s.n_channel_draws = 4;
        let p = SystemParams::default();
        let a = run_sweep(&s, &p).unwrap();
        assert_eq!(a.rows.len(), 9);
        let b = run_sweep(&s, &p).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with("variable,value,scheme,status,n_draws,n_failed,n_unprofitable,u_leader_mean,"));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn theta_opt_averages_profitable_draws_only() {
        let p = SystemParams::default();
        let mut s = SweepSpec::new(SweepVariable::Xi, vec![0.8]);
        s.schemes = vec![Scheme::EnergyTrading];
        s.n_channel_draws = 24;
        let row = run_sweep(&s, &p).unwrap().rows[0].clone();
        let mut thetas = Vec::new();
        let mut unprofitable = 0;
        for i in 0..24 {
            let c = sample_channels(&p, i);
            if let Ok(e) = energy_trading::solve(&p, &c) {
                if e.diagnostics.unprofitable {
                    unprofitable += 1;
                } else {
                    thetas.push(e.theta);
                }
            }
        }
        assert_eq!(row.n_unprofitable, unprofitable);
        let mean = thetas.iter().sum::<f64>() / thetas.len() as f64;
        assert!((row.metric("theta_opt").mean - mean).abs() < 1e-12);
    }
}
