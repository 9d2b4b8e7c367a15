//! Acceptance suite: closed forms against brute-force oracles, Monte-Carlo
//! outage, equilibrium deviation checks, the welfare identity, averaged trend
//! checks and root-solver residuals.
//!
//! Every oracle objective below is written out from the model definitions
//! rather than through the solver modules, so a slip in a solver's algebra
//! shows up as a gap.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{bs_utility, leader_utility, EquilibriumPoint, Scheme};
use crate::harness::sweep::{run_sweep, SweepResult, SweepSpec, SweepVariable};
use crate::model::{sample_channels, ChannelRealization, SystemParams};
use crate::numerics::{
    cubic_tolerance, depressed_cubic, expand_upper_bracket, grid_refine_maximize, solve_depressed_cubic_positive,
    solve_quadratic_positive,
};
use crate::secrecy::{outage_closed_form, outage_monte_carlo, threshold_for_outage};
use crate::{energy_trading, non_energy_trading, social_welfare};

pub const ORACLE_REL_TOL: f64 = 1e-6;
pub const ORACLE_ABS_TOL: f64 = 1e-9;
pub const OUTAGE_SIGMAS: f64 = 4.0;
pub const OUTAGE_EPS_TOL: f64 = 1e-9;
pub const DEVIATION_TOL: f64 = 1e-8;
pub const WELFARE_IDENTITY_TOL: f64 = 1e-10;
/// Relative slack for the welfare ordering, which compares two numerical
/// searches over the time split.
pub const WELFARE_ORDER_TOL: f64 = 1e-9;
pub const TREND_TOL: f64 = 1e-9;
pub const ROOT_TOL: f64 = 1e-8;

const ORACLE_GRID_N: usize = 4000;
const ORACLE_REFINE_TOL: f64 = 1e-13;
const MAX_SCENARIO_TRIES: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub oracle_scenarios: usize,
    pub outage_points: usize,
    pub outage_points_required: usize,
    pub mc_trials: u64,
    pub equilibrium_scenarios: usize,
    pub deviations: usize,
    pub trend_draws: usize,
    pub root_draws: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            oracle_scenarios: 50,
            outage_points: 20,
            outage_points_required: 19,
            mc_trials: 1_000_000,
            equilibrium_scenarios: 20,
            deviations: 100,
            trend_draws: 200,
            root_draws: 1000,
        }
    }
}

/// Outcome of one criterion. `worst` is the largest observed gap in the units
/// the criterion is judged in, `notes` lists failing cases and sub-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str, tolerance: f64) -> Self {
        Self {
            id,
            name,
            passed: false,
            checks: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
            notes: Vec::new(),
        }
    }

    /// Records a gap that must not exceed `tol`.
    fn record(&mut self, gap: f64, tol: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if gap.is_nan() || gap > self.worst {
            self.worst = if gap.is_nan() { f64::INFINITY } else { gap };
        }
        if !(gap <= tol) {
            self.failures += 1;
            if self.notes.len() < 20 {
                self.notes.push(format!("{} (gap {gap:.3e})", what()));
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures += 1;
        if self.notes.len() < 20 {
            self.notes.push(what);
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.checks > 0 && self.failures == 0;
        self
    }

    /// One summary line, e.g. `PASS [1] oracle equivalence: 250 checks, ...`.
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} checks, {} failures, worst {:.3e} (tol {:.0e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.failures,
            self.worst,
            self.tolerance
        )
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.line())?;
        for n in &self.notes {
            writeln!(f, "    {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceReport {
    pub criteria: Vec<CriterionResult>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.criteria.iter().map(|c| c.line()).collect()
    }
}

impl fmt::Display for AcceptanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            write!(f, "{c}")?;
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        writeln!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

/// Runs every criterion. `params` is the default scenario for the trend
/// suite; `n_scenarios` is the number of random scenarios for the oracle and
/// welfare checks (at least 20).
pub fn run_acceptance(params: &SystemParams, n_scenarios: usize, seed: u64) -> Result<AcceptanceReport> {
    if n_scenarios < 20 {
        return Err(Error::InvalidParam {
            name: "n_scenarios",
            reason: format!("{n_scenarios} < 20"),
        });
    }
    params.validate()?;
    let cfg = AcceptanceConfig {
        seed,
        oracle_scenarios: n_scenarios,
        ..Default::default()
    };
    Ok(AcceptanceReport {
        criteria: vec![
            oracle_equivalence(&cfg),
            outage_consistency(&cfg),
            equilibrium_conditions(&cfg),
            welfare_identity(&cfg),
            trend_suite(params, &cfg),
            root_residuals(&cfg),
        ],
    })
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp()
}

/// Random scenario: `N_T` in 2..=8, `K` in 1..=4, the cost, noise, jamming,
/// channel-variance and utility weights log-uniform on `[0.1, 10]`, `xi`
/// log-uniform on `[0.1, 0.95]` and `eps` log-uniform on `[0.01, 0.5]`.
pub fn random_scenario(rng: &mut impl Rng) -> (SystemParams, ChannelRealization) {
    let params = SystemParams {
        n_t: rng.random_range(2..=8),
        k_eves: rng.random_range(1..=4),
        xi: log_uniform(rng, 0.1, 0.95),
        eps_outage: log_uniform(rng, 0.01, 0.5),
        mu: log_uniform(rng, 0.1, 10.0),
        cost_a: log_uniform(rng, 0.1, 10.0),
        cost_b: log_uniform(rng, 0.1, 10.0),
        sigma_s2: log_uniform(rng, 0.1, 10.0),
        gamma_e2: log_uniform(rng, 0.1, 10.0),
        delta_e2: log_uniform(rng, 0.1, 10.0),
        h_var: log_uniform(rng, 0.1, 10.0),
        hs_var: log_uniform(rng, 0.1, 10.0),
        ..Default::default()
    };
    let chan = sample_channels(&params, rng.random());
    (params, chan)
}

// ---------------------------------------------------------------------------
// Reference model, written out independently of the solver modules.

struct Reference<'a> {
    p: &'a SystemParams,
    h2: f64,
    hs2: f64,
}

impl<'a> Reference<'a> {
    fn new(p: &'a SystemParams, chan: &ChannelRealization) -> Self {
        Self {
            p,
            h2: chan.h_norm2,
            hs2: chan.h_s_abs2,
        }
    }

    fn log(&self, x: f64) -> f64 {
        x.ln() / self.p.log_base.ln()
    }

    /// Leakage threshold meeting the outage budget with equality.
    fn rho(&self, theta: f64) -> f64 {
        let p = self.p;
        let n = p.n_t as f64;
        let w = (1.0 - (1.0 - p.eps_outage).powf(1.0 / p.k_eves as f64)).powf(1.0 / (1.0 - n)) - 1.0;
        let p_s_per_pbs = theta * p.xi * self.h2 / (1.0 - theta);
        w * p_s_per_pbs * p.gamma_e2 * (n - 1.0) / p.delta_e2
    }

    /// `mu (1 - theta) [log(1 + SNR) - log(1 + rho)]` with the whole harvested
    /// energy spent in the transmit phase.
    fn benefit(&self, theta: f64, p_bs: f64) -> f64 {
        let p = self.p;
        let p_s = theta * p.xi * p_bs * self.h2 / (1.0 - theta);
        let snr = p_s * self.hs2 / p.sigma_s2;
        p.mu * (1.0 - theta) * (self.log(1.0 + snr) - self.log(1.0 + self.rho(theta)))
    }

    fn cost(&self, theta: f64, p_bs: f64) -> f64 {
        theta * (self.p.cost_a * p_bs * p_bs + self.p.cost_b * p_bs)
    }

    fn bs_profit(&self, theta: f64, lambda: f64, p_bs: f64) -> f64 {
        lambda * theta * p_bs * self.h2 - self.cost(theta, p_bs)
    }

    fn d2d_profit(&self, theta: f64, lambda: f64, p_bs: f64) -> f64 {
        self.benefit(theta, p_bs) - lambda * theta * p_bs * self.h2
    }
}

/// Relative gap, with the denominator floored so that near zero the
/// comparison becomes absolute at `ORACLE_ABS_TOL`.
fn close(x: f64, oracle: f64) -> f64 {
    (x - oracle).abs() / oracle.abs().max(ORACLE_ABS_TOL / ORACLE_REL_TOL)
}

/// Maximizes a concave `objective` on `[lo, inf)` by bracketing then grid+refine.
fn oracle_argmax<F>(objective: F, lo: f64, start_width: f64) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let shifted = |x: f64| objective(lo + x);
    let hi = expand_upper_bracket(shifted, start_width, 200);
    lo + grid_refine_maximize(
        |x| objective(lo + x),
        0.0,
        hi,
        ORACLE_GRID_N,
        ORACLE_REFINE_TOL * hi.max(1.0),
    )
    .argmax
}

// ---------------------------------------------------------------------------
// Criterion 1.

/// Each closed-form optimizer against a grid-and-refine maximization of the
/// corresponding utility.
pub fn oracle_equivalence(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(1, "oracle equivalence", ORACLE_REL_TOL);
    let mut rng = stream(cfg.seed, 1);
    for s in 0..cfg.oracle_scenarios {
        let (p, chan) = random_scenario(&mut rng);
        let theta = rng.random_range(0.05..0.95);
        let r = Reference::new(&p, &chan);
        let b_floor = p.cost_b / r.h2;

        // BS best response to a price in the energy-trading game.
        let lambda = b_floor * log_uniform(&mut rng, 1.1, 20.0);
        let closed = energy_trading::follower_power(&p, &chan, lambda);
        let oracle = oracle_argmax(|x| r.bs_profit(theta, lambda, x), 0.0, 1.0);
        res.record(close(closed, oracle), ORACLE_REL_TOL, || {
            format!("scenario {s}: BS best response {closed} vs oracle {oracle}")
        });

        // Leader price in the energy-trading game: the follower buys nothing
        // below B / ||h||^2, so the leader's search starts there.
        match energy_trading::optimal_price(&p, &chan, theta) {
            Ok(closed) => {
                let closed = closed.max(b_floor);
                let u = |l: f64| {
                    let pb = (l * r.h2 - p.cost_b) / (2.0 * p.cost_a);
                    r.d2d_profit(theta, l, pb)
                };
                let oracle = oracle_argmax(u, b_floor, b_floor);
                res.record(close(closed, oracle), ORACLE_REL_TOL, || {
                    format!("scenario {s}: energy-trading price {closed} vs oracle {oracle}")
                });
            }
            Err(e) => res.fail(format!("scenario {s}: energy-trading price: {e}")),
        }

        // D2D demand in the non-energy-trading game at a random price.
        let net = non_energy_trading::NetGameConstants::new(&p, &chan, theta).expect("valid theta");
        let lambda = net.shutdown_price() * rng.random_range(0.05..0.95);
        match non_energy_trading::follower_power_demand(&p, &chan, theta, lambda) {
            Ok(closed) => {
                let oracle = oracle_argmax(|x| r.d2d_profit(theta, lambda, x), 0.0, 1.0);
                res.record(close(closed, oracle), ORACLE_REL_TOL, || {
                    format!("scenario {s}: D2D demand {closed} vs oracle {oracle}")
                });
            }
            Err(e) => res.fail(format!("scenario {s}: D2D demand: {e}")),
        }

        // BS price in the non-energy-trading game, searched on (0, 10 X / Y]
        // with the follower's clamped demand.
        match non_energy_trading::solve(&p, &chan, theta) {
            Ok(eq) => {
                let x = p.mu * (1.0 - theta) / (p.log_base.ln() * theta * r.h2);
                let y = (1.0 - theta) * p.sigma_s2 / (p.xi * theta * r.h2 * r.hs2);
                let shut = x / y;
                let u = |l: f64| {
                    let demand = (x / l - y).max(0.0);
                    r.bs_profit(theta, l, demand)
                };
                let lo = shut * 1e-9;
                let rep = grid_refine_maximize(u, lo, 10.0 * shut, ORACLE_GRID_N, ORACLE_REFINE_TOL * shut);
                // Above the shutdown price every price earns zero; the
                // solver reports the shutdown price itself.
                let oracle = if rep.value <= 0.0 { shut } else { rep.argmax };
                res.record(close(eq.lambda_price, oracle), ORACLE_REL_TOL, || {
                    format!("scenario {s}: BS price {} vs oracle {oracle}", eq.lambda_price)
                });
            }
            Err(e) => res.fail(format!("scenario {s}: BS price: {e}")),
        }

        // Welfare-maximizing BS power.
        match social_welfare::optimal_power(&p, &chan, theta) {
            Ok(closed) => {
                let oracle = oracle_argmax(|x| r.benefit(theta, x) - r.cost(theta, x), 0.0, 1.0);
                res.record(close(closed, oracle), ORACLE_REL_TOL, || {
                    format!("scenario {s}: welfare power {closed} vs oracle {oracle}")
                });
            }
            Err(e) => res.fail(format!("scenario {s}: welfare power: {e}")),
        }
    }
    res.finish()
}

// ---------------------------------------------------------------------------
// Criterion 2.

/// Closed-form outage against Monte Carlo on random points, and the optimal
/// leakage threshold landing exactly on the outage budget.
pub fn outage_consistency(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(2, "outage consistency", OUTAGE_SIGMAS);
    let mut rng = stream(cfg.seed, 2);
    let mut within = 0;
    let mut mc_notes = Vec::new();
    for i in 0..cfg.outage_points {
        let (p, _) = random_scenario(&mut rng);
        let p_s = log_uniform(&mut rng, 0.1, 10.0);
        let p_bs = log_uniform(&mut rng, 0.1, 10.0);
        let target = rng.random_range(0.05..0.95);
        let rho = threshold_for_outage(&p, p_s, p_bs, target);
        let closed = match outage_closed_form(&p, p_s, p_bs, rho) {
            Ok(v) => v,
            Err(e) => {
                mc_notes.push(format!("point {i}: closed form: {e}"));
                continue;
            }
        };
        let mc = match outage_monte_carlo(&p, p_s, p_bs, rho, cfg.mc_trials, rng.random()) {
            Ok(v) => v,
            Err(e) => {
                mc_notes.push(format!("point {i}: Monte Carlo: {e}"));
                continue;
            }
        };
        let se = (closed * (1.0 - closed) / cfg.mc_trials as f64).sqrt();
        let z = (mc.estimate - closed).abs() / se;
        res.worst = res.worst.max(z);
        if z <= OUTAGE_SIGMAS {
            within += 1;
        } else {
            mc_notes.push(format!(
                "point {i}: closed {closed:.6} vs MC {:.6} ({z:.2} se)",
                mc.estimate
            ));
        }
    }
    res.checks += 1;
    if within < cfg.outage_points_required {
        res.failures += 1;
    }
    res.notes.push(format!(
        "Monte Carlo within {OUTAGE_SIGMAS} se on {within}/{} points (need {})",
        cfg.outage_points, cfg.outage_points_required
    ));
    res.notes.extend(mc_notes);

    let mut worst_eps = 0.0f64;
    let eps_failures_before = res.failures;
    for s in 0..cfg.oracle_scenarios {
        let (p, chan) = random_scenario(&mut rng);
        let theta = rng.random_range(0.05..0.95);
        let p_bs = log_uniform(&mut rng, 0.1, 10.0);
        let r = Reference::new(&p, &chan);
        let p_s = theta * p.xi * p_bs * chan.h_norm2 / (1.0 - theta);
        let rho = r.rho(theta);
        res.checks += 1;
        match outage_closed_form(&p, p_s, p_bs, rho) {
            Ok(v) => {
                let gap = (v - p.eps_outage).abs();
                worst_eps = worst_eps.max(gap);
                if !(gap <= OUTAGE_EPS_TOL) {
                    res.failures += 1;
                    res.notes.push(format!(
                        "scenario {s}: outage at optimal threshold {v} vs eps {}",
                        p.eps_outage
                    ));
                }
            }
            Err(e) => {
                res.failures += 1;
                res.notes.push(format!("scenario {s}: {e}"));
            }
        }
    }
    res.notes.push(format!(
        "outage at the optimal threshold equals eps on {}/{} scenarios, worst gap {worst_eps:.3e} (tol {OUTAGE_EPS_TOL:.0e})",
        cfg.oracle_scenarios - (res.failures - eps_failures_before),
        cfg.oracle_scenarios
    ));
    res.finish()
}

// ---------------------------------------------------------------------------
// Criterion 3.

/// Draws random scenarios until `scheme` has a feasible equilibrium at which
/// the deciding side does not lose money. Deviating to zero power earns zero,
/// so a loss-making point is trivially beaten by opting out; those points
/// are counted and skipped.
fn equilibrium_scenarios(
    scheme: Scheme,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<(SystemParams, ChannelRealization, EquilibriumPoint)>, usize, usize) {
    let (mut out, mut infeasible, mut losing) = (Vec::new(), 0, 0);
    for _ in 0..MAX_SCENARIO_TRIES {
        if out.len() == n {
            break;
        }
        let (p, chan) = random_scenario(rng);
        let eq = match scheme {
            Scheme::EnergyTrading => energy_trading::solve(&p, &chan),
            Scheme::NonEnergyTrading => non_energy_trading::solve(&p, &chan, non_energy_trading::DEFAULT_THETA),
            Scheme::SocialWelfare => social_welfare::solve(&p, &chan),
        };
        match eq {
            Ok(eq) => {
                let objective = match scheme {
                    Scheme::SocialWelfare => eq.diagnostics.welfare,
                    _ => eq.u_leader,
                };
                if objective >= 0.0 {
                    out.push((p, chan, eq));
                } else {
                    losing += 1;
                }
            }
            Err(_) => infeasible += 1,
        }
    }
    (out, infeasible, losing)
}

/// Price or power deviation: half local (within 5%), half global.
fn deviate(rng: &mut ChaCha8Rng, x: f64, global_hi: f64) -> f64 {
    if rng.random::<bool>() {
        (x * (1.0 + rng.random_range(-0.05..0.05))).max(0.0)
    } else {
        rng.random_range(0.0..global_hi)
    }
}

fn deviate_theta(rng: &mut ChaCha8Rng, theta: f64) -> f64 {
    let lo = energy_trading::THETA_LO;
    let hi = energy_trading::THETA_HI;
    if rng.random::<bool>() {
        (theta + rng.random_range(-0.02..0.02)).clamp(lo, hi)
    } else {
        rng.random_range(lo..hi)
    }
}

/// Random unilateral deviations at each scheme's solution; none may improve
/// the deviating side's utility by more than the tolerance.
pub fn equilibrium_conditions(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(3, "equilibrium conditions", DEVIATION_TOL);
    let mut rng = stream(cfg.seed, 3);
    for scheme in Scheme::ALL {
        let (scenarios, infeasible, losing) = equilibrium_scenarios(scheme, cfg.equilibrium_scenarios, &mut rng);
        res.notes.push(format!(
            "{scheme}: {} scenarios ({infeasible} infeasible and {losing} loss-making draws skipped)",
            scenarios.len()
        ));
        if scenarios.len() < cfg.equilibrium_scenarios {
            res.fail(format!("{scheme}: only {} usable scenarios", scenarios.len()));
        }
        for (s, (p, chan, eq)) in scenarios.iter().enumerate() {
            let r = Reference::new(p, chan);
            let (theta, lambda, p_bs) = (eq.theta, eq.lambda_price, eq.p_bs);
            for _ in 0..cfg.deviations {
                match scheme {
                    Scheme::EnergyTrading => {
                        // Leader moves (theta, lambda); the BS re-responds.
                        let t = deviate_theta(&mut rng, theta);
                        let l = deviate(&mut rng, lambda, 3.0 * lambda.max(p.cost_b / r.h2));
                        let pb = energy_trading::follower_power(p, chan, l);
                        let u = leader_utility(p, chan, t, l, pb).unwrap_or(f64::NEG_INFINITY);
                        res.record(u - eq.u_leader, DEVIATION_TOL, || {
                            format!("{scheme} scenario {s}: leader deviation to theta={t}, lambda={l}")
                        });
                        // BS moves its power at the equilibrium price.
                        let pb = deviate(&mut rng, p_bs, 3.0 * p_bs.max(1.0));
                        let u = bs_utility(p, chan, theta, lambda, pb);
                        res.record(u - eq.u_bs, DEVIATION_TOL, || {
                            format!("{scheme} scenario {s}: BS deviation to P_BS={pb}")
                        });
                    }
                    Scheme::NonEnergyTrading => {
                        // BS leader moves the price; the D2D side re-responds.
                        let l = deviate(&mut rng, lambda, 3.0 * lambda).max(f64::MIN_POSITIVE);
                        let pb = non_energy_trading::follower_power_demand(p, chan, theta, l).unwrap_or(0.0);
                        let u = bs_utility(p, chan, theta, l, pb);
                        res.record(u - eq.u_bs, DEVIATION_TOL, || {
                            format!("{scheme} scenario {s}: BS price deviation to {l}")
                        });
                        // D2D side moves the power it buys.
                        let pb = deviate(&mut rng, p_bs, 3.0 * p_bs.max(1.0));
                        let u = leader_utility(p, chan, theta, lambda, pb).unwrap_or(f64::NEG_INFINITY);
                        res.record(u - eq.u_leader, DEVIATION_TOL, || {
                            format!("{scheme} scenario {s}: D2D deviation to P_BS={pb}")
                        });
                    }
                    Scheme::SocialWelfare => {
                        let t = deviate_theta(&mut rng, theta);
                        let pb = deviate(&mut rng, p_bs, 3.0 * p_bs.max(1.0));
                        let u = social_welfare::welfare(p, chan, t, pb).unwrap_or(f64::NEG_INFINITY);
                        res.record(u - eq.diagnostics.welfare, DEVIATION_TOL, || {
                            format!("{scheme} scenario {s}: deviation to theta={t}, P_BS={pb}")
                        });
                    }
                }
            }
        }
    }
    res.finish()
}

// ---------------------------------------------------------------------------
// Criterion 4.

/// `U_SW = U_L + U_BS` at arbitrary points, and the welfare optimum beating
/// the energy-trading equilibrium's total utility.
pub fn welfare_identity(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(4, "welfare identity and ordering", WELFARE_IDENTITY_TOL);
    let mut rng = stream(cfg.seed, 4);
    let (mut ordered, mut compared, mut skipped) = (0, 0, 0);
    for s in 0..cfg.oracle_scenarios {
        let (p, chan) = random_scenario(&mut rng);
        for _ in 0..10 {
            let theta = rng.random_range(0.01..0.99);
            let lambda = log_uniform(&mut rng, 0.01, 100.0);
            let p_bs = log_uniform(&mut rng, 0.01, 100.0);
            let sw = social_welfare::welfare(&p, &chan, theta, p_bs);
            let ul = leader_utility(&p, &chan, theta, lambda, p_bs);
            match (sw, ul) {
                (Ok(sw), Ok(ul)) => {
                    let ub = bs_utility(&p, &chan, theta, lambda, p_bs);
                    res.record((sw - (ul + ub)).abs(), WELFARE_IDENTITY_TOL, || {
                        format!("scenario {s}: theta={theta}, lambda={lambda}, P_BS={p_bs}")
                    });
                }
                (Err(e), _) | (_, Err(e)) => res.fail(format!("scenario {s}: {e}")),
            }
        }
        match (energy_trading::solve(&p, &chan), social_welfare::solve(&p, &chan)) {
            (Ok(et), Ok(sw)) => {
                compared += 1;
                let total = et.u_leader + et.u_bs;
                let slack = WELFARE_ORDER_TOL * total.abs().max(1.0);
                res.checks += 1;
                if sw.diagnostics.welfare + slack >= total {
                    ordered += 1;
                } else {
                    res.failures += 1;
                    res.notes.push(format!(
                        "scenario {s}: welfare optimum {} below energy-trading total {total}",
                        sw.diagnostics.welfare
                    ));
                }
            }
            (Ok(et), Err(e)) => res.fail(format!(
                "scenario {s}: energy trading solved (theta={}) but welfare failed: {e}",
                et.theta
            )),
            (Err(_), _) => skipped += 1,
        }
    }
    res.notes.push(format!(
        "welfare optimum >= energy-trading total on {ordered}/{compared} scenarios ({skipped} without an energy-trading equilibrium)"
    ));
    res.finish()
}

// ---------------------------------------------------------------------------
// Criterion 5.

/// Direction of an averaged trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

/// Largest step against `dir` in `series` (zero or negative when monotone).
pub fn worst_violation(series: &[f64], dir: Direction) -> f64 {
    series
        .windows(2)
        .map(|w| match dir {
            Direction::NonIncreasing => w[1] - w[0],
            Direction::NonDecreasing => w[0] - w[1],
        })
        .map(|v| if v.is_nan() { f64::INFINITY } else { v })
        .fold(f64::NEG_INFINITY, f64::max)
}

struct TrendCheck {
    label: &'static str,
    variable: SweepVariable,
    metric: &'static str,
    schemes: &'static [Scheme],
    dir: Direction,
}

const ALL: &[Scheme] = &Scheme::ALL;
const PRICED: &[Scheme] = &[Scheme::EnergyTrading, Scheme::NonEnergyTrading];
const OPTIMIZED_SPLIT: &[Scheme] = &[Scheme::EnergyTrading, Scheme::SocialWelfare];

const TREND_CHECKS: [TrendCheck; 7] = [
    TrendCheck {
        label: "payment decreasing in theta",
        variable: SweepVariable::Theta,
        metric: "payment",
        schemes: PRICED,
        dir: Direction::NonIncreasing,
    },
    TrendCheck {
        label: "P_BS decreasing in theta",
        variable: SweepVariable::Theta,
        metric: "p_bs",
        schemes: ALL,
        dir: Direction::NonIncreasing,
    },
    TrendCheck {
        label: "p_s increasing in theta",
        variable: SweepVariable::Theta,
        metric: "p_s",
        schemes: ALL,
        dir: Direction::NonDecreasing,
    },
    TrendCheck {
        label: "secrecy throughput nondecreasing in xi",
        variable: SweepVariable::Xi,
        metric: "secrecy_throughput",
        schemes: ALL,
        dir: Direction::NonDecreasing,
    },
    TrendCheck {
        label: "U_L nonincreasing in delta_e2",
        variable: SweepVariable::DeltaE2,
        metric: "u_leader",
        schemes: ALL,
        dir: Direction::NonIncreasing,
    },
    TrendCheck {
        label: "U_L nonincreasing in K",
        variable: SweepVariable::KEves,
        metric: "u_leader",
        schemes: ALL,
        dir: Direction::NonIncreasing,
    },
    TrendCheck {
        label: "theta_opt nonincreasing in xi",
        variable: SweepVariable::Xi,
        metric: "theta_opt",
        schemes: OPTIMIZED_SPLIT,
        dir: Direction::NonIncreasing,
    },
];

/// Sweep grid used by the trend suite for each variable.
pub fn trend_values(variable: SweepVariable) -> Vec<f64> {
    match variable {
        SweepVariable::Theta => (1..20).map(|i| i as f64 * 0.05).collect(),
        SweepVariable::Xi => (1..10).map(|i| i as f64 * 0.1).collect(),
        SweepVariable::DeltaE2 => vec![0.25, 0.5, 1.0, 2.0, 4.0],
        SweepVariable::KEves => (1..=8).map(f64::from).collect(),
        SweepVariable::Mu => vec![25.0, 50.0, 100.0, 200.0],
    }
}

fn fmt_series(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Averaged monotone trends over paired channel draws at `params`.
pub fn trend_suite(params: &SystemParams, cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(5, "trend suite", TREND_TOL);
    let mut sweeps: Vec<(SweepVariable, std::result::Result<SweepResult, Error>)> = Vec::new();
    for variable in [
        SweepVariable::Theta,
        SweepVariable::Xi,
        SweepVariable::DeltaE2,
        SweepVariable::KEves,
    ] {
        let mut spec = SweepSpec::new(variable, trend_values(variable));
        spec.n_channel_draws = cfg.trend_draws;
        spec.base_seed = cfg.seed;
        sweeps.push((variable, run_sweep(&spec, params)));
    }
    for check in &TREND_CHECKS {
        let (_, sweep) = sweeps.iter().find(|(v, _)| *v == check.variable).expect("sweep ran");
        let sweep = match sweep {
            Ok(s) => s,
            Err(e) => {
                res.fail(format!("{}: sweep failed: {e}", check.label));
                continue;
            }
        };
        for &scheme in check.schemes {
            let series = sweep.series(scheme, check.metric);
            let worst = worst_violation(&series, check.dir);
            res.checks += 1;
            res.worst = res.worst.max(worst);
            let ok = worst <= TREND_TOL;
            if !ok {
                res.failures += 1;
            }
            res.notes.push(format!(
                "{} {} ({scheme}): {}",
                if ok { "ok  " } else { "FAIL" },
                check.label,
                fmt_series(&series)
            ));
        }
    }
    res.finish()
}

// ---------------------------------------------------------------------------
// Criterion 6.

/// Quadratic and cubic roots on random coefficients, plus the polynomials the
/// solvers build on random scenarios.
pub fn root_residuals(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut res = CriterionResult::new(6, "root-solver residuals", ROOT_TOL);
    let mut rng = stream(cfg.seed, 6);
    let signed = |rng: &mut ChaCha8Rng| {
        let m = log_uniform(rng, 0.1, 10.0);
        if rng.random::<bool>() {
            m
        } else {
            -m
        }
    };
    let quad = |a2: f64, a1: f64, a0: f64, res: &mut CriterionResult, label: &str| match solve_quadratic_positive(
        a2, a1, a0,
    ) {
        Ok(Some(r)) => {
            let resid = ((a2 * r + a1) * r + a0).abs();
            res.record(resid / a0.abs().max(1.0), ROOT_TOL, || {
                format!("{label}: quadratic ({a2}, {a1}, {a0}) root {r}")
            });
        }
        Ok(None) => {}
        Err(e) => res.fail(format!("{label}: quadratic ({a2}, {a1}, {a0}): {e}")),
    };
    let cubic = |b: f64, c: f64, res: &mut CriterionResult, label: &str| {
        match solve_depressed_cubic_positive(b, c, |x| -x) {
            Ok(r) => {
                let resid = depressed_cubic(b, c, r).abs();
                res.record(resid / cubic_tolerance(c) * ROOT_TOL, ROOT_TOL, || {
                    format!("{label}: cubic ({b}, {c}) root {r}")
                });
            }
            // Genuinely rootless on (0, inf): the minimum over x > 0 is positive.
            Err(Error::NoPositiveRoot { .. })
                if c > 0.0 && (b >= 0.0 || depressed_cubic(b, c, (-b / 3.0).sqrt()) > 0.0) => {}
            Err(e) => res.fail(format!("{label}: cubic ({b}, {c}): {e}")),
        }
    };
    for i in 0..cfg.root_draws {
        let label = format!("draw {i}");
        let (a2, a1, a0) = (log_uniform(&mut rng, 0.1, 10.0), signed(&mut rng), signed(&mut rng));
        quad(a2, a1, a0, &mut res, &label);
        let (b, c) = (signed(&mut rng), signed(&mut rng));
        cubic(b, c, &mut res, &label);
    }
    for s in 0..cfg.oracle_scenarios {
        let label = format!("scenario {s}");
        let (p, chan) = random_scenario(&mut rng);
        let theta = rng.random_range(0.05..0.95);
        let k = energy_trading::PriceConstants::new(&p, &chan, theta).expect("valid theta");
        quad(2.0 * k.d, 2.0 * (1.0 - k.d * k.dd), -k.a * k.d * k.c, &mut res, &label);
        let a = p.mu * (1.0 - theta) / p.log_base.ln();
        let d = theta * p.xi * chan.h_norm2 * chan.h_s_abs2 / ((1.0 - theta) * p.sigma_s2);
        quad(
            2.0 * theta * p.cost_a * d,
            2.0 * theta * p.cost_a + d * p.cost_b * theta,
            p.cost_b * theta - a * d,
            &mut res,
            &label,
        );
        let net = non_energy_trading::NetGameConstants::new(&p, &chan, theta).expect("valid theta");
        cubic(net.b_coef, net.c_coef, &mut res, &label);
    }
    res.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_violation_signs() {
        assert!(worst_violation(&[3.0, 2.0, 2.0, 1.0], Direction::NonIncreasing) <= 0.0);
        assert_eq!(worst_violation(&[3.0, 2.0, 2.5], Direction::NonIncreasing), 0.5);
        assert_eq!(worst_violation(&[1.0, 0.5], Direction::NonDecreasing), 0.5);
        assert_eq!(
            worst_violation(&[1.0, f64::NAN], Direction::NonDecreasing),
            f64::INFINITY
        );
    }

    #[test]
    fn scenario_generator_stays_in_range() {
        let mut rng = stream(7, 0);
        for _ in 0..200 {
            let (p, _) = random_scenario(&mut rng);
            p.validate().unwrap();
            assert!((2..=8).contains(&p.n_t) && (1..=4).contains(&p.k_eves));
            assert!(p.mu >= 0.1 && p.mu <= 10.0);
        }
    }

    #[test]
    fn too_few_scenarios_rejected() {
        assert!(run_acceptance(&SystemParams::default(), 19, 0).is_err());
    }

    #[test]
    fn record_tracks_worst_and_failures() {
        let mut r = CriterionResult::new(9, "x", 1.0);
        r.record(0.5, 1.0, || "a".into());
        r.record(2.0, 1.0, || "b".into());
        let r = r.finish();
        assert!(!r.passed);
        assert_eq!((r.checks, r.failures, r.worst), (2, 1, 2.0));
        assert!(r.line().starts_with("FAIL [9] x: 2 checks, 1 failures"));
    }
}
