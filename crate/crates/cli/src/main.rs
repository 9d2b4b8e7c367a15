use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use d2d_stackelberg::harness::acceptance::{run_acceptance, AcceptanceReport};
use d2d_stackelberg::harness::sweep::{run_sweep, solve_scheme};
use d2d_stackelberg::harness::RunConfig;
use d2d_stackelberg::secrecy::{outage_closed_form, outage_monte_carlo, threshold_for_outage};
use d2d_stackelberg::{sample_channels, Error, Scheme, SystemParams};

#[derive(Parser, Debug)]
#[command(author, version, about = "Secure wireless-powered D2D Stackelberg games")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: Overrides,
}

/// Shared flags; each one overrides the matching key of `--config`.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n_t: Option<usize>,
    #[arg(long, global = true)]
    k_eves: Option<usize>,
    #[arg(long, global = true)]
    xi: Option<f64>,
    #[arg(long, global = true)]
    eps_outage: Option<f64>,
    #[arg(long, global = true)]
    mu: Option<f64>,
    #[arg(long, global = true)]
    cost_a: Option<f64>,
    #[arg(long, global = true)]
    cost_b: Option<f64>,
    #[arg(long, global = true)]
    sigma_s2: Option<f64>,
    #[arg(long, global = true)]
    gamma_e2: Option<f64>,
    #[arg(long, global = true)]
    delta_e2: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    scheme: Option<Scheme>,
    #[arg(long, global = true)]
    theta: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one scheme on one channel draw and print the point as key=value lines.
    Solve,
    /// Run the sweep described in the config file and write CSV.
    Sweep {
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed-form secrecy outage with Monte Carlo at one point.
    OutageMc {
        #[arg(long, default_value_t = 1.0)]
        p_s: f64,
        #[arg(long, default_value_t = 1.0)]
        p_bs: f64,
        /// Leakage threshold; defaults to the one meeting `eps_outage` exactly.
        #[arg(long)]
        rho_e: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Run the acceptance suite.
    Accept {
        #[arg(long, default_value_t = 50)]
        scenarios: usize,
    },
}

impl Overrides {
    fn load(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let p = &mut cfg.params;
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { p.$f = v; })* };
        }
        set!(n_t, k_eves, xi, eps_outage, mu, cost_a, cost_b, sigma_s2, gamma_e2, delta_e2);
        cfg.seed = self.seed.or(cfg.seed);
        cfg.scheme = self.scheme.or(cfg.scheme);
        cfg.theta = self.theta.or(cfg.theta);
        cfg.params.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParam { .. } => 2,
        Error::NoPositiveSecrecy => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = cli.overrides.load()?;
    match cli.command {
        Command::Solve => {
            let seed = cfg.seed.unwrap_or(0);
            let scheme = cfg.scheme.unwrap_or(Scheme::EnergyTrading);
            let chan = sample_channels(&cfg.params, seed);
            let point = solve_scheme(scheme, &cfg.params, &chan, cfg.theta)?;
            println!("seed={seed}");
            println!("h_norm2={}", chan.h_norm2);
            println!("h_s_abs2={}", chan.h_s_abs2);
            println!("{}", point.to_key_values());
            Ok(0)
        }
        Command::Sweep { out } => {
            let mut spec = cfg.sweep_spec()?;
            if let Some(s) = cfg.seed {
                spec.base_seed = s;
            }
            if let Some(t) = cfg.theta {
                spec.fixed_theta = Some(t);
                spec.validate()?;
            }
            if let Some(s) = cfg.scheme {
                spec.schemes = vec![s];
            }
            let result = run_sweep(&spec, &cfg.params)?;
            match out {
                Some(path) => {
                    let file = File::create(&path)?;
                    result.write_csv(BufWriter::new(file))?;
                }
                None => result.write_csv(io::stdout().lock())?,
            }
            if result.all_infeasible() {
                eprintln!("error: no positive secrecy rate at any sweep point");
                return Ok(3);
            }
            Ok(0)
        }
        Command::OutageMc {
            p_s,
            p_bs,
            rho_e,
            trials,
        } => {
            let params: SystemParams = cfg.params;
            let rho = rho_e.unwrap_or_else(|| threshold_for_outage(&params, p_s, p_bs, params.eps_outage));
            let closed = outage_closed_form(&params, p_s, p_bs, rho)?;
            let mc = outage_monte_carlo(&params, p_s, p_bs, rho, trials, cfg.seed.unwrap_or(0))?;
            let se = (closed * (1.0 - closed) / trials as f64).sqrt();
            let mut w = io::stdout().lock();
            writeln!(w, "rho_e={rho}")?;
            writeln!(w, "closed_form={closed}")?;
            writeln!(w, "monte_carlo={}", mc.estimate)?;
            writeln!(w, "std_err={}", mc.std_err)?;
            writeln!(w, "n_trials={}", mc.n_trials)?;
            writeln!(w, "z={}", (mc.estimate - closed).abs() / se)?;
            Ok(0)
        }
        Command::Accept { scenarios } => {
            let report: AcceptanceReport = run_acceptance(&cfg.params, scenarios, cfg.seed.unwrap_or(2024))?;
            print!("{report}");
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}
