use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::params::SystemParams;
use crate::error::{check_nonneg, check_theta, Result};

/// One draw of the channels that enter the analytic solvers.
///
/// Eavesdropper channels are not stored: only their variances enter the
/// closed-form outage, and the Monte-Carlo estimator draws them itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// BS to D2D transmitter (energy link).
    pub h: Vec<Complex64>,
    pub h_norm2: f64,
    /// `|h_s|^2`, D2D transmitter to D2D receiver.
    pub h_s_abs2: f64,
    /// BS to D2D receiver; the jamming null space is taken against this row.
    pub g_s: Vec<Complex64>,
    pub rng_seed: u64,
}

/// Circularly-symmetric complex Gaussian with `E|z|^2 = variance`.
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

impl ChannelRealization {
    /// Builds a realization from explicit channel values (tests, replay).
    pub fn from_parts(h: Vec<Complex64>, h_s: Complex64, g_s: Vec<Complex64>) -> Self {
        let h_norm2 = norm2(&h);
        Self {
            h,
            h_norm2,
            h_s_abs2: h_s.norm_sqr(),
            g_s,
            rng_seed: 0,
        }
    }

    /// Realization with only the scalar gains set; `h` is the scaled first axis.
    pub fn from_gains(n_t: usize, h_norm2: f64, h_s_abs2: f64) -> Self {
        let mut h = vec![Complex64::new(0.0, 0.0); n_t];
        h[0] = Complex64::new(h_norm2.sqrt(), 0.0);
        let mut g_s = vec![Complex64::new(0.0, 0.0); n_t];
        g_s[0] = Complex64::new(1.0, 0.0);
        Self {
            h,
            h_norm2,
            h_s_abs2,
            g_s,
            rng_seed: 0,
        }
    }

    /// Maximum-ratio energy beamformer `w = h / ||h||`.
    pub fn energy_beamformer(&self) -> Vec<Complex64> {
        let n = self.h_norm2.sqrt();
        self.h.iter().map(|z| z / n).collect()
    }

    /// `|h w^H|^2` for an arbitrary unit-power beamformer `w`.
    pub fn beamforming_gain(&self, w: &[Complex64]) -> f64 {
        self.h
            .iter()
            .zip(w)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Draws `h`, `h_s` and `g_s` i.i.d. complex Gaussian from a ChaCha stream
/// seeded with `seed`. `g_s` has unit variance per entry.
pub fn sample_channels(params: &SystemParams, seed: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<Complex64> = (0..params.n_t)
        .map(|_| complex_gaussian(&mut rng, params.h_var))
        .collect();
    let h_s = complex_gaussian(&mut rng, params.hs_var);
    let g_s: Vec<Complex64> = (0..params.n_t).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
    let mut chan = ChannelRealization::from_parts(h, h_s, g_s);
    chan.rng_seed = seed;
    chan
}

/// Energy collected during the WET phase of a unit-length block.
pub fn harvested_energy(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> Result<f64> {
    check_theta(theta)?;
    check_nonneg("p_bs", p_bs)?;
    Ok(params.xi * theta * p_bs * chan.h_norm2)
}

/// Power the D2D transmitter can sustain over the remaining `1 - theta`.
pub fn max_d2d_power(params: &SystemParams, chan: &ChannelRealization, theta: f64, p_bs: f64) -> Result<f64> {
    Ok(harvested_energy(params, chan, theta, p_bs)? / (1.0 - theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn toy() -> (SystemParams, ChannelRealization) {
        let p = SystemParams {
            xi: 0.8,
            ..Default::default()
        };
        (p, ChannelRealization::from_gains(p.n_t, 2.0, 1.0))
    }

    #[test]
    fn harvested_energy_substitution() {
        let (p, c) = toy();
        assert!((harvested_energy(&p, &c, 0.5, 10.0).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(harvested_energy(&p, &c, 0.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn harvested_energy_linear_in_theta() {
        let (p, c) = toy();
        let e: Vec<f64> = [0.2, 0.4, 0.8]
            .iter()
            .map(|&t| harvested_energy(&p, &c, t, 3.0).unwrap())
            .collect();
        assert!((e[1] / e[0] - 2.0).abs() < 1e-12);
        assert!((e[2] / e[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn max_power_substitution_and_pole() {
        let (p, c) = toy();
        let ps = max_d2d_power(&p, &c, 0.5, 10.0).unwrap();
        assert!((ps - 16.0).abs() < 1e-12);
        assert!((ps - harvested_energy(&p, &c, 0.5, 10.0).unwrap() / 0.5).abs() < 1e-12);
        let grid: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&t| max_d2d_power(&p, &c, t, 1.0).unwrap())
            .collect();
        assert!(grid[0] < grid[1] && grid[1] < grid[2]);
    }

    #[test]
    fn theta_domain_is_enforced() {
        let (p, c) = toy();
        for t in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                harvested_energy(&p, &c, t, 1.0),
                Err(Error::Domain { name: "theta", .. })
            ));
            assert!(max_d2d_power(&p, &c, t, 1.0).is_err());
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let p = SystemParams::default();
        assert_eq!(sample_channels(&p, 7), sample_channels(&p, 7));
        assert_ne!(sample_channels(&p, 1).h, sample_channels(&p, 2).h);
    }

    #[test]
    fn beamformer_recovers_full_gain() {
        let p = SystemParams::default();
        for seed in 0..50 {
            let c = sample_channels(&p, seed);
            let w = c.energy_beamformer();
            assert!((norm2(&w) - 1.0).abs() < 1e-12);
            let e_bf = p.xi * 0.3 * 2.0 * c.beamforming_gain(&w);
            let e = harvested_energy(&p, &c, 0.3, 2.0).unwrap();
            assert!((e_bf - e).abs() <= 1e-10 * e.max(1.0));
            assert!((c.h_norm2 - norm2(&c.h)).abs() <= 1e-12 * c.h_norm2);
        }
    }

    #[test]
    fn mean_channel_gain_matches_antenna_count() {
        // ||h||^2 is a sum of n_t unit-mean exponentials: mean n_t, variance n_t.
        let p = SystemParams::default();
        let n = 100_000u64;
        let draws: Vec<f64> = (0..n).map(|s| sample_channels(&p, s).h_norm2).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - p.n_t as f64).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }
}
