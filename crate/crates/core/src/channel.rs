//! Flat Rayleigh fading, circularly symmetric AWGN and the received-signal
//! model `r = a e^{j theta} s + n`.
//!
//! Block-fading contract: a [`FadingSample`] is drawn once and applied to both
//! the decision-time and the data-time symbol of a trial (the channel gain is
//! constant across two consecutive symbol intervals, which is what makes a
//! rate decision at time `i` valid at time `i + 1`). Consecutive trials use
//! independent draws.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Physical scenario of one link: mean-square fading gain, symbol energy and
/// one-sided noise density (bandwidth normalized to 1).
///
/// The per-dimension noise variance is `N0 / 2` and the average SNR is
/// `gamma_bar = omega * symbol_energy / noise_density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    omega: f64,
    symbol_energy: f64,
    noise_density: f64,
}

/// Invalid [`LinkParams`] input.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ChannelError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

impl LinkParams {
    pub fn new(omega: f64, symbol_energy: f64, noise_density: f64) -> Result<Self, ChannelError> {
        for (name, value) in [
            ("omega", omega),
            ("symbol_energy", symbol_energy),
            ("noise_density", noise_density),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(ChannelError::NonPositive { name, value });
            }
        }
        Ok(Self {
            omega,
            symbol_energy,
            noise_density,
        })
    }

    /// Scenario with unit fading power and unit symbol energy at the given
    /// average SNR; the sweep variable of every experiment in this crate.
    pub fn from_avg_snr_db(avg_snr_db: f64) -> Self {
        Self::from_avg_snr_db_with_omega(avg_snr_db, 1.0).expect("omega = 1 is always valid")
    }

    /// Like [`LinkParams::from_avg_snr_db`] with an explicit fading power.
    pub fn from_avg_snr_db_with_omega(avg_snr_db: f64, omega: f64) -> Result<Self, ChannelError> {
        let gbar = 10f64.powf(avg_snr_db / 10.0);
        Self::new(omega, 1.0, omega / gbar)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn symbol_energy(&self) -> f64 {
        self.symbol_energy
    }

    pub fn noise_density(&self) -> f64 {
        self.noise_density
    }

    /// Average SNR `gamma_bar = omega * E_S / N0` (linear).
    pub fn avg_snr(&self) -> f64 {
        self.omega * self.symbol_energy / self.noise_density
    }

    pub fn avg_snr_db(&self) -> f64 {
        10.0 * self.avg_snr().log10()
    }

    /// Per-dimension noise standard deviation `sqrt(N0 / 2)`.
    pub fn noise_sigma(&self) -> f64 {
        (0.5 * self.noise_density).sqrt()
    }
}

/// One channel state: nonnegative amplitude and a phase in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    pub amplitude: f64,
    pub phase: f64,
}

impl FadingSample {
    /// Complex gain `a e^{j theta}`.
    pub fn gain(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

/// Inverse-CDF map from a uniform variate to a Rayleigh amplitude with
/// `E[a^2] = omega`. Exposed separately so the mapping itself is testable.
pub fn rayleigh_amplitude_from_uniform(u: f64, omega: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&u));
    (-omega * (1.0 - u).ln()).sqrt()
}

/// Draws one fading sample: Rayleigh amplitude with `E[a^2] = omega`, phase
/// uniform on `[0, 2 pi)`.
pub fn draw_rayleigh<R: Rng + ?Sized>(params: &LinkParams, rng: &mut R) -> FadingSample {
    let amplitude = rayleigh_amplitude_from_uniform(rng.random::<f64>(), params.omega());
    let phase = rng.random::<f64>() * std::f64::consts::TAU;
    FadingSample { amplitude, phase }
}

/// Draws one circularly symmetric complex Gaussian noise sample with
/// `E[n* n] = N0`, i.e. variance `N0 / 2` per dimension.
pub fn draw_awgn<R: Rng + ?Sized>(params: &LinkParams, rng: &mut R) -> Complex64 {
    let sigma = params.noise_sigma();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

/// The received sample `a e^{j theta} s + n`.
pub fn received_sample(symbol: Complex64, fade: &FadingSample, noise: Complex64) -> Complex64 {
    fade.gain() * symbol + noise
}

/// Instantaneous received SNR `E_S a^2 / N0` for a given fading amplitude.
pub fn instantaneous_snr(amplitude: f64, params: &LinkParams) -> f64 {
    debug_assert!(amplitude >= 0.0);
    params.symbol_energy() * amplitude * amplitude / params.noise_density()
}

/// Independent random substream identified by `(seed, stream)`.
///
/// Streams with the same seed and different stream ids never overlap, which
/// is what lets the simulator hand each trial block its own generator and
/// stay bit-reproducible under any scheduling.
pub fn substream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
