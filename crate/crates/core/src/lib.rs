//! # vrpsk
//!
//! Variable-rate M-PSK link adaptation over flat Rayleigh fading.
//!
//! The library implements two rate-selection criteria side by side: the
//! conventional one driven by the instantaneous S/N (which needs a channel
//! amplitude estimate) and a channel-estimation-free one driven by a scaled
//! squared signal-plus-noise sample, plus the equal-gain-combining extension
//! for diversity receivers. Every closed-form expression (rate-agreement
//! probabilities, spectral efficiency, symbol error rate) ships with an
//! independent quadrature oracle, and a seeded Monte-Carlo engine produces
//! the matching empirical metrics.
//!
//! Module map:
//!
//! * [`specfun`] — erf / erfc / inverse erfc / Gaussian Q.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature (the oracle workhorse).
//! * [`channel`] — Rayleigh fading, complex AWGN, received-signal model.
//! * [`modem`] — M-PSK mapping, ML detection, AWGN symbol error rates.
//! * [`adaptation`] — switching thresholds and the three selection rules.
//! * [`analytics`] — closed forms and their quadrature cross-checks.
//! * [`simulator`] — reproducible parallel Monte-Carlo sweeps.

pub mod adaptation;
pub mod analytics;
pub mod channel;
pub mod modem;
pub mod quad;
pub mod simulator;
pub mod specfun;

pub use adaptation::{
    egc_statistic, select_order_sn, select_order_snr, sn_statistic, PolicyError, RateDecision,
    RatePolicy, ThresholdFamily,
};
pub use analytics::RegionQuery;
pub use channel::{
    draw_awgn, draw_rayleigh, instantaneous_snr, received_sample, substream, ChannelError,
    FadingSample, LinkParams,
};
pub use modem::{detect_psk, modulate, ser_psk_awgn_approx, ser_psk_awgn_exact, PskOrder};
pub use simulator::{
    estimate_pi, run_egc_trial, run_pair_trial, run_sweep, ExperimentConfig, PiEstimate, Scheme,
    SimError, SweepPoint, SweepResult, TrialMetrics, TrialRecord,
};
pub use specfun::{erf, erfc, erfc_inv, gaussian_q, Probability};
