//! Monte-Carlo engine for the fixed-rate, VR-S/N, VR-S+N and EGC-VR schemes.
//!
//! Each trial is one decision/data pair under block fading: the channel is
//! drawn once, the decision statistic is formed from a unit-energy
//! observation at time `i` (the active data symbol, or a pilot during outage
//! slots — constant envelope makes the statistic identical either way), and
//! one data symbol is transmitted at the selected order over the same fading
//! with fresh noise at time `i + 1`. Fading is independent across pairs.
//!
//! Reproducibility contract: trials are partitioned into fixed-size blocks,
//! each driven by its own `(seed, grid point, block)` substream, and every
//! aggregate is an exact integer count. Worker threads only schedule blocks,
//! so results are bit-identical for any worker count.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::adaptation::{PolicyError, RatePolicy};
use crate::channel::{
    draw_awgn, draw_rayleigh, instantaneous_snr, received_sample, substream, ChannelError,
    LinkParams,
};
use crate::modem::{detect_psk, modulate, PskOrder};
use crate::specfun::{Probability, ProbabilityError};

/// Trials per random-stream block. Fixed: changing it changes results.
const TRIALS_PER_BLOCK: u64 = 1 << 14;

/// Conditioning regions with fewer events than this are flagged rather than
/// trusted.
const MIN_REGION_EVENTS: u64 = 100;

/// Which rate-selection rule drives transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Always transmit the single configured order.
    Fixed,
    /// Select by instantaneous SNR (needs the fading amplitude).
    VrSnr,
    /// Select by the scaled squared S+N sample (amplitude-free).
    VrSn,
    /// Select by the equal-gain-combined S+N sample across branches.
    VrEgc,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scheme::Fixed => "fixed",
            Scheme::VrSnr => "vr_snr",
            Scheme::VrSn => "vr_sn",
            Scheme::VrEgc => "vr_egc",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(Scheme::Fixed),
            "vr_snr" => Ok(Scheme::VrSnr),
            "vr_sn" => Ok(Scheme::VrSn),
            "vr_egc" => Ok(Scheme::VrEgc),
            other => Err(format!(
                "unknown scheme '{other}' (expected fixed, vr_snr, vr_sn or vr_egc)"
            )),
        }
    }
}

/// Simulator errors: invalid configuration, or invalid policy/link input
/// surfaced from the underlying modules.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Probability(#[from] ProbabilityError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Full description of one experiment: scheme, SNR sweep, policy generator,
/// diversity order, trial budget and reproducibility knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    /// Average-SNR grid in dB; one sweep point per entry.
    pub snr_db_grid: Vec<f64>,
    /// Mean-square fading gain per branch.
    pub omega: f64,
    /// Ascending PSK sizes; exactly one for [`Scheme::Fixed`].
    pub orders: Vec<u32>,
    pub target_ser: f64,
    /// Diversity branches; 1 unless the scheme combines.
    pub branches: usize,
    /// Decision/data pairs per sweep point.
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; affects scheduling only, never results.
    pub workers: usize,
    /// Compare the combined statistic divided by L against single-branch
    /// thresholds (default); `false` compares the raw combiner output.
    pub egc_normalize: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let err = |msg: String| Err(SimError::Config(msg));
        if self.snr_db_grid.is_empty() {
            return err("empty SNR grid".into());
        }
        if self.snr_db_grid.iter().any(|db| !db.is_finite()) {
            return err("SNR grid entries must be finite".into());
        }
        if self.snr_db_grid.len() > u32::MAX as usize {
            return err("SNR grid too large".into());
        }
        if !self.omega.is_finite() || self.omega <= 0.0 {
            return err(format!("omega must be positive, got {}", self.omega));
        }
        if self.orders.is_empty() {
            return err("order list must not be empty".into());
        }
        if self.scheme == Scheme::Fixed && self.orders.len() != 1 {
            return err(format!(
                "fixed scheme takes exactly one order, got {:?}",
                self.orders
            ));
        }
        for &m in &self.orders {
            PskOrder::new(m).map_err(|e| SimError::Config(e.to_string()))?;
        }
        if !(self.target_ser > 0.0 && self.target_ser < 1.0) {
            return err(format!(
                "target_ser must be in (0, 1), got {}",
                self.target_ser
            ));
        }
        if self.branches == 0 {
            return err("branches must be >= 1".into());
        }
        if matches!(self.scheme, Scheme::VrSnr | Scheme::VrSn) && self.branches != 1 {
            return err(format!(
                "scheme {} is single-branch (branches = {})",
                self.scheme, self.branches
            ));
        }
        if self.trials == 0 {
            return err("trials must be >= 1".into());
        }
        if self.trials.div_ceil(TRIALS_PER_BLOCK) > u32::MAX as u64 {
            return err("trial count too large".into());
        }
        if self.workers == 0 {
            return err("workers must be >= 1".into());
        }
        Ok(())
    }

    /// The PSK policy generated from `(orders, target_ser)`.
    pub fn policy(&self) -> Result<RatePolicy, SimError> {
        let target = Probability::new(self.target_ser)?;
        Ok(RatePolicy::thresholds_psk(target, &self.orders)?)
    }
}

/// Outcome of one decision/data pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Combined instantaneous SNR (the amplitude-aware reference statistic).
    pub statistic_snr: f64,
    /// Combined, scaled S+N statistic (normalized by L when configured).
    pub statistic_sn: f64,
    pub snr_region: usize,
    pub sn_region: usize,
    /// Region that drove transmission under the active scheme (0 = outage).
    pub decision_region: usize,
    /// Constellation size of the transmitted data symbol, absent on outage.
    pub order: Option<u32>,
    /// Detection outcome of the data symbol; `false` on outage.
    pub error: bool,
}

/// Runs one decision/data pair for a single-branch scheme (or a degenerate
/// one-branch EGC, which is the same thing).
pub fn run_pair_trial<R: Rng + ?Sized>(
    scheme: Scheme,
    policy: &RatePolicy,
    link: &LinkParams,
    rng: &mut R,
) -> TrialRecord {
    trial(scheme, policy, link, 1, true, rng)
}

/// Runs one decision/data pair of the EGC-combined VR scheme over `branches`
/// independent equal-power Rayleigh branches, with the combined statistic
/// normalized by the branch count.
pub fn run_egc_trial<R: Rng + ?Sized>(
    policy: &RatePolicy,
    link: &LinkParams,
    branches: usize,
    rng: &mut R,
) -> TrialRecord {
    trial(Scheme::VrEgc, policy, link, branches, true, rng)
}

fn trial<R: Rng + ?Sized>(
    scheme: Scheme,
    policy: &RatePolicy,
    link: &LinkParams,
    branches: usize,
    normalize: bool,
    rng: &mut R,
) -> TrialRecord {
    debug_assert!(branches >= 1);
    let es_sqrt = link.symbol_energy().sqrt();
    let n0 = link.noise_density();
    let pilot = Complex64::new(es_sqrt, 0.0);

    // decision slot: draw the channel once per branch, observe the pilot
    // co-phased, and accumulate what the data slot will reuse
    let mut amp_sum = 0.0;
    let mut u_sum = 0.0;
    let mut data_noise = Complex64::new(0.0, 0.0);
    for _ in 0..branches {
        let fade = draw_rayleigh(link, rng);
        let probe_noise = draw_awgn(link, rng);
        let slot_noise = draw_awgn(link, rng);
        let cophase = Complex64::from_polar(1.0, -fade.phase);
        let r = received_sample(pilot, &fade, probe_noise);
        amp_sum += fade.amplitude;
        u_sum += (r * cophase).re;
        data_noise += slot_noise * cophase;
    }

    let scale = if normalize { branches as f64 } else { 1.0 };
    // combined post-EGC SNR; reduces to E_S a^2 / N0 at L = 1
    let statistic_snr = instantaneous_snr(amp_sum, link) / branches as f64;
    let statistic_sn = u_sum * u_sum / n0 / scale;

    let snr_region = policy.region_of(statistic_snr);
    let sn_region = policy.region_of(statistic_sn);
    let decision_region = match scheme {
        Scheme::Fixed => 1,
        Scheme::VrSnr => snr_region,
        Scheme::VrSn | Scheme::VrEgc => sn_region,
    };

    let mut record = TrialRecord {
        statistic_snr,
        statistic_sn,
        snr_region,
        sn_region,
        decision_region,
        order: None,
        error: false,
    };
    if decision_region == 0 {
        return record; // outage: nothing transmitted
    }

    // data slot: same fading, fresh noise, ML detection after co-phasing
    let m = policy.order_in_region(decision_region);
    let order = PskOrder::new(m).expect("simulator policies carry PSK orders");
    let index = rng.random_range(0..m);
    let symbol = modulate(index, order) * es_sqrt;
    let combined = symbol * amp_sum + data_noise;
    let detected = detect_psk(combined, order);

    record.order = Some(m);
    record.error = detected != index;
    record
}

/// Exact integer aggregates of a batch of trials. Merging is commutative,
/// which is what makes the sweep independent of scheduling.
#[derive(Debug, Clone, PartialEq)]
struct Counts {
    trials: u64,
    outage: u64,
    transmitted: u64,
    errors: u64,
    selected: Vec<u64>,
    snr_region: Vec<u64>,
    joint: Vec<u64>,
}

impl Counts {
    fn new(regions: usize) -> Self {
        Self {
            trials: 0,
            outage: 0,
            transmitted: 0,
            errors: 0,
            selected: vec![0; regions],
            snr_region: vec![0; regions],
            joint: vec![0; regions],
        }
    }

    fn record(&mut self, rec: &TrialRecord) {
        self.trials += 1;
        if rec.decision_region == 0 {
            self.outage += 1;
        } else {
            self.selected[rec.decision_region - 1] += 1;
            self.transmitted += 1;
            self.errors += rec.error as u64;
        }
        if rec.snr_region > 0 {
            self.snr_region[rec.snr_region - 1] += 1;
            if rec.sn_region == rec.snr_region {
                self.joint[rec.snr_region - 1] += 1;
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.outage += other.outage;
        self.transmitted += other.transmitted;
        self.errors += other.errors;
        for (a, b) in self.selected.iter_mut().zip(&other.selected) {
            *a += b;
        }
        for (a, b) in self.snr_region.iter_mut().zip(&other.snr_region) {
            *a += b;
        }
        for (a, b) in self.joint.iter_mut().zip(&other.joint) {
            *a += b;
        }
        self
    }

    fn into_metrics(self, policy: &RatePolicy) -> TrialMetrics {
        let nf = self.trials as f64;
        let ser = binomial(self.errors, self.transmitted);
        let occupancy = self.selected.iter().map(|&c| c as f64 / nf).collect();
        let mut pi1_hat = Vec::new();
        let mut pi1_se = Vec::new();
        let mut pi2_hat = Vec::new();
        let mut pi2_se = Vec::new();
        let mut undersampled = Vec::new();
        for j in 0..policy.num_regions() {
            let p1 = binomial(self.joint[j], self.trials);
            pi1_hat.push(p1.0);
            pi1_se.push(p1.1);
            let p2 = binomial(self.joint[j], self.snr_region[j]);
            pi2_hat.push(p2.0);
            pi2_se.push(p2.1);
            undersampled.push(self.snr_region[j] < MIN_REGION_EVENTS);
        }
        let spectral_eff = self
            .selected
            .iter()
            .enumerate()
            .map(|(j, &c)| policy.bits_in_region(j + 1) * c as f64)
            .sum::<f64>()
            / nf;
        TrialMetrics {
            trials: self.trials,
            transmitted: self.transmitted,
            ser: ser.0,
            ser_se: ser.1,
            ser_unconditional: self.errors as f64 / nf,
            spectral_eff,
            outage_fraction: self.outage as f64 / nf,
            occupancy,
            pi1_hat,
            pi1_se,
            pi2_hat,
            pi2_se,
            undersampled,
        }
    }
}

/// `(p_hat, standard error)`; NaN on an empty denominator.
fn binomial(successes: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (f64::NAN, f64::NAN);
    }
    let p = successes as f64 / total as f64;
    (p, (p * (1.0 - p) / total as f64).sqrt())
}

/// Empirical metrics of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub trials: u64,
    pub transmitted: u64,
    /// Symbol error rate conditioned on transmission, with its binomial
    /// standard error; NaN when nothing was transmitted.
    pub ser: f64,
    pub ser_se: f64,
    /// Errors over all slots, outage counted as error-free silence.
    pub ser_unconditional: f64,
    /// Mean transmitted bits per slot (outage slots contribute zero).
    pub spectral_eff: f64,
    pub outage_fraction: f64,
    /// Per-region selection frequencies (sums with outage to 1).
    pub occupancy: Vec<f64>,
    /// Joint agreement frequency per region with standard errors.
    pub pi1_hat: Vec<f64>,
    pub pi1_se: Vec<f64>,
    /// Conditional agreement frequency per region with standard errors.
    pub pi2_hat: Vec<f64>,
    pub pi2_se: Vec<f64>,
    /// Regions whose conditioning event count fell below 100.
    pub undersampled: Vec<bool>,
}

/// One sweep point: the average SNR it was run at plus its metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub avg_snr_db: f64,
    pub metrics: TrialMetrics,
}

/// Metric-vs-average-SNR table produced by [`run_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

/// Runs the configured experiment over its SNR grid.
///
/// Deterministic in `(seed, config)`: block substreams and integer merging
/// make the result independent of worker count and scheduling order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult, SimError> {
    config.validate()?;
    let policy = config.policy()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| SimError::Config(format!("worker pool: {e}")))?;

    let mut points = Vec::with_capacity(config.snr_db_grid.len());
    for (point_idx, &db) in config.snr_db_grid.iter().enumerate() {
        let link = LinkParams::from_avg_snr_db_with_omega(db, config.omega)?;
        let blocks = config.trials.div_ceil(TRIALS_PER_BLOCK);
        let counts = pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|block| {
                    let first = block * TRIALS_PER_BLOCK;
                    let n = TRIALS_PER_BLOCK.min(config.trials - first);
                    let mut rng = substream(config.seed, ((point_idx as u64) << 32) | block);
                    let mut counts = Counts::new(policy.num_regions());
                    for _ in 0..n {
                        let rec = trial(
                            config.scheme,
                            &policy,
                            &link,
                            config.branches,
                            config.egc_normalize,
                            &mut rng,
                        );
                        counts.record(&rec);
                    }
                    counts
                })
                .reduce(|| Counts::new(policy.num_regions()), Counts::merge)
        });
        points.push(SweepPoint {
            avg_snr_db: db,
            metrics: counts.into_metrics(&policy),
        });
    }
    Ok(SweepResult { points })
}

/// Empirical agreement probabilities per region from decision statistics
/// alone (no data symbols), with binomial standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct PiEstimate {
    pub trials: u64,
    pub pi1_hat: Vec<f64>,
    pub pi1_se: Vec<f64>,
    pub pi2_hat: Vec<f64>,
    pub pi2_se: Vec<f64>,
    /// Regions conditioning on fewer than 100 events.
    pub undersampled: Vec<bool>,
}

/// Estimates the joint and conditional agreement probabilities between the
/// S/N and the S+N criterion by direct sampling of `(a, n_I)` pairs.
pub fn estimate_pi<R: Rng + ?Sized>(
    policy: &RatePolicy,
    link: &LinkParams,
    trials: u64,
    rng: &mut R,
) -> PiEstimate {
    let n = policy.num_regions();
    let mut joint = vec![0u64; n];
    let mut snr_count = vec![0u64; n];
    let es_sqrt = link.symbol_energy().sqrt();
    let sigma = link.noise_sigma();
    let n0 = link.noise_density();

    for _ in 0..trials {
        let fade = draw_rayleigh(link, rng);
        let n_i: f64 = sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
        let gamma = instantaneous_snr(fade.amplitude, link);
        let z = fade.amplitude * es_sqrt + n_i;
        let xi = z * z / n0;
        let j_snr = policy.region_of(gamma);
        if j_snr > 0 {
            snr_count[j_snr - 1] += 1;
            if policy.region_of(xi) == j_snr {
                joint[j_snr - 1] += 1;
            }
        }
    }

    let mut est = PiEstimate {
        trials,
        pi1_hat: Vec::with_capacity(n),
        pi1_se: Vec::with_capacity(n),
        pi2_hat: Vec::with_capacity(n),
        pi2_se: Vec::with_capacity(n),
        undersampled: Vec::with_capacity(n),
    };
    for j in 0..n {
        let p1 = binomial(joint[j], trials);
        let p2 = binomial(joint[j], snr_count[j]);
        est.pi1_hat.push(p1.0);
        est.pi1_se.push(p1.1);
        est.pi2_hat.push(p2.0);
        est.pi2_se.push(p2.1);
        est.undersampled.push(snr_count[j] < MIN_REGION_EVENTS);
    }
    est
}
