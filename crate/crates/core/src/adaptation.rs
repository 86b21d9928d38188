//! Switching-threshold construction and the three rate-selection rules:
//! S/N-based, S+N-based and the EGC-combined variant.
//!
//! A [`RatePolicy`] carries the ascending constellation set, the ascending
//! linear-SNR thresholds derived from a target symbol error rate (region
//! `N + 1` is implicitly unbounded) and the target itself. The statistic
//! compared against the thresholds is what distinguishes the rules; the
//! region logic `gamma_j <= statistic < gamma_{j+1}` (left-closed) is shared.
//! Everything below the first threshold is outage: no transmission.

use num_complex::Complex64;
use thiserror::Error;

use crate::channel::LinkParams;
use crate::specfun::{erfc_inv, Probability};

/// Which threshold formula produced a policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdFamily {
    Psk,
    Qam,
}

impl std::fmt::Display for ThresholdFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdFamily::Psk => write!(f, "psk"),
            ThresholdFamily::Qam => write!(f, "qam"),
        }
    }
}

impl std::str::FromStr for ThresholdFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "psk" => Ok(ThresholdFamily::Psk),
            "qam" => Ok(ThresholdFamily::Qam),
            other => Err(format!(
                "unknown modulation family '{other}' (expected psk or qam)"
            )),
        }
    }
}

/// Invalid policy construction input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("orders must be strictly ascending, got {0:?}")]
    NonAscendingOrders(Vec<u32>),
    #[error("PSK orders must be powers of two >= 2, got {0}")]
    InvalidPskOrder(u32),
    #[error("QAM orders must be >= 2, got {0}")]
    InvalidQamOrder(u32),
    #[error("target SER must satisfy 0 < P < 1, got {0}")]
    TargetOutOfRange(f64),
    #[error("thresholds must be strictly ascending and nonnegative, got {0:?}")]
    InvalidThresholds(Vec<f64>),
    #[error("need exactly one threshold per order ({orders} orders, {thresholds} thresholds)")]
    LengthMismatch { orders: usize, thresholds: usize },
}

/// Ordered constellation set, switching thresholds and the target SER that
/// generated them. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePolicy {
    family: ThresholdFamily,
    orders: Vec<u32>,
    thresholds: Vec<f64>,
    target_ser: f64,
}

impl RatePolicy {
    /// M-PSK thresholds `gamma_j = (erfc_inv(P) / sin(pi / M_j))^2`, the
    /// inverse of the approximate SER formula at the target.
    pub fn thresholds_psk(target_ser: Probability, orders: &[u32]) -> Result<Self, PolicyError> {
        let target = validate_target(target_ser)?;
        validate_orders(orders)?;
        for &m in orders {
            if m < 2 || !m.is_power_of_two() {
                return Err(PolicyError::InvalidPskOrder(m));
            }
        }
        let c = erfc_inv(target);
        let thresholds = orders
            .iter()
            .map(|&m| (c / (std::f64::consts::PI / m as f64).sin()).powi(2))
            .collect();
        Self::from_thresholds(ThresholdFamily::Psk, orders.to_vec(), thresholds, target)
    }

    /// M-QAM thresholds `gamma_j = ((M_j - 1) / 3) (sqrt(2) erfc_inv(P/2))^2`,
    /// the inverse of the square-QAM SER bound. Threshold-only use; the
    /// simulator transmits PSK.
    pub fn thresholds_qam(target_ser: Probability, orders: &[u32]) -> Result<Self, PolicyError> {
        let target = validate_target(target_ser)?;
        validate_orders(orders)?;
        for &m in orders {
            if m < 2 {
                return Err(PolicyError::InvalidQamOrder(m));
            }
        }
        let c = std::f64::consts::SQRT_2 * erfc_inv(target / 2.0);
        let thresholds = orders
            .iter()
            .map(|&m| (m - 1) as f64 / 3.0 * c * c)
            .collect();
        Self::from_thresholds(ThresholdFamily::Qam, orders.to_vec(), thresholds, target)
    }

    /// Policy with explicit thresholds. This is the analysis back door (a
    /// region starting at 0 cannot come out of any finite target); normal
    /// construction goes through [`RatePolicy::thresholds_psk`] and
    /// thresholds are always recomputed from the target, never trusted from
    /// serialized input.
    ///
    /// An empty policy (no regions, permanent outage) is valid here; the
    /// simulator rejects it but the spectral-efficiency sums are defined.
    pub fn from_thresholds(
        family: ThresholdFamily,
        orders: Vec<u32>,
        thresholds: Vec<f64>,
        target_ser: f64,
    ) -> Result<Self, PolicyError> {
        if orders.len() != thresholds.len() {
            return Err(PolicyError::LengthMismatch {
                orders: orders.len(),
                thresholds: thresholds.len(),
            });
        }
        validate_orders(&orders)?;
        let ascending = thresholds.windows(2).all(|w| w[0] < w[1]);
        if !ascending || thresholds.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(PolicyError::InvalidThresholds(thresholds));
        }
        Ok(Self {
            family,
            orders,
            thresholds,
            target_ser,
        })
    }

    pub fn family(&self) -> ThresholdFamily {
        self.family
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn target_ser(&self) -> f64 {
        self.target_ser
    }

    /// Number of transmitting regions `N`.
    pub fn num_regions(&self) -> usize {
        self.orders.len()
    }

    /// Region index of a statistic value: 0 is outage, `j in 1..=N` selects
    /// `M_j`. Intervals are left-closed: `gamma_j <= s < gamma_{j+1}`.
    pub fn region_of(&self, statistic: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= statistic)
    }

    /// Constellation size of region `j in 1..=N`.
    ///
    /// # Panics
    ///
    /// Panics on region 0 (outage carries no order) or `j > N`.
    pub fn order_in_region(&self, region: usize) -> u32 {
        assert!(
            region >= 1 && region <= self.orders.len(),
            "region {region} out of 1..=N"
        );
        self.orders[region - 1]
    }

    /// `log2 M_j` for region `j in 1..=N`.
    pub fn bits_in_region(&self, region: usize) -> f64 {
        (self.order_in_region(region) as f64).log2()
    }

    fn decide(&self, statistic: f64) -> RateDecision {
        let region_index = self.region_of(statistic);
        let selected = (region_index > 0).then(|| self.orders[region_index - 1]);
        RateDecision {
            selected,
            statistic,
            region_index,
        }
    }
}

fn validate_target(target: Probability) -> Result<f64, PolicyError> {
    let p = target.value();
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(PolicyError::TargetOutOfRange(p))
    }
}

fn validate_orders(orders: &[u32]) -> Result<(), PolicyError> {
    if !orders.windows(2).all(|w| w[0] < w[1]) {
        return Err(PolicyError::NonAscendingOrders(orders.to_vec()));
    }
    Ok(())
}

/// Outcome of one rate selection: the chosen constellation size (absent on
/// outage), the statistic value that drove it and the region it fell in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateDecision {
    pub selected: Option<u32>,
    pub statistic: f64,
    pub region_index: usize,
}

/// Conventional S/N-based selection: the instantaneous SNR picks the region.
pub fn select_order_snr(gamma: f64, policy: &RatePolicy) -> RateDecision {
    debug_assert!(gamma >= 0.0);
    policy.decide(gamma)
}

/// S+N-based selection: identical region logic with the scaled squared
/// signal-plus-noise sample in place of the SNR.
pub fn select_order_sn(xi: f64, policy: &RatePolicy) -> RateDecision {
    debug_assert!(xi >= 0.0);
    policy.decide(xi)
}

/// The scaled S+N decision statistic `xi = Re{r e^{-j phase}}^2 / N0`.
///
/// `phase` is everything the receiver co-phases away (channel phase, plus the
/// known symbol phase when the observation rides on a data symbol). Only the
/// average noise density enters the scaling; no amplitude estimate is needed,
/// which is the whole point of this criterion. Noise-free and at unit symbol
/// energy, `xi` equals the instantaneous SNR.
pub fn sn_statistic(received: Complex64, phase: f64, params: &LinkParams) -> f64 {
    let inphase = (received * Complex64::from_polar(1.0, -phase)).re;
    inphase * inphase / params.noise_density()
}

/// EGC decision statistic `psi = (sum_k u_k)^2 / N0` from the per-branch
/// co-phased baseband reals `u_k` (unit combining weights).
///
/// With `normalize` set the combined value is divided by the branch count so
/// it is comparable against single-branch thresholds (an `L`-branch combiner
/// accumulates `L` noise variances); `L = 1` then reduces exactly to
/// [`sn_statistic`].
///
/// # Panics
///
/// Panics on an empty branch list.
pub fn egc_statistic(branches: &[f64], params: &LinkParams, normalize: bool) -> f64 {
    assert!(!branches.is_empty(), "EGC needs at least one branch");
    let u: f64 = branches.iter().sum();
    let psi = u * u / params.noise_density();
    if normalize {
        psi / branches.len() as f64
    } else {
        psi
    }
}
