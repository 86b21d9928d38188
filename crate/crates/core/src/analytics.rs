//! Closed-form analytics for the variable-rate schemes and the quadrature
//! oracles that independently validate each of them.
//!
//! Three families live here:
//!
//! * the rate-agreement probabilities between the S/N and the S+N criterion
//!   per fading region — a closed form built from a Gaussian-weighted erfc
//!   integral ([`g_fn`], [`pi1`], [`pi2`]) with [`pi1_quadrature`] as oracle;
//! * the density of the signal-plus-noise variable `z = a sqrt(E_S) + n_I`
//!   ([`fz_pdf`]), its antiderivative ([`fz_antiderivative`]) and the two
//!   spectral-efficiency closed forms built on them;
//! * the averaged symbol error rate of the S/N-driven scheme over the
//!   exponential SNR density ([`ser_vr_snr`]) with an order-swapped single
//!   integral ([`ser_vr_snr_fubini`]) as the independent route.
//!
//! The analytic S+N expressions are one-sided: they follow the positive
//! branch `sqrt(N0 gamma_j) <= z < sqrt(N0 gamma_{j+1})` and ignore the
//! mirrored negative branch that the literal squared decision rule also maps
//! into region `j`. The simulator implements the literal rule, so the
//! (small, vanishing with SNR) difference between the two conventions is
//! measurable rather than hidden.

use crate::adaptation::RatePolicy;
use crate::channel::LinkParams;
use crate::modem::{ser_psk_awgn_exact, PskOrder};
use crate::quad;
use crate::specfun::{erf, erfc};

use std::f64::consts::PI;

/// Absolute tolerance of the agreement-probability quadrature oracle.
const PI1_QUAD_TOL: f64 = 1e-10;
/// Absolute tolerance of density/efficiency quadratures.
const FZ_QUAD_TOL: f64 = 1e-11;
/// Absolute tolerance of the outer SER average.
const SER_QUAD_TOL: f64 = 1e-10;

/// One fading region of a policy under one link scenario: the pair
/// `(gamma_j, gamma_{j+1})` every agreement probability is evaluated over.
#[derive(Debug, Clone, Copy)]
pub struct RegionQuery<'a> {
    policy: &'a RatePolicy,
    link: &'a LinkParams,
    region: usize,
}

impl<'a> RegionQuery<'a> {
    /// # Panics
    ///
    /// Panics unless `1 <= region <= N`.
    pub fn new(policy: &'a RatePolicy, link: &'a LinkParams, region: usize) -> Self {
        assert!(
            region >= 1 && region <= policy.num_regions(),
            "region {region} out of 1..={}",
            policy.num_regions()
        );
        Self {
            policy,
            link,
            region,
        }
    }

    pub fn policy(&self) -> &RatePolicy {
        self.policy
    }

    pub fn link(&self) -> &LinkParams {
        self.link
    }

    pub fn region(&self) -> usize {
        self.region
    }

    /// Lower SNR threshold `gamma_j`.
    pub fn gamma_lo(&self) -> f64 {
        self.policy.thresholds()[self.region - 1]
    }

    /// Upper SNR threshold `gamma_{j+1}`; infinite for the top region.
    pub fn gamma_hi(&self) -> f64 {
        self.policy
            .thresholds()
            .get(self.region)
            .copied()
            .unwrap_or(f64::INFINITY)
    }
}

/// Closed form of the Gaussian-weighted erfc integral
///
/// `g(t, y, z, w, v) = w * integral over x in [t, y] of
///     erfc((v - x) / (sqrt(2) z)) * x * exp(-w x^2)`.
///
/// `y` may be `+inf` (every `y`-dependent term decays to zero); `t`, `v`
/// must be finite. The leading `exp(-w v^2 / (1 + 2 z^2 w))` factor keeps the
/// combination finite for any magnitude of `v`.
///
/// # Panics
///
/// Panics if `z <= 0`, `w <= 0` or `t > y` (domain errors).
pub fn g_fn(t: f64, y: f64, z: f64, w: f64, v: f64) -> f64 {
    assert!(z > 0.0, "g_fn domain error: z = {z}");
    assert!(w > 0.0, "g_fn domain error: w = {w}");
    assert!(t <= y, "g_fn domain error: t = {t} > y = {y}");

    let alpha = 1.0 + 2.0 * z * z * w;
    let sqrt2z = std::f64::consts::SQRT_2 * z;
    let denom = z * (2.0 + 4.0 * z * z * w).sqrt(); // z * sqrt(2 alpha)

    let et = (-t * t * w).exp();
    let ey = (-y * y * w).exp();

    let s_t = (t * alpha - v) / denom;
    let s_y = if y.is_finite() {
        (y * alpha - v) / denom
    } else {
        f64::INFINITY
    };

    0.5 * (et - 2.0 * ey
        + et * (1.0 - erfc((t - v) / sqrt2z))
        + ey * erfc((y - v) / sqrt2z)
        + (-w * v * v / alpha).exp() / alpha.sqrt() * (erfc(s_t) - erfc(s_y)))
}

/// Joint probability that the S/N and the S+N criterion both land in the
/// queried region (closed form; one-sided convention).
pub fn pi1(q: &RegionQuery) -> f64 {
    let n0 = q.link.noise_density();
    let t = (n0 * q.gamma_lo()).sqrt();
    let z = (0.5 * n0).sqrt();
    let w = 1.0 / (q.link.symbol_energy() * q.link.omega());
    let hi = q.gamma_hi();
    let value = if hi.is_finite() {
        let y = (n0 * hi).sqrt();
        g_fn(t, y, z, w, t) - g_fn(t, y, z, w, y)
    } else {
        // upper bracket at infinity contributes nothing
        g_fn(t, f64::INFINITY, z, w, t)
    };
    value.clamp(0.0, 1.0)
}

/// Quadrature oracle for [`pi1`]: the single integral of the Gaussian
/// interval probability against the amplitude-domain Rayleigh density,
/// evaluated adaptively to 1e-10 absolute.
pub fn pi1_quadrature(q: &RegionQuery) -> f64 {
    let n0 = q.link.noise_density();
    let sqrt_n0 = n0.sqrt();
    let w = 1.0 / (q.link.symbol_energy() * q.link.omega());
    let t = (n0 * q.gamma_lo()).sqrt();
    let hi = q.gamma_hi();

    let f_y = move |y: f64| 2.0 * w * y * (-w * y * y).exp();
    if hi.is_finite() {
        let u = (n0 * hi).sqrt();
        quad::integrate(
            move |y| 0.5 * (erfc((t - y) / sqrt_n0) - erfc((u - y) / sqrt_n0)) * f_y(y),
            t,
            u,
            PI1_QUAD_TOL,
        )
    } else {
        quad::integrate_to_inf(
            move |y| 0.5 * erfc((t - y) / sqrt_n0) * f_y(y),
            t,
            PI1_QUAD_TOL,
        )
    }
}

/// Probability that the instantaneous SNR lands in the queried region,
/// `exp(-gamma_j / gbar) - exp(-gamma_{j+1} / gbar)`.
pub fn snr_region_mass(q: &RegionQuery) -> f64 {
    let gbar = q.link.avg_snr();
    let upper = if q.gamma_hi().is_finite() {
        (-q.gamma_hi() / gbar).exp()
    } else {
        0.0
    };
    (-q.gamma_lo() / gbar).exp() - upper
}

/// Probability that the S+N criterion picks region `j` given the S/N
/// criterion picked region `j`: `pi1 / Pr{gamma in region j}`.
///
/// Reported raw: a value above 1 (possible only through numerical slack or
/// the one-sided convention) is not clamped, so approximation quality stays
/// visible. Returns NaN if the conditioning mass underflows to zero.
pub fn pi2(q: &RegionQuery) -> f64 {
    pi1(q) / snr_region_mass(q)
}

/// Density of `z = a sqrt(E_S) + n_I`, the sum of a Rayleigh and a Gaussian
/// variable. Defined on all reals, nonnegative, unit mass.
pub fn fz_pdf(zval: f64, link: &LinkParams) -> f64 {
    let sigma2 = 0.5 * link.noise_density();
    let omega_r = link.symbol_energy() * link.omega(); // E[(a sqrt(E_S))^2]
    let beta = omega_r + 2.0 * sigma2;

    let gaussian = (2.0 * PI * sigma2).sqrt().recip()
        * (2.0 * sigma2 / beta)
        * (-zval * zval / (2.0 * sigma2)).exp();
    // 1 + erf(u) written as erfc(-u): the erf form cancels catastrophically
    // in the left tail and can push the density negative
    let skew = zval * omega_r.sqrt() / (beta * beta.sqrt())
        * (-zval * zval / beta).exp()
        * erfc(-zval * omega_r.sqrt() / ((2.0 * sigma2).sqrt() * beta.sqrt()));
    gaussian + skew
}

/// Antiderivative of [`fz_pdf`], normalized so `J(-inf) = -1/2` and
/// `J(+inf) = +1/2`; region probabilities are differences of `J`.
pub fn fz_antiderivative(zval: f64, link: &LinkParams) -> f64 {
    let sigma2 = 0.5 * link.noise_density();
    let omega_r = link.symbol_energy() * link.omega();
    let beta = omega_r + 2.0 * sigma2;

    if zval == f64::INFINITY {
        return 0.5;
    }
    if zval == f64::NEG_INFINITY {
        return -0.5;
    }
    0.5 * erf(zval / (2.0 * sigma2).sqrt())
        - omega_r.sqrt() / (2.0 * beta.sqrt())
            * (-zval * zval / beta).exp()
            * erfc(-zval * omega_r.sqrt() / ((2.0 * sigma2).sqrt() * beta.sqrt()))
}

/// Probability that the S+N statistic lands in the queried region under the
/// one-sided convention: `J(sqrt(N0 gamma_{j+1})) - J(sqrt(N0 gamma_j))`.
pub fn sn_region_mass(q: &RegionQuery) -> f64 {
    let n0 = q.link.noise_density();
    let hi = q.gamma_hi();
    let upper = if hi.is_finite() {
        fz_antiderivative((n0 * hi).sqrt(), q.link)
    } else {
        0.5
    };
    upper - fz_antiderivative((n0 * q.gamma_lo()).sqrt(), q.link)
}

/// Spectral efficiency of the S+N-driven scheme,
/// `sum_j log2(M_j) * Pr{sqrt(N0 gamma_j) <= z < sqrt(N0 gamma_{j+1})}`,
/// in bits/s/Hz via differences of the closed-form antiderivative.
pub fn spectral_efficiency_sn(policy: &RatePolicy, link: &LinkParams) -> f64 {
    (1..=policy.num_regions())
        .map(|j| policy.bits_in_region(j) * sn_region_mass(&RegionQuery::new(policy, link, j)))
        .sum()
}

/// Quadrature oracle for [`spectral_efficiency_sn`]: integrates [`fz_pdf`]
/// over each amplitude-domain region directly.
pub fn spectral_efficiency_sn_quadrature(policy: &RatePolicy, link: &LinkParams) -> f64 {
    let n0 = link.noise_density();
    (1..=policy.num_regions())
        .map(|j| {
            let q = RegionQuery::new(policy, link, j);
            let lo = (n0 * q.gamma_lo()).sqrt();
            let mass = if q.gamma_hi().is_finite() {
                let hi = (n0 * q.gamma_hi()).sqrt();
                quad::integrate(|z| fz_pdf(z, link), lo, hi, FZ_QUAD_TOL)
            } else {
                quad::integrate_to_inf(|z| fz_pdf(z, link), lo, FZ_QUAD_TOL)
            };
            policy.bits_in_region(j) * mass
        })
        .sum()
}

/// Spectral efficiency of the conventional S/N-driven scheme,
/// `sum_j log2(M_j) (exp(-gamma_j/gbar) - exp(-gamma_{j+1}/gbar))`.
pub fn spectral_efficiency_snr(policy: &RatePolicy, avg_snr: f64) -> f64 {
    debug_assert!(avg_snr > 0.0);
    let masses = region_masses_snr(policy, avg_snr);
    (1..=policy.num_regions())
        .map(|j| policy.bits_in_region(j) * masses[j - 1])
        .sum()
}

/// Quadrature oracle for [`spectral_efficiency_snr`]: integrates the
/// exponential SNR density over each region.
pub fn spectral_efficiency_snr_quadrature(policy: &RatePolicy, avg_snr: f64) -> f64 {
    let pdf = move |g: f64| (-g / avg_snr).exp() / avg_snr;
    let th = policy.thresholds();
    (1..=policy.num_regions())
        .map(|j| {
            let lo = th[j - 1];
            let mass = match th.get(j) {
                Some(&hi) => quad::integrate(pdf, lo, hi, FZ_QUAD_TOL),
                None => quad::integrate_to_inf(pdf, lo, FZ_QUAD_TOL),
            };
            policy.bits_in_region(j) * mass
        })
        .sum()
}

fn region_masses_snr(policy: &RatePolicy, avg_snr: f64) -> Vec<f64> {
    let th = policy.thresholds();
    (0..policy.num_regions())
        .map(|i| {
            let upper = th.get(i + 1).map_or(0.0, |&hi| (-hi / avg_snr).exp());
            (-th[i] / avg_snr).exp() - upper
        })
        .collect()
}

/// Probability that the S/N-driven scheme transmits at all,
/// `exp(-gamma_1 / gbar)`. Zero for an empty policy.
pub fn transmit_probability_snr(policy: &RatePolicy, avg_snr: f64) -> f64 {
    match policy.thresholds().first() {
        Some(&g1) => (-g1 / avg_snr).exp(),
        None => 0.0,
    }
}

/// Average SER of the S/N-driven variable-rate scheme, conditioned on
/// transmission: each region integrates the exact AWGN M-PSK SER against the
/// exponential SNR density, and the sum is divided by the transmit
/// probability. NaN for an empty policy (no transmissions to condition on).
pub fn ser_vr_snr(policy: &RatePolicy, avg_snr: f64) -> f64 {
    ser_vr_snr_unconditional(policy, avg_snr) / transmit_probability_snr(policy, avg_snr)
}

/// Like [`ser_vr_snr`] but averaged over all symbol slots, counting outage
/// slots as error-free non-transmissions.
pub fn ser_vr_snr_unconditional(policy: &RatePolicy, avg_snr: f64) -> f64 {
    debug_assert!(avg_snr > 0.0);
    let pdf = move |g: f64| (-g / avg_snr).exp() / avg_snr;
    let th = policy.thresholds();
    (1..=policy.num_regions())
        .map(|j| {
            let order = PskOrder::new(policy.order_in_region(j))
                .expect("policy orders are validated powers of two");
            let lo = th[j - 1];
            match th.get(j) {
                Some(&hi) => quad::integrate(
                    move |g| ser_psk_awgn_exact(g, order) * pdf(g),
                    lo,
                    hi,
                    SER_QUAD_TOL,
                ),
                None => quad::integrate_to_inf(
                    move |g| ser_psk_awgn_exact(g, order) * pdf(g),
                    lo,
                    SER_QUAD_TOL,
                ),
            }
        })
        .sum()
}

/// Independent route for [`ser_vr_snr`]: swapping the integration order turns
/// each region term into a single finite integral over the Craig angle,
///
/// `(1/pi) * integral over theta of
///     (exp(-c gamma_j) - exp(-c gamma_{j+1})) / (gbar c)`,
/// `c = sin^2(pi/M_j)/sin^2(theta) + 1/gbar`,
///
/// so no nested quadrature is involved. Conditional on transmission.
pub fn ser_vr_snr_fubini(policy: &RatePolicy, avg_snr: f64) -> f64 {
    debug_assert!(avg_snr > 0.0);
    let th = policy.thresholds();
    let total: f64 = (1..=policy.num_regions())
        .map(|j| {
            let m = policy.order_in_region(j) as f64;
            let s = (PI / m).sin().powi(2);
            let upper_angle = PI * (m - 1.0) / m;
            let lo = th[j - 1];
            let hi = th.get(j).copied();
            quad::integrate(
                move |theta| {
                    let sn = theta.sin();
                    let c = s / (sn * sn) + 1.0 / avg_snr;
                    let tail = match hi {
                        Some(hi) => (-c * lo).exp() - (-c * hi).exp(),
                        None => (-c * lo).exp(),
                    };
                    tail / (avg_snr * c)
                },
                0.0,
                upper_angle,
                SER_QUAD_TOL,
            ) / PI
        })
        .sum();
    total / transmit_probability_snr(policy, avg_snr)
}

/// Average SER of fixed-rate M-PSK over Rayleigh fading: the exact AWGN SER
/// integrated against the exponential SNR density over `[0, inf)`.
pub fn ser_fixed_psk_rayleigh(order: PskOrder, avg_snr: f64) -> f64 {
    debug_assert!(avg_snr > 0.0);
    quad::integrate_to_inf(
        move |g| ser_psk_awgn_exact(g, order) * (-g / avg_snr).exp() / avg_snr,
        0.0,
        SER_QUAD_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adaptation::ThresholdFamily;
    use crate::specfun::Probability;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    fn policy_2to16(target: f64) -> RatePolicy {
        RatePolicy::thresholds_psk(p(target), &[2, 4, 8, 16]).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got:.17e}, want {want:.17e} (diff {:.3e})",
            (got - want).abs()
        );
    }

    /// Direct quadrature of the integrand behind [`g_fn`].
    fn g_oracle(t: f64, y: f64, z: f64, w: f64, v: f64) -> f64 {
        let sqrt2z = std::f64::consts::SQRT_2 * z;
        w * quad::integrate(
            move |x| erfc((v - x) / sqrt2z) * x * (-w * x * x).exp(),
            t,
            y,
            1e-13,
        )
    }

    #[test]
    fn g_fn_matches_direct_quadrature() {
        let (t, y, z, w, v) = (1.0, 2.0, 0.7, 0.5, 1.0);
        let closed = g_fn(t, y, z, w, v);
        let oracle = g_oracle(t, y, z, w, v);
        assert!((closed - oracle).abs() <= 1e-8 * oracle.abs());
        // frozen from 40-digit arithmetic
        assert_close(closed, 0.3381398672994795, 1e-12);
    }

    #[test]
    fn g_fn_quadrature_grid() {
        for (t, y, z, w, v) in [
            (0.0, 1.0, 0.3, 1.0, 0.5),
            (0.5, 3.0, 1.1, 0.2, 2.0),
            (2.0, 2.5, 0.2, 2.0, -1.0),
            (0.1, 10.0, 0.9, 0.7, 4.0),
        ] {
            let closed = g_fn(t, y, z, w, v);
            let oracle = g_oracle(t, y, z, w, v);
            assert!(
                (closed - oracle).abs() <= 1e-8 * oracle.abs().max(1e-3),
                "({t},{y},{z},{w},{v}): {closed} vs {oracle}"
            );
        }
    }

    #[test]
    fn g_fn_saturates_for_large_negative_v() {
        // erfc factor saturates at 2: plain Gaussian-weighted mass remains
        let (t, y, z, w) = (1.0_f64, 2.0_f64, 0.7, 0.5);
        let mass = (-w * t * t).exp() - (-w * y * y).exp();
        let g = g_fn(t, y, z, w, -50.0);
        assert_close(g, mass, 1e-12);
        assert_close(g, g_oracle(t, y, z, w, -50.0), 1e-10);
    }

    #[test]
    fn g_fn_vanishes_on_empty_interval() {
        // t = y: the integral is over an empty interval for any v, so the
        // pi1 combination of two such terms vanishes (up to rounding)
        for v in [-3.0, 0.0, 1.5, 40.0] {
            assert!(g_fn(1.5, 1.5, 0.7, 0.5, v).abs() < 1e-15);
        }
    }

    #[test]
    #[should_panic(expected = "domain error")]
    fn g_fn_rejects_nonpositive_z() {
        g_fn(0.0, 1.0, 0.0, 1.0, 0.0);
    }

    #[test]
    #[should_panic(expected = "domain error")]
    fn g_fn_rejects_nonpositive_w() {
        g_fn(0.0, 1.0, 1.0, -0.5, 0.0);
    }

    #[test]
    fn pi1_matches_quadrature_on_sample_grid() {
        for target in [1e-2, 1e-3] {
            let policy = policy_2to16(target);
            for db in [0.0, 10.0, 20.0] {
                let link = LinkParams::from_avg_snr_db(db);
                for j in 1..=4 {
                    let q = RegionQuery::new(&policy, &link, j);
                    let closed = pi1(&q);
                    let oracle = pi1_quadrature(&q);
                    assert!(
                        (closed - oracle).abs() <= 1e-8,
                        "P={target} {db}dB region {j}: {closed} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn pi1_matches_2d_brute_force() {
        // midpoint rule over (y, n_I) on a 2000 x 2000 grid
        let policy = policy_2to16(1e-3);
        let link = LinkParams::from_avg_snr_db(10.0);
        let q = RegionQuery::new(&policy, &link, 1);

        let n0 = link.noise_density();
        let t = (n0 * q.gamma_lo()).sqrt();
        let u = (n0 * q.gamma_hi()).sqrt();
        let n = 2000;
        let hy = (u - t) / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let y = t + (i as f64 + 0.5) * hy;
            let fy = 2.0 * y * (-y * y).exp(); // omega = E_S = 1
            let (lo, hi) = (t - y, u - y);
            let hn = (hi - lo) / n as f64;
            let mut inner = 0.0;
            for k in 0..n {
                let nv = lo + (k as f64 + 0.5) * hn;
                inner += (-nv * nv / n0).exp();
            }
            total += fy * inner * hn * hy / (PI * n0).sqrt();
        }
        assert_close(pi1(&q), total, 1e-6);
    }

    #[test]
    fn pi1_of_all_covering_region_is_positive_z_mass() {
        // single region [0, inf): the joint event reduces to {z >= 0}
        let policy =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![4], vec![0.0], 1e-3).unwrap();
        let link = LinkParams::new(1.0, 1.0, 1.0).unwrap();
        let q = RegionQuery::new(&policy, &link, 1);
        let prob_z_nonneg = 0.5 - fz_antiderivative(0.0, &link);
        assert_close(pi1(&q), prob_z_nonneg, 1e-12);
        // at omega = E_S = N0 = 1 this is 1/2 + 1/(2 sqrt 2)
        assert_close(pi1(&q), 0.8535533905932737, 1e-12);
    }

    #[test]
    fn pi1_bounded_by_marginals() {
        let policy = policy_2to16(1e-3);
        for db in [0.0, 5.0, 10.0, 15.0, 20.0] {
            let link = LinkParams::from_avg_snr_db(db);
            for j in 1..=4 {
                let q = RegionQuery::new(&policy, &link, j);
                let joint = pi1(&q);
                assert!(joint <= snr_region_mass(&q) + 1e-12);
                assert!(joint <= sn_region_mass(&q) + 1e-12);
            }
        }
    }

    #[test]
    fn pi1_to_mass_ratio_saturates_at_high_snr() {
        // thresholds in amplitude units scale with sqrt(N0) exactly as the
        // noise does, so the ratio converges to a region constant, not to 1
        let policy = policy_2to16(1e-3);
        let mut prev_ratio: Option<f64> = None;
        for db in [30.0, 40.0] {
            let link = LinkParams::from_avg_snr_db(db);
            let q = RegionQuery::new(&policy, &link, 1);
            let ratio = pi1(&q) / snr_region_mass(&q);
            assert!(ratio < 0.5 && ratio > 0.4, "ratio {ratio}");
            if let Some(prev) = prev_ratio {
                assert!(
                    (ratio - prev).abs() < 5e-3,
                    "ratio drifted: {prev} -> {ratio}"
                );
            }
            prev_ratio = Some(ratio);
        }
    }

    #[test]
    fn pi2_is_the_conditional_ratio() {
        let policy = policy_2to16(1e-3);
        let link = LinkParams::from_avg_snr_db(15.0);
        for j in 1..=4 {
            let q = RegionQuery::new(&policy, &link, j);
            assert_close(pi2(&q) * snr_region_mass(&q), pi1(&q), 1e-15);
        }
        // all-covering region: mass is 1, pi2 equals pi1
        let full =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![4], vec![0.0], 1e-3).unwrap();
        let q = RegionQuery::new(&full, &link, 1);
        assert_close(pi2(&q), pi1(&q), 1e-15);
    }

    #[test]
    fn fz_pdf_normalizes_and_is_nonnegative() {
        for (omega, es, n0) in [(1.0, 1.0, 1.0), (2.0, 1.0, 0.3), (0.5, 2.0, 4.0)] {
            let link = LinkParams::new(omega, es, n0).unwrap();
            let mass = quad::integrate_real_line(|z| fz_pdf(z, &link), 1e-11);
            assert_close(mass, 1.0, 1e-9);

            let spread = (es * omega + n0).sqrt();
            let mut z = -10.0 * spread;
            while z <= 10.0 * spread {
                assert!(fz_pdf(z, &link) >= 0.0, "fz({z}) < 0");
                z += spread / 16.0;
            }
        }
    }

    #[test]
    fn fz_pdf_degenerates_to_gaussian_without_signal() {
        // E_s -> 0: z is just the in-phase noise
        let link = LinkParams::new(1.0, 1e-18, 1.0).unwrap();
        let sigma2 = 0.5;
        for z in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            let gauss = (2.0 * PI * sigma2).sqrt().recip() * (-z * z / (2.0 * sigma2)).exp();
            assert_close(fz_pdf(z, &link), gauss, 1e-6);
        }
    }

    #[test]
    fn antiderivative_differentiates_to_pdf() {
        let link = LinkParams::new(1.0, 1.0, 1.0).unwrap();
        let h = 1e-5;
        let mut z = -4.0;
        while z <= 6.0 {
            let fd =
                (fz_antiderivative(z + h, &link) - fz_antiderivative(z - h, &link)) / (2.0 * h);
            assert_close(fd, fz_pdf(z, &link), 1e-6);
            z += 0.25;
        }
    }

    #[test]
    fn antiderivative_differences_match_quadrature() {
        let link = LinkParams::new(1.0, 1.0, 1.0).unwrap();
        for (a, b) in [(0.0, 1.0), (-2.0, 0.5), (1.0, 4.0), (-6.0, 6.0)] {
            let diff = fz_antiderivative(b, &link) - fz_antiderivative(a, &link);
            let oracle = quad::integrate(|z| fz_pdf(z, &link), a, b, 1e-11);
            assert_close(diff, oracle, 1e-8);
        }
    }

    #[test]
    fn antiderivative_total_mass() {
        let link = LinkParams::new(1.0, 1.0, 1.0).unwrap();
        let b = 8.0 * (link.symbol_energy() * link.omega() + link.noise_density()).sqrt();
        let total = fz_antiderivative(b, &link) - fz_antiderivative(-b, &link);
        assert_close(total, 1.0, 1e-12);
    }

    #[test]
    fn sn_region_masses_telescope() {
        // outage mass (z in [0, sqrt(N0 g1))) plus the region masses equals
        // Pr{z >= 0}
        let policy = policy_2to16(1e-3);
        let link = LinkParams::from_avg_snr_db(8.0);
        let n0 = link.noise_density();
        let outage = fz_antiderivative((n0 * policy.thresholds()[0]).sqrt(), &link)
            - fz_antiderivative(0.0, &link);
        let regions: f64 = (1..=4)
            .map(|j| sn_region_mass(&RegionQuery::new(&policy, &link, j)))
            .sum();
        let z_nonneg = 0.5 - fz_antiderivative(0.0, &link);
        assert_close(outage + regions, z_nonneg, 1e-14);
    }

    #[test]
    fn spectral_efficiency_sn_against_quadrature() {
        for target in [1e-2, 1e-3] {
            let policy = policy_2to16(target);
            for db in [0.0, 10.0, 20.0, 30.0] {
                let link = LinkParams::from_avg_snr_db(db);
                let closed = spectral_efficiency_sn(&policy, &link);
                let oracle = spectral_efficiency_sn_quadrature(&policy, &link);
                assert_close(closed, oracle, 1e-8);
            }
        }
    }

    #[test]
    fn spectral_efficiency_sn_single_full_region() {
        let policy =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![8], vec![0.0], 1e-3).unwrap();
        let link = LinkParams::new(1.0, 1.0, 1.0).unwrap();
        let eff = spectral_efficiency_sn(&policy, &link);
        let z_nonneg = 0.5 - fz_antiderivative(0.0, &link);
        // one-sided convention: slightly below the full 3 bits
        assert_close(eff, 3.0 * z_nonneg, 1e-12);
        assert!(eff < 3.0);
    }

    #[test]
    fn spectral_efficiency_snr_closed_form() {
        // single order over [0, inf) -> exactly log2 M
        let policy =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![16], vec![0.0], 1e-3).unwrap();
        assert_eq!(spectral_efficiency_snr(&policy, 10.0), 4.0);

        // gbar -> 0: all mass in outage
        let ladder = policy_2to16(1e-3);
        assert!(spectral_efficiency_snr(&ladder, 1e-9) < 1e-200);

        // matches the quadrature route
        for db in [0.0, 10.0, 20.0] {
            let gbar = 10f64.powf(db / 10.0);
            assert_close(
                spectral_efficiency_snr(&ladder, gbar),
                spectral_efficiency_snr_quadrature(&ladder, gbar),
                1e-9,
            );
        }
    }

    #[test]
    fn spectral_efficiencies_monotone_and_bounded() {
        let policy = policy_2to16(1e-3);
        let mut prev_snr = 0.0;
        let mut prev_sn = 0.0;
        for db in [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0] {
            let gbar = 10f64.powf(db / 10.0);
            let link = LinkParams::from_avg_snr_db(db);
            let s_snr = spectral_efficiency_snr(&policy, gbar);
            let s_sn = spectral_efficiency_sn(&policy, &link);
            assert!((0.0..=4.0).contains(&s_snr));
            assert!((0.0..=4.0).contains(&s_sn));
            assert!(s_snr >= prev_snr);
            assert!(s_sn >= prev_sn);
            prev_snr = s_snr;
            prev_sn = s_sn;
        }
    }

    #[test]
    fn ser_vr_snr_reduces_to_classical_bpsk_form() {
        // single-order BPSK policy covering [0, inf): the average is the
        // classical (1 - sqrt(gbar/(1+gbar)))/2
        let policy =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![2], vec![0.0], 1e-3).unwrap();
        for gbar in [0.5_f64, 3.1622776601683795, 10.0, 100.0] {
            let classical = 0.5 * (1.0 - (gbar / (1.0 + gbar)).sqrt());
            assert_close(ser_vr_snr(&policy, gbar), classical, 1e-9);
            assert_close(ser_vr_snr_fubini(&policy, gbar), classical, 1e-9);
        }
    }

    #[test]
    fn ser_vr_snr_routes_agree() {
        let policy = policy_2to16(1e-3);
        for db in [5.0, 10.0, 15.0, 20.0, 25.0] {
            let gbar = 10f64.powf(db / 10.0);
            let nested = ser_vr_snr(&policy, gbar);
            let swapped = ser_vr_snr_fubini(&policy, gbar);
            assert_close(nested, swapped, 1e-9);
        }
    }

    #[test]
    fn ser_vr_snr_stays_at_or_below_target_asymptotically() {
        // every region operates at or above its design point
        let policy = policy_2to16(1e-3);
        let ser = ser_vr_snr(&policy, 1e6);
        assert!(ser <= 1e-3, "ser = {ser}");
    }

    #[test]
    fn ser_vr_snr_conditioning() {
        let policy = policy_2to16(1e-3);
        let gbar = 10.0;
        let conditional = ser_vr_snr(&policy, gbar);
        let unconditional = ser_vr_snr_unconditional(&policy, gbar);
        let ptx = transmit_probability_snr(&policy, gbar);
        assert_close(unconditional, conditional * ptx, 1e-15);
        assert!(conditional > unconditional);
    }

    #[test]
    fn fixed_rate_rayleigh_reference() {
        // frozen 40-digit value of the classical BPSK closed form
        let bpsk = PskOrder::new(2).unwrap();
        assert_close(
            ser_fixed_psk_rayleigh(bpsk, 10.0),
            0.02326870537720384,
            1e-9,
        );
    }

    #[test]
    fn empty_policy_efficiency_is_zero() {
        let empty =
            RatePolicy::from_thresholds(ThresholdFamily::Psk, vec![], vec![], 1e-3).unwrap();
        assert_eq!(spectral_efficiency_snr(&empty, 10.0), 0.0);
        let link = LinkParams::from_avg_snr_db(10.0);
        assert_eq!(spectral_efficiency_sn(&empty, &link), 0.0);
    }
}
