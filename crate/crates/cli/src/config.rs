//! Experiment configuration: a flat, sectioned key-value file (TOML syntax)
//! plus command-line overrides. Unknown keys are errors, not warnings.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use vrpsk::adaptation::ThresholdFamily;
use vrpsk::simulator::{ExperimentConfig, Scheme};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: ExperimentSection,
    pub link: LinkSection,
    pub policy: PolicySection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub scheme: String,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_branches")]
    pub branches: usize,
    #[serde(default = "default_normalize")]
    pub egc_normalize: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    #[serde(default = "default_omega")]
    pub omega: f64,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    #[serde(default = "default_family")]
    pub family: String,
    pub orders: Vec<u32>,
    pub target_ser: f64,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn default_branches() -> usize {
    1
}

fn default_normalize() -> bool {
    true
}

fn default_omega() -> f64 {
    1.0
}

fn default_family() -> String {
    "psk".into()
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: FileConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        self.family()?;
        self.scheme()?;
        let step_ok = self.link.snr_db_step.is_finite() && self.link.snr_db_step > 0.0;
        if !step_ok && self.link.snr_db_stop != self.link.snr_db_start {
            bail!("link.snr_db_step must be positive for a multi-point sweep");
        }
        Ok(())
    }

    pub fn family(&self) -> Result<ThresholdFamily> {
        self.policy
            .family
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))
    }

    pub fn scheme(&self) -> Result<Scheme> {
        self.experiment
            .scheme
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))
    }

    /// The inclusive dB grid `start, start + step, ..., <= stop`.
    pub fn snr_grid(&self) -> Vec<f64> {
        snr_grid(
            self.link.snr_db_start,
            self.link.snr_db_stop,
            self.link.snr_db_step,
        )
    }

    /// Resolved simulator configuration. PSK-family only: QAM policies are
    /// threshold tables, not transmittable constellations.
    pub fn experiment_config(&self, overrides: &Overrides) -> Result<ExperimentConfig> {
        if self.family()? != ThresholdFamily::Psk {
            bail!("only policy.family = \"psk\" can be simulated or analyzed");
        }
        let config = ExperimentConfig {
            scheme: self.scheme()?,
            snr_db_grid: self.snr_grid(),
            omega: self.link.omega,
            orders: self.policy.orders.clone(),
            target_ser: self.policy.target_ser,
            branches: self.experiment.branches,
            trials: overrides.trials.unwrap_or(self.experiment.trials),
            seed: overrides.seed.unwrap_or(self.experiment.seed),
            workers: overrides.workers.unwrap_or(self.experiment.workers),
            egc_normalize: self.experiment.egc_normalize,
        };
        config.validate()?;
        Ok(config)
    }

    /// One-line resolved-config record for CSV headers. Deliberately leaves
    /// out `workers`: it cannot influence results, and recording it would
    /// break byte-identity across worker counts.
    pub fn comment_line(&self, config: &ExperimentConfig) -> String {
        format!(
            "# config: scheme={} orders={} target_ser={} family={} omega={} \
             snr_db={}:{}:{} trials={} seed={} branches={} egc_normalize={}",
            config.scheme,
            join_u32(&config.orders),
            config.target_ser,
            self.policy.family,
            config.omega,
            self.link.snr_db_start,
            self.link.snr_db_step,
            self.link.snr_db_stop,
            config.trials,
            config.seed,
            config.branches,
            config.egc_normalize,
        )
    }
}

pub fn join_u32(values: &[u32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Inclusive float grid with an index-based step so accumulation error
/// cannot drop the last point.
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if stop == start {
        return vec![start];
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[experiment]
scheme = "vr_sn"
trials = 1000
seed = 7

[link]
snr_db_start = 0.0
snr_db_stop = 10.0
snr_db_step = 2.5

[policy]
orders = [2, 4, 8, 16]
target_ser = 1e-3
"#;

    #[test]
    fn parses_and_resolves() {
        let config: FileConfig = toml::from_str(GOOD).unwrap();
        config.check().unwrap();
        let exp = config.experiment_config(&Overrides::default()).unwrap();
        assert_eq!(exp.scheme, Scheme::VrSn);
        assert_eq!(exp.snr_db_grid, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        assert_eq!(exp.trials, 1000);
        assert_eq!(exp.branches, 1);
    }

    #[test]
    fn overrides_win() {
        let config: FileConfig = toml::from_str(GOOD).unwrap();
        let ov = Overrides {
            seed: Some(99),
            trials: Some(5),
            workers: Some(2),
        };
        let exp = config.experiment_config(&ov).unwrap();
        assert_eq!(exp.seed, 99);
        assert_eq!(exp.trials, 5);
        assert_eq!(exp.workers, 2);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let bad = GOOD.replace("seed = 7", "seed = 7\nbogus_key = 1");
        let err = toml::from_str::<FileConfig>(&bad).unwrap_err().to_string();
        assert!(err.contains("bogus_key"), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = GOOD.replace("trials = 1000", "trials = ");
        let err = toml::from_str::<FileConfig>(&bad).unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn grid_includes_endpoint() {
        assert_eq!(snr_grid(0.0, 30.0, 2.5).len(), 13);
        assert_eq!(snr_grid(5.0, 5.0, 1.0), vec![5.0]);
        let g = snr_grid(0.0, 0.3, 0.1);
        assert_eq!(g.len(), 4);
        assert!((g[3] - 0.3).abs() < 1e-12);
    }
}
