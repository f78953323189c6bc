use std::path::Path;

use memres::bifurcation::SweepSpec;
use memres::dynsys::{Calibration, ForcingSign};
use memres::readout::{CvConfig, DEFAULT_TRAIN_RATIO};
use memres::reservoir::ReservoirConfig;
use memres::tasks::{LorenzTaskSettings, DEFAULT_POINTS};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Dataset size used by `--ci-scale`.
pub const CI_POINTS: usize = 1000;
pub const CALIBRATION_FILE: &str = "calibration.toml";

/// Experiment settings read from `--config`. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub points: usize,
    pub train_ratio: f64,
    /// Seeds per cell in `reproduce --sweep`.
    pub sweep_seeds: usize,
    pub calibration: Option<CalibrationFile>,
    pub reservoir: HarvestSettings,
    pub cv: CvConfig,
    pub lorenz: LorenzTaskSettings,
    pub bifurcation: BifurcationSettings,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            points: DEFAULT_POINTS,
            train_ratio: DEFAULT_TRAIN_RATIO,
            sweep_seeds: 10,
            calibration: None,
            reservoir: HarvestSettings::default(),
            cv: CvConfig::default(),
            lorenz: LorenzTaskSettings::default(),
            bifurcation: BifurcationSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarvestSettings {
    pub n_periods: usize,
    pub samples_per_period: usize,
    pub transient_periods: usize,
    pub steps_per_period: usize,
}

impl Default for HarvestSettings {
    fn default() -> Self {
        let r = ReservoirConfig::new(memres::dynsys::Channel::Resistance, 1.0, 2.0);
        HarvestSettings {
            n_periods: r.n_periods,
            samples_per_period: r.samples_per_period,
            transient_periods: r.transient_periods,
            steps_per_period: r.steps_per_period,
        }
    }
}

impl HarvestSettings {
    pub fn apply(&self, cfg: ReservoirConfig) -> ReservoirConfig {
        ReservoirConfig {
            n_periods: self.n_periods,
            samples_per_period: self.samples_per_period,
            transient_periods: self.transient_periods,
            steps_per_period: self.steps_per_period,
            ..cfg
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BifurcationSettings {
    pub points: usize,
    pub transient_periods: usize,
    pub record_periods: usize,
    pub lyapunov_periods: usize,
    pub steps_per_period: usize,
}

impl Default for BifurcationSettings {
    fn default() -> Self {
        let s = SweepSpec::new(
            memres::dynsys::Channel::Resistance,
            1.0,
            2.0,
            Default::default(),
            Default::default(),
        );
        BifurcationSettings {
            points: s.n_points,
            transient_periods: s.transient_periods,
            record_periods: s.record_periods,
            lyapunov_periods: s.lyapunov_periods,
            steps_per_period: s.steps_per_period,
        }
    }
}

/// Persisted result of `calibrate`, also accepted as a `[calibration]`
/// table in the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub omega_prime: f64,
    pub forcing_sign: ForcingSign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_landmarks: Option<usize>,
}

impl CalibrationFile {
    pub fn calibration(&self) -> Result<Calibration, CliError> {
        Calibration::new(self.omega_prime, self.forcing_sign).map_err(|e| CliError::Config(e.to_string()))
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let cfg: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.points < 3 {
            return Err(format!("points must be at least 3, got {}", self.points));
        }
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return Err(format!("train_ratio must lie in (0, 1), got {}", self.train_ratio));
        }
        if self.sweep_seeds == 0 {
            return Err("sweep_seeds must be at least 1".into());
        }
        self.cv.validate().map_err(|e| e.to_string())?;
        Ok(())
    }

    /// Calibration from the config, else from `<out_dir>/calibration.toml`.
    pub fn resolve_calibration(&self, out_dir: &Path) -> Result<Calibration, CliError> {
        if let Some(c) = &self.calibration {
            return c.calibration();
        }
        let path = out_dir.join(CALIBRATION_FILE);
        let text = std::fs::read_to_string(&path).map_err(|_| {
            CliError::Config(format!(
                "no calibration found at {}; run `memres calibrate --out-dir {}` first, \
                 or add a [calibration] table (omega_prime, forcing_sign) to the config",
                path.display(),
                out_dir.display()
            ))
        })?;
        let file: CalibrationFile =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        file.calibration()
    }
}

pub fn write_calibration(out_dir: &Path, file: &CalibrationFile) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    let text = toml::to_string(file).map_err(|e| CliError::Config(e.to_string()))?;
    std::fs::write(out_dir.join(CALIBRATION_FILE), text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn partial_tables_merge_with_defaults() {
        let c = Config::parse("points = 500\n[reservoir]\nn_periods = 2\n[cv]\nfolds = 3\n").unwrap();
        assert_eq!(c.points, 500);
        assert_eq!(c.reservoir.n_periods, 2);
        assert_eq!(c.reservoir.samples_per_period, 10);
        assert_eq!(c.cv.folds, 3);
        assert_eq!(c.cv.alpha_grid.len(), 12);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Config::parse("pointz = 3").is_err());
        assert!(Config::parse("train_ratio = 1.5").is_err());
        assert!(Config::parse("[cv]\nfolds = 1").is_err());
    }

    #[test]
    fn calibration_round_trip_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Config::default();
        match cfg.resolve_calibration(dir.path()) {
            Err(CliError::Config(msg)) => assert!(msg.contains("memres calibrate")),
            other => panic!("{other:?}"),
        }
        let file = CalibrationFile {
            omega_prime: 0.8107267590408679,
            forcing_sign: ForcingSign::Plus,
            matched_landmarks: Some(4),
        };
        write_calibration(dir.path(), &file).unwrap();
        let cal = cfg.resolve_calibration(dir.path()).unwrap();
        assert_eq!(cal.omega_prime.to_bits(), file.omega_prime.to_bits());
        assert_eq!(cal.forcing_sign, ForcingSign::Plus);
        let inline = Config::parse("[calibration]\nomega_prime = 0.5\nforcing_sign = -1\n").unwrap();
        assert_eq!(inline.resolve_calibration(dir.path()).unwrap().omega_prime, 0.5);
    }
}
