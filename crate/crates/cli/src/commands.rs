//! Subcommand bodies, callable without going through the binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use memres::bifurcation::{
    calibrate_omega, candidate_grid, sweep, BifurcationScan, CalibrationReport, CalibrationSettings, Landmark,
    SectionMode, SweepSpec, DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MAX, DEFAULT_OMEGA_MIN,
};
use memres::dynsys::{Calibration, Channel, PhysicalComponents};
use memres::reservoir::{FeatureCache, ReservoirConfig};

use crate::config::{write_calibration, CalibrationFile, Config};
use crate::CliError;

pub fn cache_for(out_dir: &Path) -> FeatureCache {
    FeatureCache::new(out_dir.join("cache"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrateOptions {
    pub omega_min: f64,
    pub omega_max: f64,
    pub grid_points: usize,
}

impl Default for CalibrateOptions {
    fn default() -> Self {
        CalibrateOptions {
            omega_min: DEFAULT_OMEGA_MIN,
            omega_max: DEFAULT_OMEGA_MAX,
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

/// Runs the landmark calibration, writes `calibration.toml` and
/// `calibration_candidates.csv`.
pub fn calibrate(out_dir: &Path, opts: &CalibrateOptions) -> Result<CalibrationReport, CliError> {
    if !(opts.omega_min > 0.0 && opts.omega_max > opts.omega_min) || opts.grid_points == 0 {
        return Err(CliError::Config(format!(
            "need 0 < omega-min < omega-max and grid-points >= 1, got [{}, {}] x {}",
            opts.omega_min, opts.omega_max, opts.grid_points
        )));
    }
    let grid = candidate_grid(opts.omega_min, opts.omega_max, opts.grid_points);
    let report = calibrate_omega(
        &grid,
        &Landmark::phase_portraits(),
        &PhysicalComponents::default(),
        &CalibrationSettings::default(),
    )
    .map_err(|e| CliError::Experiment(e.to_string()))?;
    std::fs::create_dir_all(out_dir)?;
    let mut wr = csv::Writer::from_path(out_dir.join("calibration_candidates.csv"))?;
    wr.write_record(["omega_prime", "forcing_sign", "matched", "pruned", "observed"])?;
    for c in &report.candidates {
        let observed: Vec<String> = c.outcomes.iter().map(|o| o.observed.to_string()).collect();
        wr.write_record([
            c.candidate.omega_prime.to_string(),
            c.candidate.forcing_sign.to_string(),
            c.matched.to_string(),
            c.pruned.to_string(),
            observed.join(" "),
        ])?;
    }
    wr.flush()?;
    write_calibration(
        out_dir,
        &CalibrationFile {
            omega_prime: report.chosen.omega_prime,
            forcing_sign: report.chosen.forcing_sign,
            matched_landmarks: Some(report.matched),
        },
    )?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcateOptions {
    pub channel: Channel,
    pub start: f64,
    pub stop: f64,
    pub points: Option<usize>,
    pub mode: SectionMode,
}

pub fn sweep_spec(config: &Config, calibration: Calibration, opts: &BifurcateOptions) -> SweepSpec {
    // Same fixed parameter as the reservoir on this channel.
    let base = ReservoirConfig::new(opts.channel, opts.start, opts.stop).base;
    let b = &config.bifurcation;
    SweepSpec {
        n_points: opts.points.unwrap_or(b.points),
        transient_periods: b.transient_periods,
        record_periods: b.record_periods,
        lyapunov_periods: b.lyapunov_periods,
        steps_per_period: b.steps_per_period,
        mode: opts.mode,
        ..SweepSpec::new(opts.channel, opts.start, opts.stop, base, calibration)
    }
}

/// Sweeps one channel and writes the diagram and summary CSVs.
pub fn bifurcate(
    out_dir: &Path,
    config: &Config,
    calibration: Calibration,
    opts: &BifurcateOptions,
) -> Result<(BifurcationScan, PathBuf, PathBuf), CliError> {
    let spec = sweep_spec(config, calibration, opts);
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let scan = sweep(&spec)?;
    std::fs::create_dir_all(out_dir)?;
    let sym = opts.channel.symbol();
    let diagram = out_dir.join(format!("bifurcation_{sym}.csv"));
    let summary = out_dir.join(format!("bifurcation_{sym}_summary.csv"));
    let mut f = std::io::BufWriter::new(std::fs::File::create(&diagram)?);
    scan.write_diagram_csv(&mut f)?;
    f.flush()?;
    scan.write_summary_csv(std::fs::File::create(&summary)?)?;
    Ok((scan, diagram, summary))
}
