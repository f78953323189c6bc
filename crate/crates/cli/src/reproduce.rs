use std::io::Write;
use std::path::Path;

use memres::dynsys::Calibration;
use memres::reservoir::FeatureCache;
use memres::tasks::TaskId;
use rayon::prelude::*;

use crate::config::Config;
use crate::experiment::{run_experiment, write_records, ExperimentManifest, ResultRecord};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Both reservoirs on all three tasks.
    Fig6,
    /// Lorenz task in periodic, chaotic and full-range regimes.
    Fig7,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }

    /// `(preset, task)` cells in table order.
    pub fn cells(self) -> Vec<(&'static str, TaskId)> {
        match self {
            Figure::Fig6 => vec![
                ("r-nonchaotic", TaskId::Poly5),
                ("r-nonchaotic", TaskId::Poly9),
                ("r-chaotic", TaskId::Lorenz),
                ("a-nonchaotic", TaskId::Poly5),
                ("a-nonchaotic", TaskId::Poly9),
                ("a-chaotic-narrow", TaskId::Lorenz),
            ],
            Figure::Fig7 => ["r-periodic", "r-chaotic", "r-full", "a-periodic", "a-chaotic", "a-full"]
                .into_iter()
                .map(|p| (p, TaskId::Lorenz))
                .collect(),
        }
    }
}

/// One cell's outcome; failures are kept so the other cells still report.
pub type CellResult = Result<ResultRecord, String>;

/// Preset, task and one result per seed.
pub type FigureCell = (&'static str, TaskId, Vec<CellResult>);

/// Runs every cell of `figure` for each seed. Cells sharing a preset reuse
/// cached features.
pub fn reproduce(
    figure: Figure,
    config: &Config,
    calibration: Calibration,
    points: usize,
    seeds: &[u64],
    cache: Option<&FeatureCache>,
) -> Result<Vec<FigureCell>, CliError> {
    let mut manifests = Vec::new();
    for (preset, task) in figure.cells() {
        let per_seed: Vec<ExperimentManifest> = seeds
            .iter()
            .map(|&s| ExperimentManifest::new(task, preset, config, calibration, points, s))
            .collect::<Result<_, _>>()?;
        manifests.push((preset, task, per_seed));
    }
    // Build each distinct feature matrix once before running cells in parallel.
    if let Some(c) = cache {
        for (_, _, ms) in &manifests {
            let m = &ms[0];
            c.load_or_build(&m.reservoir, &memres::tasks::unit_grid(m.points))?;
        }
    }
    Ok(manifests
        .into_iter()
        .map(|(preset, task, ms)| {
            let results = ms
                .par_iter()
                .map(|m| run_experiment(m, cache).map(|o| o.record).map_err(|e| e.to_string()))
                .collect();
            (preset, task, results)
        })
        .collect())
}

/// Single-seed table: one row per cell, failures as an `error` column.
pub fn write_table<W: Write>(rows: &[(&str, TaskId, Vec<CellResult>)], w: W) -> Result<(), CliError> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (preset, task, results) in rows {
        for r in results {
            match r {
                Ok(rec) => records.push(rec.clone()),
                Err(e) => errors.push(format!("{preset}/{task}: {e}")),
            }
        }
    }
    write_records(&records, w)?;
    if !errors.is_empty() {
        return Err(CliError::Experiment(errors.join("; ")));
    }
    Ok(())
}

/// Multi-seed summary: mean and standard deviation of the test MSE per cell.
pub fn write_sweep_table<W: Write>(rows: &[(&str, TaskId, Vec<CellResult>)], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "preset",
        "task",
        "seeds_ok",
        "seeds_failed",
        "test_mse_mean",
        "test_mse_std",
        "normalized_test_mse_mean",
        "normalized_test_mse_std",
    ])?;
    let mut failed = Vec::new();
    for (preset, task, results) in rows {
        let ok: Vec<&ResultRecord> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
        let n_failed = results.len() - ok.len();
        if n_failed > 0 {
            failed.push(format!("{preset}/{task}"));
        }
        let (m, s) = mean_std(ok.iter().map(|r| r.test_mse));
        let (nm, ns) = mean_std(ok.iter().map(|r| r.normalized_test_mse));
        wr.write_record([
            preset.to_string(),
            task.to_string(),
            ok.len().to_string(),
            n_failed.to_string(),
            m.to_string(),
            s.to_string(),
            nm.to_string(),
            ns.to_string(),
        ])?;
    }
    wr.flush()?;
    if !failed.is_empty() {
        return Err(CliError::Experiment(format!("failed cells: {}", failed.join(", "))));
    }
    Ok(())
}

/// Sample mean and standard deviation (n − 1); NaN when undefined.
pub fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn write_figure(out_dir: &Path, figure: Figure, rows: &[(&str, TaskId, Vec<CellResult>)], sweep: bool) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    if sweep {
        write_sweep_table(rows, std::fs::File::create(out_dir.join(format!("{}_sweep.csv", figure.name())))?)
    } else {
        write_table(rows, std::fs::File::create(out_dir.join(format!("{}.csv", figure.name())))?)
    }
}
