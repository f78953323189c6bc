use std::io::Write;
use std::path::Path;
use std::time::Instant;

use memres::dynsys::Calibration;
use memres::readout::{
    cross_validate, fit_ridge_standardized, mse, predict, read_model, train_test_split, variance, write_model,
    CvConfig, RidgeModel, SplitPlan,
};
use memres::reservoir::{build_features, FeatureCache, FeatureMatrix, ReservoirConfig};
use memres::tasks::{gen_lorenz_dataset, gen_poly_dataset, Dataset, LorenzTaskSettings, TaskId};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::presets::{find_preset, preset_names};
use crate::CliError;

/// Everything that determines one experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub task: TaskId,
    pub preset: String,
    pub reservoir: ReservoirConfig,
    pub cv: CvConfig,
    pub lorenz: LorenzTaskSettings,
    pub points: usize,
    pub train_ratio: f64,
    pub seed: u64,
}

impl ExperimentManifest {
    pub fn new(
        task: TaskId,
        preset: &str,
        config: &Config,
        calibration: Calibration,
        points: usize,
        seed: u64,
    ) -> Result<Self, CliError> {
        let p = find_preset(preset).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset `{preset}`; available: {}",
                preset_names().join(", ")
            ))
        })?;
        let reservoir = ReservoirConfig {
            calibration,
            ..config.reservoir.apply(p.reservoir())
        };
        reservoir.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(ExperimentManifest {
            task,
            preset: preset.to_string(),
            reservoir,
            cv: config.cv.clone(),
            lorenz: config.lorenz,
            points,
            train_ratio: config.train_ratio,
            seed,
        })
    }

    /// SHA-256 of the manifest's JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("manifest serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn stem(&self) -> String {
        format!("{}_{}_s{}", self.preset, self.task, self.seed)
    }

    pub fn dataset(&self) -> Result<Dataset, CliError> {
        Ok(match self.task {
            TaskId::Poly5 => gen_poly_dataset(5, self.points)?,
            TaskId::Poly9 => gen_poly_dataset(9, self.points)?,
            TaskId::Lorenz => gen_lorenz_dataset(self.points, &self.lorenz)?,
        })
    }

    pub fn split(&self) -> Result<SplitPlan, CliError> {
        Ok(train_test_split(self.points, self.train_ratio, self.seed)?)
    }
}

/// Outcome of one cell. Wall time is kept separately so that equal
/// manifests give byte-identical records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub manifest_hash: String,
    pub seed: u64,
    pub preset: String,
    pub task: TaskId,
    pub points: usize,
    pub best_alpha: f64,
    pub train_mse: f64,
    pub test_mse: f64,
    pub normalized_test_mse: f64,
}

pub const RESULT_HEADER: [&str; 9] = [
    "manifest_hash",
    "seed",
    "preset",
    "task",
    "points",
    "best_alpha",
    "train_mse",
    "test_mse",
    "normalized_test_mse",
];

impl ResultRecord {
    pub fn fields(&self) -> [String; 9] {
        [
            self.manifest_hash.clone(),
            self.seed.to_string(),
            self.preset.clone(),
            self.task.to_string(),
            self.points.to_string(),
            self.best_alpha.to_string(),
            self.train_mse.to_string(),
            self.test_mse.to_string(),
            self.normalized_test_mse.to_string(),
        ]
    }
}

pub fn write_records<W: Write>(records: &[ResultRecord], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(RESULT_HEADER)?;
    for r in records {
        wr.write_record(r.fields())?;
    }
    wr.flush()?;
    Ok(())
}

/// Test-set predictions of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub u: Vec<f64>,
    pub x_raw: Vec<f64>,
    pub target: Vec<f64>,
    pub prediction: Vec<f64>,
}

impl Predictions {
    pub fn write_csv<W: Write>(&self, manifest_hash: &str, seed: u64, mut w: W) -> Result<(), CliError> {
        writeln!(w, "# manifest: {manifest_hash} seed: {seed}")?;
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["u", "x_raw", "target", "prediction"])?;
        for i in 0..self.u.len() {
            wr.write_record([
                self.u[i].to_string(),
                self.x_raw[i].to_string(),
                self.target[i].to_string(),
                self.prediction[i].to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub record: ResultRecord,
    pub model: RidgeModel,
    pub predictions: Predictions,
    pub cache_hit: bool,
    pub wall_time_s: f64,
}

/// Features for the dataset grid, through the cache when one is given.
pub fn features_for(
    manifest: &ExperimentManifest,
    inputs: &[f64],
    cache: Option<&FeatureCache>,
) -> Result<(FeatureMatrix, bool), CliError> {
    Ok(match cache {
        Some(c) => c.load_or_build(&manifest.reservoir, inputs)?,
        None => (build_features(inputs, &manifest.reservoir)?, false),
    })
}

/// Fits the readout on the training split: CV over α, then a final fit.
pub fn train(
    manifest: &ExperimentManifest,
    cache: Option<&FeatureCache>,
) -> Result<(RidgeModel, f64, bool), CliError> {
    let data = manifest.dataset()?;
    let (fm, hit) = features_for(manifest, &data.u, cache)?;
    let split = manifest.split()?;
    let x_train = fm.features.select_rows(&split.train_idx);
    let y_train: Vec<f64> = split.train_idx.iter().map(|&i| data.target[i]).collect();
    let cv = cross_validate(&x_train, &y_train, &manifest.cv, manifest.seed)?;
    let model = if manifest.cv.standardize {
        fit_ridge_standardized(&x_train, &y_train, cv.best_alpha)?
    } else {
        memres::readout::fit_ridge(&x_train, &y_train, cv.best_alpha)?
    };
    Ok((model, cv.best_alpha, hit))
}

/// Scores a fitted model on the manifest's split.
pub fn evaluate(
    manifest: &ExperimentManifest,
    model: &RidgeModel,
    cache: Option<&FeatureCache>,
) -> Result<(ResultRecord, Predictions, bool), CliError> {
    let data = manifest.dataset()?;
    let (fm, hit) = features_for(manifest, &data.u, cache)?;
    let split = manifest.split()?;
    let pick = |idx: &[usize], v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<f64>>();
    let train_pred = predict(model, &fm.features.select_rows(&split.train_idx))?;
    let test_pred = predict(model, &fm.features.select_rows(&split.test_idx))?;
    let y_test = pick(&split.test_idx, &data.target);
    let train_mse = mse(&train_pred, &pick(&split.train_idx, &data.target))?;
    let test_mse = mse(&test_pred, &y_test)?;
    let record = ResultRecord {
        manifest_hash: manifest.hash(),
        seed: manifest.seed,
        preset: manifest.preset.clone(),
        task: manifest.task,
        points: manifest.points,
        best_alpha: model.reg_alpha,
        train_mse,
        test_mse,
        normalized_test_mse: test_mse / variance(&data.target),
    };
    let predictions = Predictions {
        u: pick(&split.test_idx, &data.u),
        x_raw: pick(&split.test_idx, &data.x_raw),
        target: y_test,
        prediction: test_pred,
    };
    Ok((record, predictions, hit))
}

/// Dataset → features → split → CV → fit → test.
pub fn run_experiment(manifest: &ExperimentManifest, cache: Option<&FeatureCache>) -> Result<ExperimentOutput, CliError> {
    let start = Instant::now();
    let (model, _, hit) = train(manifest, cache)?;
    let (record, predictions, _) = evaluate(manifest, &model, cache)?;
    Ok(ExperimentOutput {
        record,
        model,
        predictions,
        cache_hit: hit,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Writes `<stem>_result.csv`, `<stem>_predictions.csv`, `<stem>_model.txt`
/// and `<stem>_timing.csv`.
pub fn write_outputs(out_dir: &Path, manifest: &ExperimentManifest, out: &ExperimentOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    let stem = manifest.stem();
    write_records(
        std::slice::from_ref(&out.record),
        std::fs::File::create(out_dir.join(format!("{stem}_result.csv")))?,
    )?;
    out.predictions.write_csv(
        &out.record.manifest_hash,
        manifest.seed,
        std::fs::File::create(out_dir.join(format!("{stem}_predictions.csv")))?,
    )?;
    save_model(&out_dir.join(format!("{stem}_model.txt")), manifest, &out.model)?;
    let mut t = csv::Writer::from_path(out_dir.join(format!("{stem}_timing.csv")))?;
    t.write_record(["manifest_hash", "seed", "wall_time_s", "feature_cache_hit"])?;
    t.write_record([
        out.record.manifest_hash.clone(),
        manifest.seed.to_string(),
        format!("{:.3}", out.wall_time_s),
        out.cache_hit.to_string(),
    ])?;
    t.flush()?;
    Ok(())
}

pub fn save_model(path: &Path, manifest: &ExperimentManifest, model: &RidgeModel) -> Result<(), CliError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_model(model, &mut f)?;
    writeln!(f, "# manifest: {} seed: {}", manifest.hash(), manifest.seed)?;
    f.flush()?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<RidgeModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read model {}: {e}", path.display())))?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    Ok(read_model(body.as_bytes())?)
}
