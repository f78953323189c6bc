//! On-disk feature cache.
//!
//! Each entry is a pair `<key>.csv` (header `u,f_0,…`) and `<key>.json`
//! (config, calibration, shape and a SHA-256 of the CSV bytes). The key
//! hashes the config and the exact bits of the input grid. The CSV is
//! written first and the sidecar last, both via rename, so a present and
//! consistent sidecar marks a complete entry.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynsys::Calibration;
use crate::Matrix;

use super::{build_features, FeatureMatrix, ReservoirConfig, ReservoirError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub key: String,
    pub config: ReservoirConfig,
    pub calibration: Calibration,
    pub n_inputs: usize,
    pub width: usize,
    pub content_sha256: String,
}

/// Hex SHA-256 over the JSON config and the little-endian bits of `inputs`.
pub fn cache_key(cfg: &ReservoirConfig, inputs: &[f64]) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(cfg).expect("config serializes"));
    h.update((inputs.len() as u64).to_le_bytes());
    for u in inputs {
        h.update(u.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone)]
pub struct FeatureCache {
    dir: PathBuf,
}

impl FeatureCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FeatureCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn paths(&self, key: &str) -> (PathBuf, PathBuf) {
        (self.dir.join(format!("{key}.csv")), self.dir.join(format!("{key}.json")))
    }

    /// Cached features, or `None` on a miss or an inconsistent entry.
    pub fn load(&self, cfg: &ReservoirConfig, inputs: &[f64]) -> Result<Option<FeatureMatrix>, ReservoirError> {
        let key = cache_key(cfg, inputs);
        let (csv_path, meta_path) = self.paths(&key);
        let Ok(meta_bytes) = fs::read(&meta_path) else {
            return Ok(None);
        };
        let Ok(meta) = serde_json::from_slice::<CacheMeta>(&meta_bytes) else {
            return Ok(None);
        };
        let Ok(bytes) = fs::read(&csv_path) else {
            return Ok(None);
        };
        if meta.key != key || meta.config != *cfg || meta.n_inputs != inputs.len() || sha256_hex(&bytes) != meta.content_sha256 {
            return Ok(None);
        }
        let fm = parse_csv(&bytes, meta.width)?;
        if fm.inputs.iter().zip(inputs).any(|(a, b)| a.to_bits() != b.to_bits()) {
            return Ok(None);
        }
        Ok(Some(fm))
    }

    pub fn store(&self, cfg: &ReservoirConfig, fm: &FeatureMatrix) -> Result<CacheMeta, ReservoirError> {
        fs::create_dir_all(&self.dir)?;
        let key = cache_key(cfg, &fm.inputs);
        let (csv_path, meta_path) = self.paths(&key);
        let bytes = to_csv(fm)?;
        let meta = CacheMeta {
            key,
            config: *cfg,
            calibration: cfg.calibration,
            n_inputs: fm.len(),
            width: fm.width(),
            content_sha256: sha256_hex(&bytes),
        };
        write_atomic(&csv_path, &bytes)?;
        write_atomic(&meta_path, &serde_json::to_vec_pretty(&meta)?)?;
        Ok(meta)
    }

    /// Loads from the cache or builds and stores. The flag is `true` on a hit.
    pub fn load_or_build(&self, cfg: &ReservoirConfig, inputs: &[f64]) -> Result<(FeatureMatrix, bool), ReservoirError> {
        if let Some(fm) = self.load(cfg, inputs)? {
            return Ok((fm, true));
        }
        let fm = build_features(inputs, cfg)?;
        self.store(cfg, &fm)?;
        Ok((fm, false))
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("entry");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

pub(crate) fn to_csv(fm: &FeatureMatrix) -> Result<Vec<u8>, ReservoirError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["u".to_string()];
    header.extend((0..fm.width()).map(|j| format!("f_{j}")));
    w.write_record(&header)?;
    let mut rec = Vec::with_capacity(fm.width() + 1);
    for (u, row) in fm.inputs.iter().zip(fm.features.iter_rows()) {
        rec.clear();
        rec.push(u.to_string());
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| ReservoirError::Cache(e.to_string()))
}

fn parse_csv(bytes: &[u8], width: usize) -> Result<FeatureMatrix, ReservoirError> {
    let mut rd = csv::Reader::from_reader(bytes);
    if rd.headers()?.len() != width + 1 {
        return Err(ReservoirError::Cache(format!("expected {} columns", width + 1)));
    }
    let mut inputs = Vec::new();
    let mut data = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let mut vals = rec.iter().map(|s| s.parse::<f64>().map_err(|e| ReservoirError::Cache(e.to_string())));
        inputs.push(vals.next().ok_or_else(|| ReservoirError::Cache("empty row".into()))??);
        for v in vals {
            data.push(v?);
        }
    }
    let features = Matrix::from_vec(inputs.len(), width, data).ok_or_else(|| ReservoirError::Cache("ragged rows".into()))?;
    Ok(FeatureMatrix { inputs, features })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::Channel;

    fn cfg() -> ReservoirConfig {
        ReservoirConfig {
            n_periods: 1,
            samples_per_period: 5,
            steps_per_period: 200,
            ..ReservoirConfig::new(Channel::Amplitude, 2.1, 2.5)
        }
    }

    #[test]
    fn key_depends_on_config_and_inputs() {
        let c = cfg();
        let k = cache_key(&c, &[0.0, 0.5]);
        assert_eq!(k.len(), 64);
        assert_eq!(k, cache_key(&c, &[0.0, 0.5]));
        assert_ne!(k, cache_key(&c, &[0.0, 0.5000000001]));
        assert_ne!(k, cache_key(&ReservoirConfig { x_max: 2.6, ..c }, &[0.0, 0.5]));
    }

    #[test]
    fn store_then_load_is_exact_and_tamper_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FeatureCache::new(dir.path());
        let c = cfg();
        let inputs = [0.0, 0.25, 1.0 / 3.0, 1.0];
        let (built, hit) = cache.load_or_build(&c, &inputs).unwrap();
        assert!(!hit);
        let (loaded, hit) = cache.load_or_build(&c, &inputs).unwrap();
        assert!(hit);
        assert_eq!(built, loaded);

        let (csv_path, _) = cache.paths(&cache_key(&c, &inputs));
        let text = fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("u,f_0,f_1,f_2,f_3,f_4\n"));
        fs::write(&csv_path, text.replacen("0.25", "0.26", 1)).unwrap();
        assert!(cache.load(&c, &inputs).unwrap().is_none());
    }
}
