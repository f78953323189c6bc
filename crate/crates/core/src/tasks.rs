//! Target datasets: two polynomials and a Lorenz `x(t)` trace.
//!
//! Every dataset is a list of `(u, x_raw, target)` triples with `u` on a
//! uniform grid over `[0, 1]`. For the polynomials `x_raw` is the affine
//! image of `u` on the task range; for Lorenz it is the time elapsed since the
//! end of the discarded transient.
//!
//! ```
//! use memres::tasks::{gen_poly_dataset, poly5};
//!
//! let d = gen_poly_dataset(5, 3).unwrap();
//! assert_eq!(d.x_raw, vec![-1.25, 1.0, 3.25]);
//! assert_eq!(d.target[1], poly5(1.0));
//! ```

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::dynsys::{integrate_observed, DynError, LorenzParams, LorenzState};

#[derive(Debug, thiserror::Error)]
pub enum TaskError {
    #[error("unknown task `{0}` (expected poly5, poly9 or lorenz)")]
    UnknownTask(String),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error("dataset file: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `x⁵ − 5x⁴ + 5x³ + 5x² − 6x − 1`, by Horner's rule.
pub fn poly5(x: f64) -> f64 {
    ((((x - 5.0) * x + 5.0) * x + 5.0) * x - 6.0) * x - 1.0
}

/// `x⁹ + 3x⁸ − 4.5x⁷ − 21x⁶ + x⁵ + 44x⁴ + 13x³ − 25x² − 11x`, by Horner's rule.
pub fn poly9(x: f64) -> f64 {
    ((((((((x + 3.0) * x - 4.5) * x - 21.0) * x + 1.0) * x + 44.0) * x + 13.0) * x - 25.0) * x - 11.0) * x
}

pub const POLY5_RANGE: (f64, f64) = (-1.25, 3.25);
pub const POLY9_RANGE: (f64, f64) = (-1.791, 1.834);
pub const DEFAULT_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskId {
    Poly5,
    Poly9,
    Lorenz,
}

impl TaskId {
    pub const ALL: [TaskId; 3] = [TaskId::Poly5, TaskId::Poly9, TaskId::Lorenz];

    pub fn name(self) -> &'static str {
        match self {
            TaskId::Poly5 => "poly5",
            TaskId::Poly9 => "poly9",
            TaskId::Lorenz => "lorenz",
        }
    }
}

impl std::fmt::Display for TaskId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TaskId {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| TaskError::UnknownTask(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub u: Vec<f64>,
    pub x_raw: Vec<f64>,
    pub target: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// `n` points `u = i/(n−1)`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    let d = (n.max(2) - 1) as f64;
    (0..n).map(|i| i as f64 / d).collect()
}

/// `lo·(1−u) + hi·u`, which returns both endpoints exactly.
pub fn affine(u: f64, lo: f64, hi: f64) -> f64 {
    lo * (1.0 - u) + hi * u
}

/// Polynomial dataset of degree 5 or 9 on its task range.
pub fn gen_poly_dataset(degree: u32, n: usize) -> Result<Dataset, TaskError> {
    let (f, (lo, hi), name): (fn(f64) -> f64, _, _) = match degree {
        5 => (poly5, POLY5_RANGE, TaskId::Poly5),
        9 => (poly9, POLY9_RANGE, TaskId::Poly9),
        d => return Err(TaskError::UnknownTask(format!("poly{d}"))),
    };
    if n < 2 {
        return Err(TaskError::TooFewPoints(n));
    }
    let u = unit_grid(n);
    let x_raw: Vec<f64> = u.iter().map(|&v| affine(v, lo, hi)).collect();
    let target = x_raw.iter().map(|&x| f(x)).collect();
    Ok(Dataset {
        name: name.to_string(),
        u,
        x_raw,
        target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LorenzTaskSettings {
    pub duration: f64,
    /// Time integrated and discarded before the first sample.
    pub transient_time: f64,
    pub h: f64,
    pub params: LorenzParams,
    pub initial: LorenzState,
}

impl Default for LorenzTaskSettings {
    fn default() -> Self {
        LorenzTaskSettings {
            duration: 10.0,
            transient_time: 30.0,
            h: 1e-3,
            params: LorenzParams::default(),
            initial: LorenzState::TASK_INITIAL,
        }
    }
}

/// `x(t)` of the Lorenz system at `n` equally spaced times spanning
/// `duration`, after a transient.
///
/// The integration is RK4 with step `h`, shortened where needed to land on
/// each sample time exactly.
pub fn gen_lorenz_dataset(n: usize, settings: &LorenzTaskSettings) -> Result<Dataset, TaskError> {
    if n < 2 {
        return Err(TaskError::TooFewPoints(n));
    }
    for (name, value) in [("duration", settings.duration), ("h", settings.h)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(TaskError::InvalidParameter { name, value });
        }
    }
    if !(settings.transient_time >= 0.0) || !settings.transient_time.is_finite() {
        return Err(TaskError::InvalidParameter {
            name: "transient_time",
            value: settings.transient_time,
        });
    }
    settings.params.validate()?;
    let rhs = settings.params.vector_field();
    let u = unit_grid(n);
    let x_raw: Vec<f64> = u.iter().map(|&v| v * settings.duration).collect();

    let mut s: [f64; 3] = settings.initial.into();
    let mut t = 0.0;
    let mut target = Vec::with_capacity(n);
    for &dt in &x_raw {
        let t_next = settings.transient_time + dt;
        if t_next > t {
            s = integrate_observed(&rhs, s, t, t_next, settings.h, |_, _| {})?;
            t = t_next;
        }
        target.push(s[0]);
    }
    Ok(Dataset {
        name: TaskId::Lorenz.to_string(),
        u,
        x_raw,
        target,
    })
}

/// Dataset for a task id with default settings.
pub fn generate(task: TaskId, n: usize) -> Result<Dataset, TaskError> {
    match task {
        TaskId::Poly5 => gen_poly_dataset(5, n),
        TaskId::Poly9 => gen_poly_dataset(9, n),
        TaskId::Lorenz => gen_lorenz_dataset(n, &LorenzTaskSettings::default()),
    }
}

/// Writes `# task: <name>` followed by a `u,x_raw,target` table.
pub fn write_dataset_csv<W: Write>(d: &Dataset, mut w: W) -> Result<(), TaskError> {
    writeln!(w, "# task: {}", d.name)?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["u", "x_raw", "target"])?;
    for i in 0..d.len() {
        wr.write_record([d.u[i].to_string(), d.x_raw[i].to_string(), d.target[i].to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_dataset_csv<R: BufRead>(mut r: R) -> Result<Dataset, TaskError> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let name = first
        .trim()
        .strip_prefix("# task:")
        .map(|s| s.trim().to_string())
        .ok_or_else(|| TaskError::Format("missing `# task:` line".into()))?;
    let mut rd = csv::Reader::from_reader(r);
    if rd.headers()?.iter().collect::<Vec<_>>() != ["u", "x_raw", "target"] {
        return Err(TaskError::Format("expected header u,x_raw,target".into()));
    }
    let mut d = Dataset {
        name,
        u: vec![],
        x_raw: vec![],
        target: vec![],
    };
    for rec in rd.deserialize() {
        let (u, x, t): (f64, f64, f64) = rec?;
        d.u.push(u);
        d.x_raw.push(x);
        d.target.push(t);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_worked_values() {
        assert_eq!(poly5(0.0), -1.0);
        assert_eq!(poly5(1.0), -1.0);
        assert_eq!(poly5(0.5), -2.40625);
        assert_eq!(poly9(0.0), 0.0);
        assert_eq!(poly9(1.0), 0.5);
        assert_eq!(poly9(-1.0), 1.5);
    }

    #[test]
    fn poly_dataset_endpoints() {
        let d = gen_poly_dataset(5, 10_000).unwrap();
        assert_eq!((d.u[0], d.x_raw[0]), (0.0, -1.25));
        assert_eq!(d.target[0], poly5(-1.25));
        let d = gen_poly_dataset(9, 10_000).unwrap();
        assert_eq!(*d.x_raw.last().unwrap(), 1.834);
        assert_eq!(gen_poly_dataset(5, 2).unwrap().x_raw, vec![-1.25, 3.25]);
        assert!(matches!(gen_poly_dataset(7, 10), Err(TaskError::UnknownTask(_))));
        assert!(matches!(gen_poly_dataset(5, 1), Err(TaskError::TooFewPoints(1))));
    }

    #[test]
    fn lorenz_grid_and_bound() {
        let s = LorenzTaskSettings::default();
        let d = gen_lorenz_dataset(10_000, &s).unwrap();
        assert_eq!(d.len(), 10_000);
        assert!(((d.x_raw[1] - d.x_raw[0]) - 10.0 / 9999.0).abs() < 1e-15);
        assert_eq!(*d.x_raw.last().unwrap(), 10.0);
        assert!(d.target.iter().all(|x| x.abs() < 30.0));
        assert!(matches!(
            gen_lorenz_dataset(10, &LorenzTaskSettings { h: 0.0, ..s }),
            Err(TaskError::InvalidParameter { name: "h", .. })
        ));
    }

    #[test]
    fn task_names_round_trip() {
        for t in TaskId::ALL {
            assert_eq!(t.name().parse::<TaskId>().unwrap(), t);
        }
        assert!("poly7".parse::<TaskId>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let d = gen_poly_dataset(9, 17).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# task: poly9\nu,x_raw,target\n"));
        assert_eq!(read_dataset_csv(buf.as_slice()).unwrap(), d);
    }
}
