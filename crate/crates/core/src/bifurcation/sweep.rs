use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynsys::{normalize_components, Calibration, Channel, PhysicalComponents, DEFAULT_STEPS_PER_PERIOD};

use super::classify::{classify_regime, ClassifySettings, Regime};
use super::lyapunov::{largest_lyapunov_observed, LyapunovSettings};
use super::BifurcationError;

/// What the diagram ordinate records at each parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionMode {
    /// One v1 sample per forcing period at drive phase 0.
    #[default]
    Stroboscopic,
    /// Every local maximum of v1 over the recorded periods.
    Extrema,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub channel: Channel,
    /// Ω or V, matching `channel`.
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
    pub transient_periods: usize,
    pub record_periods: usize,
    /// Periods averaged by the Lyapunov estimate; at least `record_periods`
    /// are always integrated.
    pub lyapunov_periods: usize,
    pub steps_per_period: usize,
    pub d0: f64,
    pub base: PhysicalComponents,
    pub calibration: Calibration,
    pub mode: SectionMode,
    pub classify: ClassifySettings,
}

impl SweepSpec {
    pub fn new(channel: Channel, start: f64, stop: f64, base: PhysicalComponents, calibration: Calibration) -> Self {
        SweepSpec {
            channel,
            start,
            stop,
            n_points: 600,
            transient_periods: 200,
            record_periods: 128,
            lyapunov_periods: 500,
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            d0: 1e-8,
            base,
            calibration,
            mode: SectionMode::Stroboscopic,
            classify: ClassifySettings::default(),
        }
    }

    pub fn validate(&self) -> Result<(), BifurcationError> {
        if !(self.stop > self.start) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(BifurcationError::InvalidSpec(format!(
                "sweep range must satisfy start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.n_points < 2 {
            return Err(BifurcationError::InvalidSpec("n_points must be at least 2".into()));
        }
        if self.record_periods == 0 || self.steps_per_period == 0 {
            return Err(BifurcationError::InvalidSpec(
                "record_periods and steps_per_period must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn param_values(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                let u = i as f64 / last;
                self.start * (1.0 - u) + self.stop * u
            })
            .collect()
    }

    fn lyapunov_settings(&self) -> LyapunovSettings {
        LyapunovSettings {
            d0: self.d0,
            transient_periods: self.transient_periods,
            periods: self.lyapunov_periods.max(self.record_periods),
            steps_per_period: self.steps_per_period,
            ..Default::default()
        }
    }
}

/// Everything measured at a single parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct PointAnalysis {
    /// Stroboscopic v1 samples in volts, one per recorded period.
    pub section: Vec<f64>,
    /// Local maxima of v1 in volts over the recorded periods.
    pub extrema: Vec<f64>,
    pub lyap: Option<f64>,
    pub regime: Regime,
}

/// Integrates once from the reset state and extracts the section, the
/// extrema, the exponent and the regime label at component values `pc`.
pub fn analyze_point(
    pc: &PhysicalComponents,
    calibration: Calibration,
    settings: &LyapunovSettings,
    record_periods: usize,
    classify: &ClassifySettings,
) -> Result<PointAnalysis, BifurcationError> {
    let params = normalize_components(pc, calibration.forcing_sign)?.with_calibration(calibration);
    let volts = pc.voltage_scale();
    let spp = settings.steps_per_period;
    let first = settings.transient_periods * spp;
    let last = first + record_periods * spp;

    let mut section = Vec::with_capacity(record_periods);
    let mut extrema = Vec::new();
    let mut window = [f64::NAN; 2];
    let result = largest_lyapunov_observed(&params, settings, |n, s| {
        if n < first || n > last {
            return;
        }
        if n < last && (n - first).is_multiple_of(spp) {
            section.push(s[1] * volts);
        }
        let [a, b] = window;
        if b > a && b >= s[1] {
            extrema.push(b * volts);
        }
        window = [b, s[1]];
    });
    match result {
        Ok(lyap) => {
            let regime = classify_regime(&section, lyap, classify)?;
            Ok(PointAnalysis {
                section,
                extrema,
                lyap: Some(lyap),
                regime,
            })
        }
        Err(BifurcationError::LyapunovDiverged { partial, .. }) => Ok(PointAnalysis {
            section,
            extrema,
            lyap: partial,
            regime: Regime::Diverged,
        }),
        Err(e) => Err(e),
    }
}

/// Bifurcation-diagram data plus the per-value regime summary.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationScan {
    pub channel: Channel,
    pub mode: SectionMode,
    pub param_values: Vec<f64>,
    /// Per value: section or extrema samples of v1 in volts, per `mode`.
    pub samples: Vec<Vec<f64>>,
    pub regime: Vec<Regime>,
    pub lyap: Vec<Option<f64>>,
    pub diverged: Vec<bool>,
}

impl BifurcationScan {
    /// Maximal runs of consecutive values sharing a periodic / chaotic label,
    /// as `(is_periodic, first_index, len)`. Diverged points break runs.
    pub fn windows(&self) -> Vec<(bool, usize, usize)> {
        let mut out: Vec<(bool, usize, usize)> = Vec::new();
        for (i, r) in self.regime.iter().enumerate() {
            let kind = match r {
                Regime::Periodic { .. } => Some(true),
                Regime::Chaotic => Some(false),
                Regime::Diverged => None,
            };
            match (kind, out.last_mut()) {
                (Some(k), Some(last)) if last.0 == k && last.1 + last.2 == i => last.2 += 1,
                (Some(k), _) => out.push((k, i, 1)),
                (None, _) => {}
            }
        }
        out
    }

    /// Counts `(periodic, chaotic)` windows at least `min_len` values long.
    pub fn window_counts(&self, min_len: usize) -> (usize, usize) {
        self.windows()
            .iter()
            .filter(|w| w.2 >= min_len)
            .fold((0, 0), |(p, c), w| if w.0 { (p + 1, c) } else { (p, c + 1) })
    }

    fn param_header(&self) -> String {
        format!("{}_{}", self.channel.symbol(), self.channel.unit())
    }

    /// Diagram CSV: one row per `(param_value, sample)`.
    pub fn write_diagram_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([self.param_header().as_str(), "v1_V"])?;
        for (p, samples) in self.param_values.iter().zip(&self.samples) {
            for s in samples {
                wr.write_record([p.to_string(), s.to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Summary CSV: one row per parameter value.
    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([self.param_header().as_str(), "regime", "period", "lyap_per_unit_time", "diverged"])?;
        for i in 0..self.param_values.len() {
            let (label, period) = match self.regime[i] {
                Regime::Periodic { period } => ("periodic", period.to_string()),
                Regime::Chaotic => ("chaotic", String::new()),
                Regime::Diverged => ("diverged", String::new()),
            };
            wr.write_record([
                self.param_values[i].to_string(),
                label.to_string(),
                period,
                self.lyap[i].map(|l| l.to_string()).unwrap_or_default(),
                self.diverged[i].to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Sweeps `spec.channel` over `[start, stop]`.
///
/// Each value is integrated independently from the origin; the work runs in
/// parallel and results are ordered by parameter index. Divergence at a value
/// is recorded in `diverged` rather than failing the sweep.
pub fn sweep(spec: &SweepSpec) -> Result<BifurcationScan, BifurcationError> {
    spec.validate()?;
    let values = spec.param_values();
    let settings = spec.lyapunov_settings();
    let points: Vec<PointAnalysis> = values
        .par_iter()
        .map(|&v| {
            let pc = spec.base.with_channel(spec.channel, v);
            analyze_point(&pc, spec.calibration, &settings, spec.record_periods, &spec.classify)
        })
        .collect::<Result<_, _>>()?;

    let mut scan = BifurcationScan {
        channel: spec.channel,
        mode: spec.mode,
        param_values: values,
        samples: Vec::with_capacity(points.len()),
        regime: Vec::with_capacity(points.len()),
        lyap: Vec::with_capacity(points.len()),
        diverged: Vec::with_capacity(points.len()),
    };
    for p in points {
        scan.diverged.push(p.regime == Regime::Diverged);
        scan.regime.push(p.regime);
        scan.lyap.push(p.lyap);
        scan.samples.push(match spec.mode {
            SectionMode::Stroboscopic => p.section,
            SectionMode::Extrema => p.extrema,
        });
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_spec(start: f64, stop: f64) -> SweepSpec {
        SweepSpec {
            n_points: 3,
            transient_periods: 50,
            record_periods: 40,
            lyapunov_periods: 60,
            steps_per_period: 400,
            ..SweepSpec::new(Channel::Resistance, start, stop, PhysicalComponents::default(), Calibration::default())
        }
    }

    #[test]
    fn collapsed_range_is_rejected() {
        let spec = quick_spec(2.1e3, 2.1e3);
        assert!(matches!(sweep(&spec), Err(BifurcationError::InvalidSpec(_))));
        let spec = SweepSpec { n_points: 1, ..quick_spec(1.9e3, 2.0e3) };
        assert!(matches!(sweep(&spec), Err(BifurcationError::InvalidSpec(_))));
    }

    #[test]
    fn section_length_equals_record_periods() {
        let scan = sweep(&quick_spec(1.9e3, 2.8e3)).unwrap();
        assert_eq!(scan.param_values, vec![1.9e3, 2.35e3, 2.8e3]);
        for (s, d) in scan.samples.iter().zip(&scan.diverged) {
            assert!(*d || s.len() == 40);
        }
        assert_eq!(scan.regime.len(), 3);
        assert_eq!(scan.lyap.len(), 3);
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = quick_spec(2.0e3, 2.2e3);
        assert_eq!(sweep(&spec).unwrap(), sweep(&spec).unwrap());
    }

    #[test]
    fn extrema_mode_records_maxima() {
        let spec = SweepSpec { mode: SectionMode::Extrema, ..quick_spec(1.9e3, 2.0e3) };
        let scan = sweep(&spec).unwrap();
        assert!(scan.samples.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn windows_group_consecutive_labels() {
        let scan = BifurcationScan {
            channel: Channel::Resistance,
            mode: SectionMode::Stroboscopic,
            param_values: vec![0.0; 7],
            samples: vec![vec![]; 7],
            regime: vec![
                Regime::Periodic { period: 1 },
                Regime::Periodic { period: 2 },
                Regime::Chaotic,
                Regime::Diverged,
                Regime::Chaotic,
                Regime::Periodic { period: 3 },
                Regime::Chaotic,
            ],
            lyap: vec![None; 7],
            diverged: vec![false; 7],
        };
        assert_eq!(
            scan.windows(),
            vec![(true, 0, 2), (false, 2, 1), (false, 4, 1), (true, 5, 1), (false, 6, 1)]
        );
        assert_eq!(scan.window_counts(1), (2, 3));
        assert_eq!(scan.window_counts(2), (1, 0));
    }

    #[test]
    fn csv_headers_carry_units() {
        let scan = sweep(&quick_spec(1.9e3, 2.0e3)).unwrap();
        let mut diagram = Vec::new();
        scan.write_diagram_csv(&mut diagram).unwrap();
        let text = String::from_utf8(diagram).unwrap();
        assert!(text.starts_with("R_ohm,v1_V\n"));
        assert_eq!(text.lines().count(), 1 + 3 * 40);
        let mut summary = Vec::new();
        scan.write_summary_csv(&mut summary).unwrap();
        let text = String::from_utf8(summary).unwrap();
        assert!(text.starts_with("R_ohm,regime,period,lyap_per_unit_time,diverged\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
