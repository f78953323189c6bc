//! Selection of the forcing frequency and β-term sign.
//!
//! The drive frequency of the circuit is not fixed by its component values,
//! so it is chosen by matching regime landmarks of the resistance sweep: each
//! candidate `(ω′, sign)` is scored by how many landmarks it classifies
//! correctly, and the best-scoring candidate wins.

use serde::{Deserialize, Serialize};

use crate::dynsys::{Calibration, ForcingSign, PhysicalComponents, DEFAULT_STEPS_PER_PERIOD};

use super::classify::{ClassifySettings, Regime};
use super::lyapunov::LyapunovSettings;
use super::sweep::analyze_point;
use super::BifurcationError;

/// Lower end of the default ω′ search range.
pub const DEFAULT_OMEGA_MIN: f64 = 0.01;
/// Upper end of the default ω′ search range.
pub const DEFAULT_OMEGA_MAX: f64 = 2.0;
/// Log-spaced ω′ values per sign in the default grid.
pub const DEFAULT_GRID_POINTS: usize = 400;
/// A calibration must match at least this many landmarks.
pub const MIN_MATCHED_LANDMARKS: usize = 3;

/// Expected regime at one `(R, A)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    pub resistance: f64,
    pub amplitude: f64,
    pub expected: Regime,
}

impl Landmark {
    /// Phase-portrait landmarks at A = 2 V: period-1 at 1.9 kΩ, chaotic at
    /// 2.1 kΩ, period-3 at 2.3 kΩ and chaotic at 2.7 kΩ.
    pub fn phase_portraits() -> Vec<Landmark> {
        [
            (1.9e3, Regime::Periodic { period: 1 }),
            (2.1e3, Regime::Chaotic),
            (2.3e3, Regime::Periodic { period: 3 }),
            (2.7e3, Regime::Chaotic),
        ]
        .into_iter()
        .map(|(resistance, expected)| Landmark {
            resistance,
            amplitude: 2.0,
            expected,
        })
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSettings {
    pub lyapunov: LyapunovSettings,
    pub record_periods: usize,
    pub classify: ClassifySettings,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            lyapunov: LyapunovSettings {
                steps_per_period: DEFAULT_STEPS_PER_PERIOD,
                ..Default::default()
            },
            record_periods: 128,
            classify: ClassifySettings::default(),
        }
    }
}

/// `n_per_sign` log-spaced ω′ values in `[lo, hi]`, for each sign (−1 first).
pub fn candidate_grid(lo: f64, hi: f64, n_per_sign: usize) -> Vec<Calibration> {
    let mut out = Vec::with_capacity(2 * n_per_sign);
    for sign in [ForcingSign::Minus, ForcingSign::Plus] {
        for i in 0..n_per_sign {
            let omega_prime = if n_per_sign == 1 {
                lo
            } else {
                let f = i as f64 / (n_per_sign - 1) as f64;
                (lo.ln() * (1.0 - f) + hi.ln() * f).exp()
            };
            out.push(Calibration { omega_prime, forcing_sign: sign });
        }
    }
    out
}

pub fn default_candidate_grid() -> Vec<Calibration> {
    candidate_grid(DEFAULT_OMEGA_MIN, DEFAULT_OMEGA_MAX, DEFAULT_GRID_POINTS)
}

/// Observed outcome of one landmark under one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandmarkOutcome {
    pub landmark: usize,
    pub observed: Regime,
    pub lyap: Option<f64>,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub candidate: Calibration,
    pub matched: usize,
    /// Landmarks evaluated, in order. Evaluation stops early once the
    /// candidate can no longer reach the best score seen so far.
    pub outcomes: Vec<LandmarkOutcome>,
    pub pruned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub chosen: Calibration,
    pub matched: usize,
    pub landmarks: Vec<Landmark>,
    pub candidates: Vec<CandidateOutcome>,
}

impl CalibrationReport {
    /// Outcome row of the chosen candidate.
    pub fn chosen_outcome(&self) -> Option<&CandidateOutcome> {
        self.candidates.iter().find(|c| c.candidate == self.chosen)
    }
}

fn regime_matches(observed: Regime, expected: Regime) -> bool {
    match expected {
        // A periodic landmark with period 0 accepts any period.
        Regime::Periodic { period: 0 } => observed.is_periodic(),
        _ => observed == expected,
    }
}

/// Evaluates every landmark for one candidate (no pruning).
pub fn evaluate_candidate(
    candidate: Calibration,
    landmarks: &[Landmark],
    base: &PhysicalComponents,
    settings: &CalibrationSettings,
) -> Result<CandidateOutcome, BifurcationError> {
    score_candidate(candidate, landmarks, base, settings, 0)
}

fn score_candidate(
    candidate: Calibration,
    landmarks: &[Landmark],
    base: &PhysicalComponents,
    settings: &CalibrationSettings,
    to_beat: usize,
) -> Result<CandidateOutcome, BifurcationError> {
    let mut outcome = CandidateOutcome {
        candidate,
        matched: 0,
        outcomes: Vec::with_capacity(landmarks.len()),
        pruned: false,
    };
    for (i, lm) in landmarks.iter().enumerate() {
        let remaining = landmarks.len() - i;
        if outcome.matched + remaining < to_beat {
            outcome.pruned = true;
            break;
        }
        let pc = PhysicalComponents {
            r: lm.resistance,
            amplitude: lm.amplitude,
            ..*base
        };
        let point = analyze_point(&pc, candidate, &settings.lyapunov, settings.record_periods, &settings.classify)?;
        let matched = regime_matches(point.regime, lm.expected);
        outcome.matched += matched as usize;
        outcome.outcomes.push(LandmarkOutcome {
            landmark: i,
            observed: point.regime,
            lyap: point.lyap,
            matched,
        });
    }
    Ok(outcome)
}

/// Picks the candidate matching the most landmarks.
///
/// Candidates are scanned in order. Among those tied at the best score, the
/// longest run of consecutive candidates is taken (earliest on equal length)
/// and its middle element returned, which favours the interior of a matching
/// frequency band over its edges.
pub fn calibrate_omega(
    candidates: &[Calibration],
    landmarks: &[Landmark],
    base: &PhysicalComponents,
    settings: &CalibrationSettings,
) -> Result<CalibrationReport, BifurcationError> {
    if candidates.is_empty() {
        return Err(BifurcationError::InvalidSpec("candidate list is empty".into()));
    }
    if landmarks.is_empty() {
        return Err(BifurcationError::InvalidSpec("landmark list is empty".into()));
    }
    let mut outcomes = Vec::with_capacity(candidates.len());
    let mut best = 0usize;
    for &c in candidates {
        let o = score_candidate(c, landmarks, base, settings, best)?;
        best = best.max(o.matched);
        outcomes.push(o);
    }

    let required = MIN_MATCHED_LANDMARKS.min(landmarks.len());
    if best < required {
        return Err(BifurcationError::CalibrationFailed {
            best,
            required,
            diagnostics: diagnostics(&outcomes, landmarks),
        });
    }

    // Longest run of consecutive best-scoring candidates sharing a sign.
    let mut best_run = (0usize, 0usize);
    let mut i = 0;
    while i < outcomes.len() {
        if outcomes[i].matched != best {
            i += 1;
            continue;
        }
        let start = i;
        let sign = outcomes[i].candidate.forcing_sign;
        while i < outcomes.len() && outcomes[i].matched == best && outcomes[i].candidate.forcing_sign == sign {
            i += 1;
        }
        if i - start > best_run.1 {
            best_run = (start, i - start);
        }
    }
    let chosen = outcomes[best_run.0 + (best_run.1 - 1) / 2].candidate;
    Ok(CalibrationReport {
        chosen,
        matched: best,
        landmarks: landmarks.to_vec(),
        candidates: outcomes,
    })
}

fn diagnostics(outcomes: &[CandidateOutcome], landmarks: &[Landmark]) -> String {
    let mut lines = vec![format!(
        "{} candidates evaluated against {} landmarks",
        outcomes.len(),
        landmarks.len()
    )];
    let mut ranked: Vec<&CandidateOutcome> = outcomes.iter().collect();
    ranked.sort_by_key(|o| std::cmp::Reverse(o.matched));
    for o in ranked.iter().take(5) {
        let observed: Vec<String> = o.outcomes.iter().map(|l| l.observed.to_string()).collect();
        lines.push(format!(
            "omega'={:.5} sign={} matched={} observed=[{}]",
            o.candidate.omega_prime,
            o.candidate.forcing_sign,
            o.matched,
            observed.join(", ")
        ));
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cheap() -> CalibrationSettings {
        CalibrationSettings {
            lyapunov: LyapunovSettings {
                transient_periods: 100,
                periods: 128,
                steps_per_period: 500,
                ..Default::default()
            },
            record_periods: 64,
            classify: ClassifySettings::default(),
        }
    }

    #[test]
    fn grid_shape() {
        let g = candidate_grid(0.01, 2.0, 5);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0].forcing_sign, ForcingSign::Minus);
        assert_eq!(g[5].forcing_sign, ForcingSign::Plus);
        assert!((g[0].omega_prime - 0.01).abs() < 1e-15);
        assert!((g[4].omega_prime - 2.0).abs() < 1e-12);
        assert!(g.windows(2).take(4).all(|w| w[1].omega_prime > w[0].omega_prime));
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let base = PhysicalComponents::default();
        let r = calibrate_omega(&[], &Landmark::phase_portraits(), &base, &cheap());
        assert!(matches!(r, Err(BifurcationError::InvalidSpec(_))));
        let r = calibrate_omega(&[Calibration::default()], &[], &base, &cheap());
        assert!(matches!(r, Err(BifurcationError::InvalidSpec(_))));
    }

    #[test]
    fn single_matching_candidate_is_returned() {
        // A landmark that any bounded non-chaotic candidate satisfies.
        let lm = [Landmark {
            resistance: 1.9e3,
            amplitude: 2.0,
            expected: Regime::Periodic { period: 0 },
        }];
        let cand = Calibration::default();
        let report = calibrate_omega(&[cand], &lm, &PhysicalComponents::default(), &cheap()).unwrap();
        assert_eq!(report.chosen, cand);
        assert_eq!(report.matched, 1);
    }

    #[test]
    fn failing_grid_reports_diagnostics() {
        // Slow drive with the printed sign never reproduces the landmarks.
        let cands = [Calibration::new(0.02, ForcingSign::Minus).unwrap()];
        let r = calibrate_omega(&cands, &Landmark::phase_portraits(), &PhysicalComponents::default(), &cheap());
        match r {
            Err(BifurcationError::CalibrationFailed { best, required, diagnostics }) => {
                assert!(best < 3);
                assert_eq!(required, 3);
                assert!(diagnostics.contains("omega'"));
            }
            other => panic!("expected calibration failure, got {other:?}"),
        }
    }

    #[test]
    fn tie_break_takes_middle_of_longest_run() {
        // Candidates 1..=3 all match; the middle one is chosen.
        let lm = [Landmark {
            resistance: 1.9e3,
            amplitude: 2.0,
            expected: Regime::Periodic { period: 0 },
        }];
        let cands = [
            Calibration::new(0.02, ForcingSign::Minus).unwrap(),
            Calibration::new(0.80, ForcingSign::Plus).unwrap(),
            Calibration::new(0.81, ForcingSign::Plus).unwrap(),
            Calibration::new(0.82, ForcingSign::Plus).unwrap(),
        ];
        let report = calibrate_omega(&cands, &lm, &PhysicalComponents::default(), &cheap()).unwrap();
        assert_eq!(report.matched, 1);
        assert_eq!(report.chosen, cands[2]);
    }
}
