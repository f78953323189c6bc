//! Named working ranges.
//!
//! Conflicting range variants for the same regime are kept as separate
//! presets instead of picking one.

use memres::dynsys::Channel;
use memres::reservoir::ReservoirConfig;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeLabel {
    Nonchaotic,
    Periodic,
    Chaotic,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub channel: Channel,
    pub x_min: f64,
    pub x_max: f64,
    pub regime: RegimeLabel,
    pub description: &'static str,
}

impl Preset {
    pub fn reservoir(&self) -> ReservoirConfig {
        ReservoirConfig::new(self.channel, self.x_min, self.x_max)
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "r-nonchaotic",
        channel: Channel::Resistance,
        x_min: 2.2e3,
        x_max: 2.8e3,
        regime: RegimeLabel::Nonchaotic,
        description: "R 2.2-2.8 kOhm, mixed stable and chaotic dynamics, for the polynomial tasks",
    },
    Preset {
        name: "r-nonchaotic-narrow",
        channel: Channel::Resistance,
        x_min: 2.1e3,
        x_max: 2.19e3,
        regime: RegimeLabel::Nonchaotic,
        description: "R 2.1-2.19 kOhm, the range of the worked input-mapping example",
    },
    Preset {
        name: "r-periodic",
        channel: Channel::Resistance,
        x_min: 2.3e3,
        x_max: 2.4e3,
        regime: RegimeLabel::Periodic,
        description: "R 2.3-2.4 kOhm, periodic window",
    },
    Preset {
        name: "r-chaotic",
        channel: Channel::Resistance,
        x_min: 2.1e3,
        x_max: 2.19e3,
        regime: RegimeLabel::Chaotic,
        description: "R 2.10-2.19 kOhm, predominantly chaotic",
    },
    Preset {
        name: "r-full",
        channel: Channel::Resistance,
        x_min: 1.9e3,
        x_max: 2.8e3,
        regime: RegimeLabel::Full,
        description: "R 1.9-2.8 kOhm, whole bifurcation range",
    },
    Preset {
        name: "a-nonchaotic",
        channel: Channel::Amplitude,
        x_min: 2.1,
        x_max: 2.5,
        regime: RegimeLabel::Nonchaotic,
        description: "A 2.1-2.5 V, mixed stable and chaotic dynamics, for the polynomial tasks",
    },
    Preset {
        name: "a-nonchaotic-wide",
        channel: Channel::Amplitude,
        x_min: 2.0,
        x_max: 2.5,
        regime: RegimeLabel::Nonchaotic,
        description: "A 2.0-2.5 V, the wider variant of the non-chaotic range",
    },
    Preset {
        name: "a-periodic",
        channel: Channel::Amplitude,
        x_min: 1.5,
        x_max: 1.8,
        regime: RegimeLabel::Periodic,
        description: "A 1.5-1.8 V, periodic",
    },
    Preset {
        name: "a-chaotic",
        channel: Channel::Amplitude,
        x_min: 2.5,
        x_max: 3.4,
        regime: RegimeLabel::Chaotic,
        description: "A 2.5-3.4 V, chaotic range of the regime comparison",
    },
    Preset {
        name: "a-chaotic-narrow",
        channel: Channel::Amplitude,
        x_min: 2.75,
        x_max: 3.25,
        regime: RegimeLabel::Chaotic,
        description: "A 2.75-3.25 V, chaotic range for the Lorenz task",
    },
    Preset {
        name: "a-full",
        channel: Channel::Amplitude,
        x_min: 1.5,
        x_max: 3.5,
        regime: RegimeLabel::Full,
        description: "A 1.5-3.5 V, whole bifurcation range",
    },
];

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_ranges_valid() {
        let mut names = preset_names();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), PRESETS.len());
        for p in PRESETS {
            assert!(p.reservoir().validate().is_ok(), "{}", p.name);
        }
        assert!(find_preset("r-full").is_some());
        assert!(find_preset("r-nonchaotic-s2.1").is_none());
    }
}
