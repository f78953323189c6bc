use memres::dynsys::Channel;
use memres::reservoir::{build_features, harvest, ReservoirConfig};
use memres::tasks::unit_grid;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn working_ranges() -> Vec<ReservoirConfig> {
    vec![
        ReservoirConfig::new(Channel::Resistance, 2.2e3, 2.8e3),
        ReservoirConfig::new(Channel::Resistance, 2.1e3, 2.19e3),
        ReservoirConfig::new(Channel::Amplitude, 2.1, 2.5),
        ReservoirConfig::new(Channel::Amplitude, 2.5, 3.4),
    ]
}

#[test]
fn repeated_harvests_are_bit_identical() {
    let cfg = ReservoirConfig::new(Channel::Resistance, 2.1e3, 2.19e3);
    let first = harvest(0.37, &cfg).unwrap();
    for _ in 0..100 {
        let again = harvest(0.37, &cfg).unwrap();
        assert!(first.iter().zip(&again).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn permuting_inputs_permutes_rows() {
    let cfg = ReservoirConfig::new(Channel::Amplitude, 2.1, 2.5);
    let inputs = unit_grid(64);
    let mut perm: Vec<usize> = (0..inputs.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(5));
    let shuffled: Vec<f64> = perm.iter().map(|&i| inputs[i]).collect();
    let a = build_features(&inputs, &cfg).unwrap();
    let b = build_features(&shuffled, &cfg).unwrap();
    for (row, &i) in perm.iter().enumerate() {
        assert_eq!(b.features.row(row), a.features.row(i));
    }
}

#[test]
fn adjacent_inputs_are_separated_and_bounded() {
    for cfg in working_ranges() {
        let fm = build_features(&unit_grid(1000), &cfg).unwrap();
        assert_eq!(fm.width(), 50);
        let separated = (1..fm.len())
            .filter(|&i| fm.features.row(i) != fm.features.row(i - 1))
            .count();
        assert!(separated * 100 >= 99 * (fm.len() - 1), "{cfg:?}: {separated}");
        let max = fm.features.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max <= 10.0, "{cfg:?}: max |y| = {max}");
    }
}
