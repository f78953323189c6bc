use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ReadoutError;

/// Default fraction of points used for training.
pub const DEFAULT_TRAIN_RATIO: f64 = 0.67;

/// Disjoint train/test index sets covering `0..n`, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    pub seed: u64,
}

impl SplitPlan {
    pub fn len(&self) -> usize {
        self.train_idx.len() + self.test_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub(crate) fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx
}

/// Random split with `floor(ratio·n)` training points drawn uniformly
/// without replacement from the whole index range.
pub fn train_test_split(n: usize, ratio: f64, seed: u64) -> Result<SplitPlan, ReadoutError> {
    if n < 3 {
        return Err(ReadoutError::TooFewRows { needed: 3, got: n });
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(ReadoutError::InvalidRatio(ratio));
    }
    let n_train = (ratio * n as f64 + 1e-9).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(ReadoutError::InvalidRatio(ratio));
    }
    let perm = shuffled_indices(n, seed);
    let mut train_idx = perm[..n_train].to_vec();
    let mut test_idx = perm[n_train..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok(SplitPlan {
        train_idx,
        test_idx,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sixty_seven_thirty_three() {
        let s = train_test_split(10_000, DEFAULT_TRAIN_RATIO, 42).unwrap();
        assert_eq!((s.train_idx.len(), s.test_idx.len()), (6700, 3300));
        assert_eq!(s, train_test_split(10_000, DEFAULT_TRAIN_RATIO, 42).unwrap());
        assert_ne!(s, train_test_split(10_000, DEFAULT_TRAIN_RATIO, 43).unwrap());
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(matches!(train_test_split(2, 0.67, 0), Err(ReadoutError::TooFewRows { .. })));
        assert!(matches!(train_test_split(10, 1.0, 0), Err(ReadoutError::InvalidRatio(_))));
        assert!(matches!(train_test_split(3, 0.1, 0), Err(ReadoutError::InvalidRatio(_))));
    }

    proptest! {
        #[test]
        fn split_partitions_the_index_range(n in 3usize..500, seed: u64) {
            let s = train_test_split(n, DEFAULT_TRAIN_RATIO, seed).unwrap();
            let mut all: Vec<usize> = s.train_idx.iter().chain(&s.test_idx).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(s.train_idx.len(), (0.67 * n as f64 + 1e-9).floor() as usize);
        }
    }
}
