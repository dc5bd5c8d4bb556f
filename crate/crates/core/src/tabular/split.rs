//! Deterministic stratified train/test splitting.

use super::{Dataset, TabularError};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A stratified train/test partition of one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    pub ratio: f64,
    pub seed: u64,
}

fn fisher_yates(rng: &mut ChaCha8Rng, indices: &mut [usize]) {
    for i in (1..indices.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        indices.swap(i, j);
    }
}

/// Splits per class so both sides keep the dataset's class proportions.
///
/// The train side gets `round(ratio · n)` rows in total, allocated to the
/// classes by largest remainder. Row order inside each side follows the
/// original dataset; the selection is a seeded ChaCha8 shuffle, so a fixed
/// seed reproduces the split bit for bit.
pub fn stratified_split(d: &Dataset, ratio: f64, seed: u64) -> Result<SplitPair, TabularError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(TabularError::InvalidRatio(ratio));
    }
    let mut negatives: Vec<usize> = Vec::new();
    let mut positives: Vec<usize> = Vec::new();
    for (i, &label) in d.y.iter().enumerate() {
        if label {
            positives.push(i);
        } else {
            negatives.push(i);
        }
    }
    if positives.len() < 2 || negatives.len() < 2 {
        return Err(TabularError::ClassTooSmall {
            positives: positives.len(),
            negatives: negatives.len(),
        });
    }

    let n = d.n_rows();
    let total_train = (ratio * n as f64).round() as usize;
    if total_train == 0 || total_train >= n {
        return Err(TabularError::DegenerateSplit);
    }

    // Nearest-integer allocation of train positives around the exact
    // proportional share total_train·P/n keeps both sides' class
    // proportions within 1/min(|train|, |test|) of each other: the rounding
    // error δ (|δ| ≤ 1/2) enters the proportion gap as δ·n/(t·(n−t)).
    let share = total_train as f64 * positives.len() as f64 / n as f64;
    let take_pos = ((share + 0.5).floor() as usize)
        .min(positives.len())
        .min(total_train);
    let take_neg = total_train - take_pos;
    debug_assert!(take_neg <= negatives.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fisher_yates(&mut rng, &mut negatives);
    fisher_yates(&mut rng, &mut positives);

    let mut train_idx: Vec<usize> = negatives[..take_neg]
        .iter()
        .chain(&positives[..take_pos])
        .copied()
        .collect();
    let mut test_idx: Vec<usize> = negatives[take_neg..]
        .iter()
        .chain(&positives[take_pos..])
        .copied()
        .collect();
    train_idx.sort_unstable();
    test_idx.sort_unstable();

    Ok(SplitPair {
        train: d.subset(&train_idx),
        test: d.subset(&test_idx),
        ratio,
        seed,
    })
}

impl SplitPair {
    /// Re-scales both sides with min–max statistics computed on the training
    /// split only. Test values falling outside the training range are
    /// clamped into [0, 1].
    pub fn renormalize_with_train_stats(self) -> Result<SplitPair, TabularError> {
        let mut train_x = self.train.x.clone();
        let mut test_x = self.test.x.clone();
        for feature in 0..self.train.n_features() {
            let min = train_x
                .iter()
                .map(|r| r[feature])
                .fold(f64::INFINITY, f64::min);
            let max = train_x
                .iter()
                .map(|r| r[feature])
                .fold(f64::NEG_INFINITY, f64::max);
            let span = max - min;
            let scale = |v: f64| {
                if span == 0.0 {
                    0.0
                } else {
                    ((v - min) / span).clamp(0.0, 1.0)
                }
            };
            train_x
                .iter_mut()
                .for_each(|r| r[feature] = scale(r[feature]));
            test_x
                .iter_mut()
                .for_each(|r| r[feature] = scale(r[feature]));
        }
        let rebuild = |src: &Dataset, x: Vec<Vec<f64>>| {
            Dataset::from_parts_with_ids(
                src.course_id.clone(),
                src.feature_names.clone(),
                src.sensitive_names.clone(),
                x,
                src.y.clone(),
                src.student_ids.clone(),
            )
        };
        Ok(SplitPair {
            train: rebuild(&self.train, train_x)?,
            test: rebuild(&self.test, test_x)?,
            ratio: self.ratio,
            seed: self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dataset(n_pos: usize, n_neg: usize) -> Dataset {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n_pos {
            x.push(vec![i as f64 / (n_pos + n_neg) as f64]);
            y.push(true);
        }
        for i in 0..n_neg {
            x.push(vec![(n_pos + i) as f64 / (n_pos + n_neg) as f64]);
            y.push(false);
        }
        Dataset::from_parts("c".into(), vec!["f".into()], vec![], x, y).unwrap()
    }

    #[test]
    fn proportional_allocation_roughly_preserves_classes() {
        let d = dataset(6, 4);
        let split = stratified_split(&d, 0.7, 1).unwrap();
        assert_eq!(split.train.n_rows(), 7);
        assert_eq!(split.test.n_rows(), 3);
        let train_pos = split.train.y.iter().filter(|&&l| l).count();
        assert!((3..=5).contains(&train_pos), "train positives {train_pos}");
    }

    #[test]
    fn same_seed_same_split() {
        let d = dataset(30, 20);
        let a = stratified_split(&d, 0.7, 99).unwrap();
        let b = stratified_split(&d, 0.7, 99).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(&d, 0.7, 100).unwrap();
        assert_ne!(a.train.student_ids, c.train.student_ids);
    }

    #[test]
    fn test_size_is_the_rounded_complement() {
        let d = dataset(40, 23);
        let split = stratified_split(&d, 0.7, 0).unwrap();
        let n = d.n_rows();
        assert_eq!(split.test.n_rows(), n - ((0.7 * n as f64).round() as usize));
    }

    #[test]
    fn tiny_classes_are_rejected() {
        let d = dataset(1, 5);
        assert!(matches!(
            stratified_split(&d, 0.5, 0),
            Err(TabularError::ClassTooSmall { .. })
        ));
    }

    #[test]
    fn bad_ratios_are_rejected() {
        let d = dataset(5, 5);
        for ratio in [0.0, 1.0, -0.3, 1.7, f64::NAN] {
            assert!(stratified_split(&d, ratio, 0).is_err(), "ratio {ratio}");
        }
    }

    #[test]
    fn train_stat_renormalization_keeps_unit_range() {
        let d = dataset(10, 10);
        let split = stratified_split(&d, 0.5, 3)
            .unwrap()
            .renormalize_with_train_stats()
            .unwrap();
        for row in split.train.x.iter().chain(&split.test.x) {
            assert!((0.0..=1.0).contains(&row[0]));
        }
    }

    proptest! {
        #[test]
        fn split_partitions_and_stratifies(
            n_pos in 2usize..60,
            n_neg in 2usize..60,
            ratio in 0.2f64..0.8,
            seed in 0u64..500,
        ) {
            let d = dataset(n_pos, n_neg);
            let split = stratified_split(&d, ratio, seed).unwrap();

            // Disjoint union of the original rows.
            let mut ids: Vec<&String> =
                split.train.student_ids.iter().chain(&split.test.student_ids).collect();
            ids.sort();
            ids.dedup();
            prop_assert_eq!(ids.len(), d.n_rows());

            // Class proportions within the stratification bound.
            let prop_of = |ds: &Dataset| {
                ds.y.iter().filter(|&&l| l).count() as f64 / ds.n_rows() as f64
            };
            let bound = 1.0 / split.train.n_rows().min(split.test.n_rows()) as f64;
            prop_assert!((prop_of(&split.train) - prop_of(&split.test)).abs() <= bound + 1e-12);
        }
    }
}
