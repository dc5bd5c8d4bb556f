//! Discrete mutual information between a sensitive feature and the other
//! features, as a data-bias diagnostic.

use super::{Dataset, TabularError};
use serde::{Deserialize, Serialize};

/// Quantile bin count for continuous features.
pub const MI_QUANTILE_BINS: usize = 10;

/// Mutual information of one (course, sensitive feature, feature) triple,
/// in nats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiEntry {
    pub course_id: String,
    pub sensitive: String,
    pub feature: String,
    pub mi: f64,
}

/// A collection of MI entries across courses and sensitive features.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MiScores {
    pub entries: Vec<MiEntry>,
}

impl MiScores {
    pub fn extend(&mut self, entries: Vec<MiEntry>) {
        self.entries.extend(entries);
    }

    pub fn courses(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.entries.iter().map(|e| e.course_id.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    pub fn sensitive_features(&self) -> Vec<String> {
        let mut names: Vec<String> = self.entries.iter().map(|e| e.sensitive.clone()).collect();
        names.sort();
        names.dedup();
        names
    }

    /// Mean MI of one sensitive feature over all features of one course.
    pub fn course_average(&self, course_id: &str, sensitive: &str) -> Option<f64> {
        let values: Vec<f64> = self
            .entries
            .iter()
            .filter(|e| e.course_id == course_id && e.sensitive == sensitive)
            .map(|e| e.mi)
            .collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    }
}

/// Assigns each value a discrete bin.
///
/// Columns with at most [`MI_QUANTILE_BINS`] distinct values (binary and
/// ordinal features) are used as-is; anything finer is cut into quantile
/// bins so the estimate is not dominated by unique continuous values.
fn discretize(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();

    if distinct.len() <= MI_QUANTILE_BINS {
        return values
            .iter()
            .map(|v| distinct.partition_point(|d| d < v))
            .collect();
    }

    let n = sorted.len();
    let mut edges = Vec::with_capacity(MI_QUANTILE_BINS - 1);
    for j in 1..MI_QUANTILE_BINS {
        let h = (n - 1) as f64 * j as f64 / MI_QUANTILE_BINS as f64;
        let lo = h.floor() as usize;
        let frac = h - lo as f64;
        let edge = if lo + 1 < n {
            sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
        } else {
            sorted[lo]
        };
        if edges.last().is_none_or(|&last| edge > last) {
            edges.push(edge);
        }
    }
    values
        .iter()
        .map(|v| edges.partition_point(|e| e < v))
        .collect()
}

fn discrete_mi(xs: &[usize], ys: &[usize]) -> f64 {
    let n = xs.len() as f64;
    let nx = xs.iter().max().map_or(0, |m| m + 1);
    let ny = ys.iter().max().map_or(0, |m| m + 1);
    let mut joint = vec![0usize; nx * ny];
    let mut cx = vec![0usize; nx];
    let mut cy = vec![0usize; ny];
    for (&x, &y) in xs.iter().zip(ys) {
        joint[x * ny + y] += 1;
        cx[x] += 1;
        cy[y] += 1;
    }
    let mut mi = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            let c = joint[x * ny + y];
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * (c * n / (cx[x] as f64 * cy[y] as f64)).ln();
        }
    }
    mi.max(0.0)
}

/// Mutual information between the sensitive feature and every other feature
/// of the dataset.
///
/// A degenerate sensitive column (every row in one group) carries no
/// information; all entries are zero and a warning is logged.
pub fn mutual_information(d: &Dataset, sensitive: &str) -> Result<Vec<MiEntry>, TabularError> {
    let groups = d.sensitive_groups(sensitive)?;
    let group_bins: Vec<usize> = groups.iter().map(|g| g.index()).collect();
    let degenerate = group_bins.iter().all(|&g| g == 0) || group_bins.iter().all(|&g| g == 1);
    if degenerate {
        log::warn!(
            "sensitive feature '{sensitive}' has a single group in course '{}'; MI is zero",
            d.course_id
        );
    }

    let mut entries = Vec::new();
    for (idx, feature) in d.feature_names.iter().enumerate() {
        if feature == sensitive {
            continue;
        }
        let mi = if degenerate {
            0.0
        } else {
            discrete_mi(&discretize(&d.column(idx)), &group_bins)
        };
        entries.push(MiEntry {
            course_id: d.course_id.clone(),
            sensitive: sensitive.to_string(),
            feature: feature.clone(),
            mi,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dataset(cols: Vec<(&str, Vec<f64>, bool)>, y: Vec<bool>) -> Dataset {
        let names: Vec<String> = cols.iter().map(|(n, _, _)| n.to_string()).collect();
        let sensitive: Vec<String> = cols
            .iter()
            .filter(|(_, _, s)| *s)
            .map(|(n, _, _)| n.to_string())
            .collect();
        let n = cols[0].1.len();
        let x: Vec<Vec<f64>> = (0..n)
            .map(|i| cols.iter().map(|(_, c, _)| c[i]).collect())
            .collect();
        Dataset::from_parts("c".into(), names, sensitive, x, y).unwrap()
    }

    fn entropy(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let ones = values.iter().filter(|&&v| v == 1.0).count() as f64;
        let mut h = 0.0;
        for count in [ones, n - ones] {
            if count > 0.0 {
                let p = count / n;
                h -= p * p.ln();
            }
        }
        h
    }

    #[test]
    fn identical_binary_feature_has_mi_equal_to_entropy() {
        let s = vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let d = dataset(
            vec![("s", s.clone(), true), ("copy", s.clone(), false)],
            vec![true; 8],
        );
        let entries = mutual_information(&d, "s").unwrap();
        let copy = entries.iter().find(|e| e.feature == "copy").unwrap();
        assert!((copy.mi - entropy(&s)).abs() < 1e-12);
    }

    #[test]
    fn independent_feature_has_zero_mi() {
        // Joint counts are exact products of the marginals.
        let mut s = Vec::new();
        let mut f = Vec::new();
        for i in 0..40 {
            s.push((i % 2) as f64);
            f.push(if i < 20 { 0.0 } else { 1.0 });
        }
        let d = dataset(vec![("s", s, true), ("f", f, false)], vec![true; 40]);
        let entries = mutual_information(&d, "s").unwrap();
        assert!(entries[0].mi.abs() < 1e-12);
    }

    #[test]
    fn mi_is_symmetric_between_binary_columns() {
        let a = vec![0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let b = vec![0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        let d = dataset(
            vec![("a", a.clone(), true), ("b", b.clone(), true)],
            vec![true; 10],
        );
        let ab = mutual_information(&d, "a").unwrap()[0].mi;
        let ba = mutual_information(&d, "b").unwrap()[0].mi;
        assert!((ab - ba).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sensitive_column_yields_zeros() {
        let d = dataset(
            vec![
                ("s", vec![0.0; 6], true),
                ("f", vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0], false),
            ],
            vec![true; 6],
        );
        let entries = mutual_information(&d, "s").unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].mi, 0.0);
    }

    #[test]
    fn continuous_features_are_quantile_binned() {
        let values: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let bins = discretize(&values);
        assert!(*bins.iter().max().unwrap() < MI_QUANTILE_BINS);
        // Roughly equal occupancy.
        let mut counts = vec![0usize; MI_QUANTILE_BINS];
        for &b in &bins {
            counts[b] += 1;
        }
        assert!(counts.iter().all(|&c| c >= 5), "occupancy {counts:?}");
    }

    #[test]
    fn course_average_aggregates_entries() {
        let scores = MiScores {
            entries: vec![
                MiEntry {
                    course_id: "A".into(),
                    sensitive: "s".into(),
                    feature: "f".into(),
                    mi: 0.2,
                },
                MiEntry {
                    course_id: "A".into(),
                    sensitive: "s".into(),
                    feature: "g".into(),
                    mi: 0.4,
                },
            ],
        };
        assert_eq!(scores.course_average("A", "s"), Some(0.30000000000000004));
        assert_eq!(scores.course_average("B", "s"), None);
    }

    proptest! {
        #[test]
        fn mi_is_nonnegative(
            svals in proptest::collection::vec(0u8..2, 10..60),
            fvals in proptest::collection::vec(0.0f64..=1.0, 10..60),
        ) {
            let n = svals.len().min(fvals.len());
            let s: Vec<f64> = svals[..n].iter().map(|&v| v as f64).collect();
            let f = fvals[..n].to_vec();
            let d = dataset(vec![("s", s, true), ("f", f, false)], vec![true; n]);
            let entries = mutual_information(&d, "s").unwrap();
            prop_assert!(entries[0].mi >= 0.0);
        }
    }
}
