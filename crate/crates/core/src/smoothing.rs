//! Gaussian kernel density estimation of the per-group probability
//! distributions, and the zone areas behind the visual analysis.
//!
//! Smoothing turns the discrete density vectors into continuous curves that
//! are far easier to compare by eye. The area under the pointwise minimum of
//! the two curves is the "fair zone" (where the model treats the groups
//! alike); the area between the curves approximates the MADD.

use crate::density::ProbabilityStep;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Evaluation grid resolution used throughout the crate.
pub const DEFAULT_GRID_SIZE: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoothingError {
    #[error("need at least 2 samples for a bandwidth estimate, got {0}")]
    TooFewSamples(usize),
    #[error("samples have zero standard deviation (point mass)")]
    ZeroVariance,
    #[error("bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("evaluation grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("KDE curves were evaluated on different grids")]
    GridMismatch,
}

/// Sample standard deviation with the unbiased (n−1) denominator.
fn sample_std(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Scott's-rule bandwidth from summary statistics: `h = σ · n^(−1/5)`
/// (the one-dimensional case of the `n^(−1/(d+4))` factor).
pub fn scott_bandwidth_from_stats(n: usize, sigma: f64) -> f64 {
    sigma * (n as f64).powf(-0.2)
}

/// Scott's-rule bandwidth of a sample.
pub fn scott_bandwidth(samples: &[f64]) -> Result<f64, SmoothingError> {
    if samples.len() < 2 {
        return Err(SmoothingError::TooFewSamples(samples.len()));
    }
    // All-equal samples are a point mass; the computed deviation would be
    // pure floating-point dust from the mean rounding.
    if samples.windows(2).all(|w| w[0] == w[1]) {
        return Err(SmoothingError::ZeroVariance);
    }
    Ok(scott_bandwidth_from_stats(
        samples.len(),
        sample_std(samples),
    ))
}

/// Scott bandwidth with a degenerate-sample fallback of `e / 2`.
///
/// A group whose predictions all round to one value has no spread to
/// estimate a bandwidth from; half the probability step keeps the point
/// mass visible without spilling far into neighboring bins.
pub fn bandwidth_with_fallback(samples: &[f64], step: ProbabilityStep) -> f64 {
    match scott_bandwidth(samples) {
        Ok(h) => h,
        Err(err) => {
            let h = step.e() / 2.0;
            log::warn!("falling back to bandwidth {h} ({err})");
            h
        }
    }
}

/// A Gaussian KDE evaluated on a fixed grid over [0, 1].
///
/// The values approximate a probability density function and may exceed 1;
/// kernel mass outside [0, 1] is not reflected back, so the trapezoidal
/// integral over the unit interval is slightly below one.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    grid: Vec<f64>,
    f: Vec<f64>,
    bandwidth: f64,
    n_samples: usize,
}

fn linspace01(len: usize) -> Vec<f64> {
    (0..len).map(|i| i as f64 / (len - 1) as f64).collect()
}

impl KdeCurve {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Trapezoidal integral of the curve over [0, 1].
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.f)
    }
}

// The standard evenly spaced grid is omitted from the serialized form and
// reconstructed on load; explicit grids are carried through.
#[derive(Serialize, Deserialize)]
struct KdeCurveRepr {
    bandwidth: f64,
    n_samples: usize,
    f: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<f64>>,
}

impl Serialize for KdeCurve {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let standard = self.grid == linspace01(self.grid.len());
        KdeCurveRepr {
            bandwidth: self.bandwidth,
            n_samples: self.n_samples,
            f: self.f.clone(),
            grid: if standard {
                None
            } else {
                Some(self.grid.clone())
            },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KdeCurve {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = KdeCurveRepr::deserialize(deserializer)?;
        if repr.f.len() < 2 {
            return Err(serde::de::Error::custom(
                "KDE curve needs at least 2 points",
            ));
        }
        let grid = repr.grid.unwrap_or_else(|| linspace01(repr.f.len()));
        if grid.len() != repr.f.len() {
            return Err(serde::de::Error::custom("grid and value lengths differ"));
        }
        Ok(KdeCurve {
            grid,
            f: repr.f,
            bandwidth: repr.bandwidth,
            n_samples: repr.n_samples,
        })
    }
}

/// Evaluates the Gaussian KDE `f(x) = 1/(n·h) Σ_i φ((x − x_i)/h)` on
/// `grid_size` evenly spaced points over [0, 1].
pub fn kde(samples: &[f64], bandwidth: f64, grid_size: usize) -> Result<KdeCurve, SmoothingError> {
    if samples.is_empty() {
        return Err(SmoothingError::TooFewSamples(0));
    }
    if bandwidth.is_nan() || bandwidth <= 0.0 {
        return Err(SmoothingError::InvalidBandwidth(bandwidth));
    }
    if grid_size < 2 {
        return Err(SmoothingError::GridTooSmall(grid_size));
    }
    let grid = linspace01(grid_size);
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * bandwidth * samples.len() as f64);
    let f = grid
        .iter()
        .map(|&x| {
            let sum: f64 = samples
                .iter()
                .map(|&xi| {
                    let z = (x - xi) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum();
            norm * sum
        })
        .collect();
    Ok(KdeCurve {
        grid,
        f,
        bandwidth,
        n_samples: samples.len(),
    })
}

/// The two areas read off the smoothed comparison plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneAreas {
    /// Integral of `min(f0, f1)`: where the model treats the groups alike.
    pub fair_zone: f64,
    /// Integral of `|f0 − f1|`: the continuous approximation of the MADD.
    pub madd_zone: f64,
}

/// Trapezoidal integrals of the pointwise minimum and absolute difference
/// of two curves on the same grid.
pub fn zone_areas(c0: &KdeCurve, c1: &KdeCurve) -> Result<ZoneAreas, SmoothingError> {
    if c0.grid != c1.grid {
        return Err(SmoothingError::GridMismatch);
    }
    let mins: Vec<f64> = c0.f.iter().zip(&c1.f).map(|(&a, &b)| a.min(b)).collect();
    let diffs: Vec<f64> =
        c0.f.iter()
            .zip(&c1.f)
            .map(|(&a, &b)| (a - b).abs())
            .collect();
    Ok(ZoneAreas {
        fair_zone: trapezoid(&c0.grid, &mins),
        madd_zone: trapezoid(&c0.grid, &diffs),
    })
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scott_closed_form_is_exact_for_power_of_two() {
        // 32^(−1/5) = 1/2 exactly.
        assert_eq!(scott_bandwidth_from_stats(32, 1.0), 0.5);
    }

    #[test]
    fn scott_closed_form_n100() {
        // Independently evaluated: 100^(−0.2) · 0.2.
        assert!((scott_bandwidth_from_stats(100, 0.2) - 0.07962143411069944).abs() < 1e-15);
    }

    #[test]
    fn scott_bandwidth_from_samples() {
        let samples = [0.1, 0.3];
        // Sample std computed independently: mean 0.2, deviations ±0.1.
        let sigma = (2.0 * 0.1f64 * 0.1 / 1.0).sqrt();
        let expected = sigma * 2.0f64.powf(-0.2);
        assert!((scott_bandwidth(&samples).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn degenerate_samples_error_and_fallback() {
        assert_eq!(
            scott_bandwidth(&[0.4]),
            Err(SmoothingError::TooFewSamples(1))
        );
        assert_eq!(
            scott_bandwidth(&[0.4; 9]),
            Err(SmoothingError::ZeroVariance)
        );
        let step = ProbabilityStep::new(0.1).unwrap();
        assert_eq!(bandwidth_with_fallback(&[0.4; 9], step), 0.05);
        assert_eq!(bandwidth_with_fallback(&[0.4], step), 0.05);
    }

    #[test]
    fn kde_peaks_at_a_single_sample() {
        let c = kde(&[0.5], 0.05, 101).unwrap();
        let argmax = c
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((c.grid()[argmax] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn kde_of_symmetric_samples_is_symmetric() {
        let samples = [0.2, 0.35, 0.65, 0.8];
        let c = kde(&samples, 0.1, 101).unwrap();
        let f = c.values();
        for i in 0..f.len() {
            let j = f.len() - 1 - i;
            assert!((f[i] - f[j]).abs() < 1e-9, "asymmetry at grid point {i}");
        }
    }

    #[test]
    fn kde_rejects_bad_arguments() {
        assert!(matches!(
            kde(&[], 0.1, 10),
            Err(SmoothingError::TooFewSamples(0))
        ));
        assert!(matches!(
            kde(&[0.5], 0.0, 10),
            Err(SmoothingError::InvalidBandwidth(_))
        ));
        assert!(matches!(
            kde(&[0.5], 0.1, 1),
            Err(SmoothingError::GridTooSmall(1))
        ));
    }

    /// Test-local trapezoid oracle, written independently of the crate's.
    fn trapz_oracle(xs: &[f64], ys: &[f64]) -> f64 {
        let mut area = 0.0;
        for i in 1..xs.len() {
            area += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
        }
        area
    }

    #[test]
    fn bimodal_kde_splits_mass_evenly() {
        let mut samples = vec![0.2; 500];
        samples.extend(vec![0.8; 500]);
        let c = kde(&samples, 0.02, 513).unwrap();
        // Grid point 256 is exactly 0.5 with 513 points.
        let split = 256;
        let left = trapz_oracle(&c.grid()[..=split], &c.values()[..=split]);
        let right = trapz_oracle(&c.grid()[split..], &c.values()[split..]);
        assert!((left - 0.5).abs() < 0.01, "left mass {left}");
        assert!((right - 0.5).abs() < 0.01, "right mass {right}");
    }

    #[test]
    fn kde_integral_stays_close_to_one() {
        let samples = [0.3, 0.4, 0.5, 0.55, 0.6, 0.7];
        let c = kde(&samples, 0.05, DEFAULT_GRID_SIZE).unwrap();
        let integral = c.integral();
        assert!(
            (0.9..=1.0 + 1e-9).contains(&integral),
            "integral {integral}"
        );
    }

    #[test]
    fn identical_curves_have_zero_madd_zone() {
        let c = kde(&[0.2, 0.5, 0.8], 0.05, 101).unwrap();
        let z = zone_areas(&c, &c).unwrap();
        assert_eq!(z.madd_zone, 0.0);
        assert!((z.fair_zone - c.integral()).abs() < 1e-12);
    }

    #[test]
    fn disjoint_narrow_peaks_approach_extremes() {
        let c0 = kde(&[0.1; 100], 0.005, 513).unwrap();
        let c1 = kde(&[0.9; 100], 0.005, 513).unwrap();
        let z = zone_areas(&c0, &c1).unwrap();
        assert!(z.fair_zone < 1e-6, "fair zone {}", z.fair_zone);
        assert!(
            (z.madd_zone - 2.0).abs() < 0.01,
            "madd zone {}",
            z.madd_zone
        );
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let c0 = kde(&[0.5], 0.1, 100).unwrap();
        let c1 = kde(&[0.5], 0.1, 101).unwrap();
        assert_eq!(zone_areas(&c0, &c1), Err(SmoothingError::GridMismatch));
    }

    #[test]
    fn standard_grid_is_omitted_from_serialization() {
        let c = kde(&[0.25, 0.75], 0.1, 64).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(!json.contains("\"grid\""));
        let back: KdeCurve = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        // |a−b| + 2·min(a,b) = a + b holds pointwise, so the integrated
        // identity holds up to floating-point rounding.
        #[test]
        fn zone_identity(
            s0 in proptest::collection::vec(0.0f64..=1.0, 2..50),
            s1 in proptest::collection::vec(0.0f64..=1.0, 2..50),
            bw in 0.01f64..0.5,
        ) {
            let c0 = kde(&s0, bw, 101).unwrap();
            let c1 = kde(&s1, bw, 101).unwrap();
            let z = zone_areas(&c0, &c1).unwrap();
            let lhs = z.madd_zone + 2.0 * z.fair_zone;
            let rhs = trapz_oracle(c0.grid(), c0.values()) + trapz_oracle(c1.grid(), c1.values());
            prop_assert!((lhs - rhs).abs() < 1e-9, "identity violated: {lhs} vs {rhs}");
        }

        #[test]
        fn kde_values_are_nonnegative(
            samples in proptest::collection::vec(0.0f64..=1.0, 1..40),
            bw in 0.005f64..1.0,
        ) {
            let c = kde(&samples, bw, 64).unwrap();
            prop_assert!(c.values().iter().all(|&v| v >= 0.0 && v.is_finite()));
        }

        // Mirroring the samples about 0.5 mirrors the curve.
        #[test]
        fn kde_mirror_symmetry(samples in proptest::collection::vec(0.0f64..=1.0, 1..30)) {
            let mut doubled = samples.clone();
            doubled.extend(samples.iter().map(|&x| 1.0 - x));
            let c = kde(&doubled, 0.1, 101).unwrap();
            let f = c.values();
            for i in 0..f.len() {
                prop_assert!((f[i] - f[f.len() - 1 - i]).abs() < 1e-9);
            }
        }
    }
}
