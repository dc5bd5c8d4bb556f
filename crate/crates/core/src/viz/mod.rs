//! Standalone SVG renderings of the audit: density comparisons, zone
//! plots, ROC slice plots, and MI bar charts.
//!
//! Output is byte-deterministic: no timestamps, no randomness, fixed
//! coordinate precision. Numeric annotations are the corresponding module
//! outputs rounded to two decimals.

mod svg;

use crate::abroca::{abroca, AbrocaError, RocCurve};
use crate::density::{DensityError, DensityVector, ProbabilityStep};
use crate::smoothing::{zone_areas, KdeCurve, SmoothingError};
use crate::tabular::MiScores;
use serde::{Deserialize, Serialize};
use svg::SvgBuilder;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VizError {
    #[error(transparent)]
    Smoothing(#[from] SmoothingError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Abroca(#[from] AbrocaError),
    #[error("no MI scores to plot")]
    EmptyScores,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlotKind {
    DensityComparison,
    MaddZones,
    AbrocaSlice,
    MiBars,
}

impl PlotKind {
    /// Suffix used in output file names.
    pub fn file_suffix(self) -> &'static str {
        match self {
            PlotKind::DensityComparison => "density",
            PlotKind::MaddZones => "madd_zones",
            PlotKind::AbrocaSlice => "abroca_slice",
            PlotKind::MiBars => "mi_bars",
        }
    }
}

/// Plot colors; group 0 blue and group 1 orange, fair zone green and MADD
/// zone red by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotColors {
    pub group0: String,
    pub group1: String,
    pub fair_zone: String,
    pub madd_zone: String,
}

impl Default for PlotColors {
    fn default() -> Self {
        PlotColors {
            group0: "#1f77b4".into(),
            group1: "#ff7f0e".into(),
            fair_zone: "#2ca02c".into(),
            madd_zone: "#d62728".into(),
        }
    }
}

/// Titles, labels, and display parameters of one plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub group_names: (String, String),
    /// Histogram bar width; must divide 1 exactly. Coarser than the
    /// computation step by default so the bars stay readable.
    pub display_step: f64,
    pub colors: PlotColors,
}

impl PlotSpec {
    pub fn new(kind: PlotKind, title: impl Into<String>) -> Self {
        let (x_label, y_label) = match kind {
            PlotKind::DensityComparison | PlotKind::MaddZones => {
                ("predicted probability", "density")
            }
            PlotKind::AbrocaSlice => ("false positive rate", "true positive rate"),
            PlotKind::MiBars => ("course", "mutual information (nats)"),
        };
        PlotSpec {
            kind,
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            group_names: ("group 0".into(), "group 1".into()),
            display_step: 0.1,
            colors: PlotColors::default(),
        }
    }

    fn display_step(&self) -> Result<ProbabilityStep, DensityError> {
        ProbabilityStep::new(self.display_step)
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 52.0;

/// Maps data coordinates onto the plot rectangle.
struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_max: f64, y_max: f64) -> Self {
        Frame { x_max, y_max }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + x / self.x_max * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - y / self.y_max * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

/// Smallest two-significant-digit value at or above `v`.
fn nice_ceil(v: f64) -> f64 {
    if v.is_nan() || v <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(v.log10().floor());
    ((v / magnitude * 10.0).ceil() / 10.0) * magnitude
}

const AXIS_STYLE: &str = "stroke:#333333;stroke-width:1";
const GRID_STYLE: &str = "stroke:#dddddd;stroke-width:0.5";
const TICK_FONT: &str = "font-family:sans-serif;font-size:11px;fill:#333333";
const LABEL_FONT: &str = "font-family:sans-serif;font-size:13px;fill:#111111";
const TITLE_FONT: &str = "font-family:sans-serif;font-size:15px;fill:#111111;text-anchor:middle";
const ANNOTATION_FONT: &str = "font-family:sans-serif;font-size:13px;fill:#111111";

fn draw_frame(b: &mut SvgBuilder, frame: &Frame, spec: &PlotSpec, x_ticks: &[(f64, String)]) {
    b.text(WIDTH / 2.0, MARGIN_TOP - 16.0, &spec.title, TITLE_FONT);

    // Horizontal gridlines and y ticks.
    for i in 0..=4 {
        let y = frame.y_max * i as f64 / 4.0;
        let sy = frame.sy(y);
        if i > 0 {
            b.line(MARGIN_LEFT, sy, WIDTH - MARGIN_RIGHT, sy, GRID_STYLE);
        }
        b.text(MARGIN_LEFT - 36.0, sy + 4.0, &format!("{y:.2}"), TICK_FONT);
    }
    for (x, label) in x_ticks {
        let sx = frame.sx(*x);
        b.line(
            sx,
            HEIGHT - MARGIN_BOTTOM,
            sx,
            HEIGHT - MARGIN_BOTTOM + 4.0,
            AXIS_STYLE,
        );
        b.text(sx - 8.0, HEIGHT - MARGIN_BOTTOM + 17.0, label, TICK_FONT);
    }

    // Axes.
    b.line(
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM,
        AXIS_STYLE,
    );
    b.line(
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        AXIS_STYLE,
    );
    b.text(WIDTH / 2.0 - 40.0, HEIGHT - 12.0, &spec.x_label, LABEL_FONT);
    b.text(14.0, MARGIN_TOP - 16.0, &spec.y_label, LABEL_FONT);
}

fn unit_ticks() -> Vec<(f64, String)> {
    (0..=5)
        .map(|i| (i as f64 / 5.0, format!("{:.1}", i as f64 / 5.0)))
        .collect()
}

fn legend(b: &mut SvgBuilder, entries: &[(&str, &str)]) {
    let x = WIDTH - MARGIN_RIGHT - 150.0;
    let mut y = MARGIN_TOP + 10.0;
    for (color, name) in entries {
        b.rect(
            x,
            y - 9.0,
            12.0,
            12.0,
            &format!("fill:{color};fill-opacity:0.8"),
        );
        b.text(x + 18.0, y + 1.0, name, TICK_FONT);
        y += 18.0;
    }
}

fn curve_points(frame: &Frame, curve: &KdeCurve) -> Vec<(f64, f64)> {
    curve
        .grid()
        .iter()
        .zip(curve.values())
        .map(|(&x, &y)| (frame.sx(x), frame.sy(y)))
        .collect()
}

/// Histogram bars of both groups at the display step, both KDE curves, and
/// dotted vertical lines at the density-vector means.
pub fn plot_density_comparison(
    d0: &DensityVector,
    d1: &DensityVector,
    kde0: &KdeCurve,
    kde1: &KdeCurve,
    spec: &PlotSpec,
) -> Result<String, VizError> {
    let display = spec.display_step()?;
    let bars0 = d0.rebin(display)?;
    let bars1 = d1.rebin(display)?;
    let (mean0, mean1) = (d0.mean(), d1.mean());

    let tallest_bar = bars0.peak().max(bars1.peak());
    let tallest_curve = kde0
        .values()
        .iter()
        .chain(kde1.values())
        .copied()
        .fold(0.0, f64::max);
    let frame = Frame::new(1.0, nice_ceil(tallest_bar.max(tallest_curve) * 1.05));

    let mut b = SvgBuilder::new(WIDTH, HEIGHT);
    draw_frame(&mut b, &frame, spec, &unit_ticks());

    let step = display.e();
    for (bars, color) in [(&bars0, &spec.colors.group0), (&bars1, &spec.colors.group1)] {
        for (k, &mass) in bars.values().iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let center = display.bin_value(k);
            let lo = (center - step / 2.0).max(0.0);
            let hi = (center + step / 2.0).min(1.0);
            b.rect(
                frame.sx(lo),
                frame.sy(mass),
                frame.sx(hi) - frame.sx(lo),
                frame.sy(0.0) - frame.sy(mass),
                &format!("fill:{color};fill-opacity:0.45"),
            );
        }
    }

    for (curve, color) in [(kde0, &spec.colors.group0), (kde1, &spec.colors.group1)] {
        b.polyline(
            &curve_points(&frame, curve),
            &format!("fill:none;stroke:{color};stroke-width:1.8"),
        );
    }

    for (mean, color) in [(mean0, &spec.colors.group0), (mean1, &spec.colors.group1)] {
        b.line(
            frame.sx(mean),
            frame.sy(0.0),
            frame.sx(mean),
            frame.sy(frame.y_max),
            &format!("stroke:{color};stroke-width:1.4;stroke-dasharray:2 3"),
        );
    }
    b.text(
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 12.0,
        &format!("means: {mean0:.2} / {mean1:.2}"),
        ANNOTATION_FONT,
    );

    legend(
        &mut b,
        &[
            (&spec.colors.group0, &spec.group_names.0),
            (&spec.colors.group1, &spec.group_names.1),
        ],
    );
    Ok(b.finish())
}

/// The area between the two KDE curves filled red and the area under their
/// pointwise minimum filled green, with both areas annotated.
pub fn plot_madd_zones(
    kde0: &KdeCurve,
    kde1: &KdeCurve,
    spec: &PlotSpec,
) -> Result<String, VizError> {
    let areas = zone_areas(kde0, kde1)?;
    let y_top = kde0
        .values()
        .iter()
        .chain(kde1.values())
        .copied()
        .fold(0.0, f64::max);
    let frame = Frame::new(1.0, nice_ceil(y_top * 1.05));

    let mut b = SvgBuilder::new(WIDTH, HEIGHT);
    draw_frame(&mut b, &frame, spec, &unit_ticks());

    let grid = kde0.grid();
    let mins: Vec<f64> = kde0
        .values()
        .iter()
        .zip(kde1.values())
        .map(|(&a, &b)| a.min(b))
        .collect();
    let maxs: Vec<f64> = kde0
        .values()
        .iter()
        .zip(kde1.values())
        .map(|(&a, &b)| a.max(b))
        .collect();

    // Fair zone: under the pointwise minimum.
    let mut green: Vec<(f64, f64)> = grid
        .iter()
        .zip(&mins)
        .map(|(&x, &y)| (frame.sx(x), frame.sy(y)))
        .collect();
    green.push((frame.sx(1.0), frame.sy(0.0)));
    green.push((frame.sx(0.0), frame.sy(0.0)));
    b.polygon(
        &green,
        &format!(
            "fill:{};fill-opacity:0.55;stroke:none",
            spec.colors.fair_zone
        ),
    );

    // MADD zone: between minimum and maximum envelopes.
    let mut red: Vec<(f64, f64)> = grid
        .iter()
        .zip(&maxs)
        .map(|(&x, &y)| (frame.sx(x), frame.sy(y)))
        .collect();
    red.extend(
        grid.iter()
            .zip(&mins)
            .rev()
            .map(|(&x, &y)| (frame.sx(x), frame.sy(y))),
    );
    b.polygon(
        &red,
        &format!(
            "fill:{};fill-opacity:0.55;stroke:none",
            spec.colors.madd_zone
        ),
    );

    for (curve, color) in [(kde0, &spec.colors.group0), (kde1, &spec.colors.group1)] {
        b.polyline(
            &curve_points(&frame, curve),
            &format!("fill:none;stroke:{color};stroke-width:1.8"),
        );
    }

    b.text(
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 12.0,
        &format!("MADD zone = {:.2}", areas.madd_zone),
        ANNOTATION_FONT,
    );
    b.text(
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 30.0,
        &format!("fair zone = {:.2}", areas.fair_zone),
        ANNOTATION_FONT,
    );
    legend(
        &mut b,
        &[
            (&spec.colors.group0, &spec.group_names.0),
            (&spec.colors.group1, &spec.group_names.1),
            (&spec.colors.madd_zone, "MADD zone"),
            (&spec.colors.fair_zone, "fair zone"),
        ],
    );
    Ok(b.finish())
}

/// Both ROC curves with the region between them shaded and the ABROCA value
/// annotated.
pub fn plot_abroca_slice(
    c0: &RocCurve,
    c1: &RocCurve,
    spec: &PlotSpec,
) -> Result<String, VizError> {
    let result = abroca(c0, c1)?;
    let frame = Frame::new(1.0, 1.0);

    let mut b = SvgBuilder::new(WIDTH, HEIGHT);
    draw_frame(&mut b, &frame, spec, &unit_ticks());

    // Chance diagonal.
    b.line(
        frame.sx(0.0),
        frame.sy(0.0),
        frame.sx(1.0),
        frame.sy(1.0),
        "stroke:#999999;stroke-width:1;stroke-dasharray:4 4",
    );

    // Shade between the curves: forward along one, back along the other.
    let mut shade: Vec<(f64, f64)> = c0
        .points()
        .iter()
        .map(|p| (frame.sx(p.fpr), frame.sy(p.tpr)))
        .collect();
    shade.extend(
        c1.points()
            .iter()
            .rev()
            .map(|p| (frame.sx(p.fpr), frame.sy(p.tpr))),
    );
    b.polygon(
        &shade,
        &format!(
            "fill:{};fill-opacity:0.35;stroke:none;fill-rule:evenodd",
            spec.colors.madd_zone
        ),
    );

    for (curve, color) in [(c0, &spec.colors.group0), (c1, &spec.colors.group1)] {
        let points: Vec<(f64, f64)> = curve
            .points()
            .iter()
            .map(|p| (frame.sx(p.fpr), frame.sy(p.tpr)))
            .collect();
        b.polyline(
            &points,
            &format!("fill:none;stroke:{color};stroke-width:1.8"),
        );
    }

    b.text(
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 12.0,
        &format!("ABROCA = {:.2}", result.value),
        ANNOTATION_FONT,
    );
    b.text(
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 30.0,
        &format!("AUC: {:.2} / {:.2}", result.auc_g0, result.auc_g1),
        ANNOTATION_FONT,
    );
    legend(
        &mut b,
        &[
            (&spec.colors.group0, &spec.group_names.0),
            (&spec.colors.group1, &spec.group_names.1),
        ],
    );
    Ok(b.finish())
}

const MI_PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Grouped bars of the average MI per course, one color per sensitive
/// feature.
pub fn plot_mi_bars(scores: &MiScores, spec: &PlotSpec) -> Result<String, VizError> {
    if scores.entries.is_empty() {
        return Err(VizError::EmptyScores);
    }
    let courses = scores.courses();
    let features = scores.sensitive_features();
    let averages: Vec<Vec<f64>> = courses
        .iter()
        .map(|c| {
            features
                .iter()
                .map(|f| scores.course_average(c, f).unwrap_or(0.0))
                .collect()
        })
        .collect();
    let max_mi = averages.iter().flatten().copied().fold(0.0, f64::max);
    let frame = Frame::new(courses.len() as f64, nice_ceil(max_mi * 1.1));

    let mut b = SvgBuilder::new(WIDTH, HEIGHT);
    let ticks: Vec<(f64, String)> = courses
        .iter()
        .enumerate()
        .map(|(i, c)| (i as f64 + 0.5, c.clone()))
        .collect();
    draw_frame(&mut b, &frame, spec, &ticks);

    let group_width = 0.8;
    let bar_width = group_width / features.len() as f64;
    for (ci, row) in averages.iter().enumerate() {
        for (fi, &value) in row.iter().enumerate() {
            let x0 = ci as f64 + 0.1 + fi as f64 * bar_width;
            let color = MI_PALETTE[fi % MI_PALETTE.len()];
            b.rect(
                frame.sx(x0),
                frame.sy(value),
                frame.sx(x0 + bar_width * 0.9) - frame.sx(x0),
                frame.sy(0.0) - frame.sy(value),
                &format!("fill:{color};fill-opacity:0.85"),
            );
        }
    }

    let legend_entries: Vec<(&str, &str)> = features
        .iter()
        .enumerate()
        .map(|(fi, f)| (MI_PALETTE[fi % MI_PALETTE.len()], f.as_str()))
        .collect();
    legend(&mut b, &legend_entries);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abroca::{roc_curve, RocPoint};
    use crate::density::density_vector;
    use crate::smoothing::kde;
    use crate::tabular::MiEntry;

    fn sample_spec(kind: PlotKind) -> PlotSpec {
        PlotSpec::new(kind, "test plot")
    }

    fn sample_inputs() -> (DensityVector, DensityVector, KdeCurve, KdeCurve) {
        let step = ProbabilityStep::new(0.01).unwrap();
        let probs0 = [0.1, 0.15, 0.2, 0.25, 0.4, 0.42];
        let probs1 = [0.6, 0.65, 0.7, 0.8, 0.85, 0.9];
        let d0 = density_vector(&probs0, step).unwrap();
        let d1 = density_vector(&probs1, step).unwrap();
        let k0 = kde(&probs0, 0.05, 128).unwrap();
        let k1 = kde(&probs1, 0.05, 128).unwrap();
        (d0, d1, k0, k1)
    }

    /// Tiny well-formedness check: tags balance and nest properly.
    fn assert_well_formed_xml(doc: &str) {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = doc;
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').expect("unclosed tag") + start;
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if tag.starts_with('?') || tag.starts_with('!') || tag.ends_with('/') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched closing tag");
            } else {
                let name = tag.split_whitespace().next().unwrap();
                stack.push(name.to_string());
            }
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn density_comparison_is_deterministic_and_well_formed() {
        let (d0, d1, k0, k1) = sample_inputs();
        let spec = sample_spec(PlotKind::DensityComparison);
        let a = plot_density_comparison(&d0, &d1, &k0, &k1, &spec).unwrap();
        let b = plot_density_comparison(&d0, &d1, &k0, &k1, &spec).unwrap();
        assert_eq!(a, b);
        assert_well_formed_xml(&a);
        assert!(a.contains("viewBox="));
        assert!(!a.contains("NaN"));
    }

    #[test]
    fn identical_groups_overlap_perfectly() {
        let (d0, _, k0, _) = sample_inputs();
        let spec = sample_spec(PlotKind::DensityComparison);
        let doc = plot_density_comparison(&d0, &d0, &k0, &k0, &spec).unwrap();
        assert_well_formed_xml(&doc);
        // Identical means annotated once for each group.
        assert!(doc.contains("means: 0.25 / 0.25"), "doc: {doc}");
    }

    #[test]
    fn point_mass_draws_a_full_height_bar() {
        let step = ProbabilityStep::new(0.1).unwrap();
        let d = density_vector(&[0.3; 10], step).unwrap();
        let k = kde(&[0.3; 10], 0.05, 128).unwrap();
        let spec = sample_spec(PlotKind::DensityComparison);
        let doc = plot_density_comparison(&d, &d, &k, &k, &spec).unwrap();
        assert_well_formed_xml(&doc);
        assert!(doc.contains("means: 0.30 / 0.30"));
    }

    #[test]
    fn madd_zone_annotations_match_zone_areas() {
        let (_, _, k0, k1) = sample_inputs();
        let spec = sample_spec(PlotKind::MaddZones);
        let doc = plot_madd_zones(&k0, &k1, &spec).unwrap();
        let areas = zone_areas(&k0, &k1).unwrap();
        assert!(doc.contains(&format!("MADD zone = {:.2}", areas.madd_zone)));
        assert!(doc.contains(&format!("fair zone = {:.2}", areas.fair_zone)));
        assert_well_formed_xml(&doc);
    }

    #[test]
    fn identical_curves_annotate_zero_madd_zone() {
        let (_, _, k0, _) = sample_inputs();
        let spec = sample_spec(PlotKind::MaddZones);
        let doc = plot_madd_zones(&k0, &k0, &spec).unwrap();
        assert!(doc.contains("MADD zone = 0.00"));
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let k0 = kde(&[0.2], 0.05, 64).unwrap();
        let k1 = kde(&[0.8], 0.05, 65).unwrap();
        let spec = sample_spec(PlotKind::MaddZones);
        assert!(matches!(
            plot_madd_zones(&k0, &k1, &spec),
            Err(VizError::Smoothing(SmoothingError::GridMismatch))
        ));
    }

    #[test]
    fn abroca_slice_annotates_the_metric() {
        let perfect = RocCurve::from_points(vec![
            RocPoint { fpr: 0.0, tpr: 0.0 },
            RocPoint { fpr: 0.0, tpr: 1.0 },
            RocPoint { fpr: 1.0, tpr: 1.0 },
        ])
        .unwrap();
        let diagonal = RocCurve::from_points(vec![
            RocPoint { fpr: 0.0, tpr: 0.0 },
            RocPoint { fpr: 1.0, tpr: 1.0 },
        ])
        .unwrap();
        let spec = sample_spec(PlotKind::AbrocaSlice);
        let doc = plot_abroca_slice(&perfect, &diagonal, &spec).unwrap();
        assert!(doc.contains("ABROCA = 0.50"));
        assert_well_formed_xml(&doc);

        let same = plot_abroca_slice(&perfect, &perfect, &spec).unwrap();
        assert!(same.contains("ABROCA = 0.00"));
    }

    #[test]
    fn abroca_slice_on_real_scores() {
        let scores = [0.9, 0.8, 0.4, 0.3, 0.7, 0.2];
        let labels = [true, true, false, true, false, false];
        let c0 = roc_curve(&scores, &labels).unwrap();
        let c1 = roc_curve(&[0.5, 0.5, 0.5, 0.5, 0.5, 0.6], &labels).unwrap();
        let spec = sample_spec(PlotKind::AbrocaSlice);
        let doc = plot_abroca_slice(&c0, &c1, &spec).unwrap();
        let expected = abroca(&c0, &c1).unwrap().value;
        assert!(doc.contains(&format!("ABROCA = {expected:.2}")));
    }

    #[test]
    fn mi_bars_cover_all_courses_and_features() {
        let scores = MiScores {
            entries: vec![
                MiEntry {
                    course_id: "AAA".into(),
                    sensitive: "gender".into(),
                    feature: "f".into(),
                    mi: 0.02,
                },
                MiEntry {
                    course_id: "BBB".into(),
                    sensitive: "gender".into(),
                    feature: "f".into(),
                    mi: 0.08,
                },
                MiEntry {
                    course_id: "BBB".into(),
                    sensitive: "poverty".into(),
                    feature: "f".into(),
                    mi: 0.01,
                },
            ],
        };
        let spec = sample_spec(PlotKind::MiBars);
        let doc = plot_mi_bars(&scores, &spec).unwrap();
        assert_well_formed_xml(&doc);
        assert!(doc.contains(">AAA<"));
        assert!(doc.contains(">BBB<"));
        assert!(doc.contains(">gender<"));
        assert!(doc.contains(">poverty<"));
    }

    #[test]
    fn all_zero_mi_still_draws_axes() {
        let scores = MiScores {
            entries: vec![MiEntry {
                course_id: "AAA".into(),
                sensitive: "gender".into(),
                feature: "f".into(),
                mi: 0.0,
            }],
        };
        let spec = sample_spec(PlotKind::MiBars);
        let doc = plot_mi_bars(&scores, &spec).unwrap();
        assert_well_formed_xml(&doc);
        assert!(doc.contains("<line"), "axes must still be drawn");
        assert!(matches!(
            plot_mi_bars(&MiScores::default(), &spec),
            Err(VizError::EmptyScores)
        ));
    }

    #[test]
    fn nice_ceil_is_monotone_and_covers() {
        for v in [0.013, 0.5, 1.0, 2.7, 11.0, 99.0] {
            let c = nice_ceil(v);
            assert!(c >= v, "{c} < {v}");
            assert!(c <= v * 10.0);
        }
        assert_eq!(nice_ceil(0.0), 1.0);
    }
}
