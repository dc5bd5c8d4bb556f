//! Golden-file check of the SVG renderer: a fixed identical-groups input
//! must reproduce the committed document byte for byte.
//!
//! Regenerate after an intentional rendering change with
//! `BLESS_GOLDEN=1 cargo test -p fairdist golden`.

use fairdist::density::{density_vector, ProbabilityStep};
use fairdist::smoothing::kde;
use fairdist::viz::{plot_density_comparison, PlotKind, PlotSpec};
use std::path::Path;

#[test]
fn identical_groups_density_plot_matches_golden_file() {
    let step = ProbabilityStep::new(0.1).unwrap();
    let probs = [0.1, 0.2, 0.2, 0.3, 0.5, 0.5, 0.5, 0.7, 0.8];
    let d = density_vector(&probs, step).unwrap();
    let curve = kde(&probs, 0.08, 64).unwrap();
    let mut spec = PlotSpec::new(PlotKind::DensityComparison, "identical groups");
    spec.group_names = ("group 0".into(), "group 1".into());
    let doc = plot_density_comparison(&d, &d, &curve, &curve, &spec).unwrap();

    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/identical_groups_density.svg");
    if std::env::var_os("BLESS_GOLDEN").is_some() {
        std::fs::write(&golden_path, &doc).unwrap();
        return;
    }
    let golden = std::fs::read_to_string(&golden_path)
        .expect("golden file present (regenerate with BLESS_GOLDEN=1)");
    assert_eq!(doc, golden, "rendering drifted from the golden document");
}
