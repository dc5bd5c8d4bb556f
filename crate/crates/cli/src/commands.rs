//! The audit pipeline behind each subcommand: ingest, mutual information,
//! the full audit, and re-rendering plots and reports from a saved bundle.
//!
//! All outputs of a command are computed in memory first and written only
//! afterwards, so a failing run leaves no partial files behind.

use crate::bundle::{
    AuditBundle, AuditCell, CourseAudit, EffectiveConfig, FileHash, GroupShare, ModelAccuracy,
};
use crate::config::{AuditConfig, ConfigError, DataSource};
use fairdist::abroca::{abroca, roc_curve, AbrocaError};
use fairdist::density::{
    density_vector, round_prob, split_by_group, DensityError, ProbabilityStep,
};
use fairdist::madd::{classify_behavior, madd};
use fairdist::models::{accuracy, predict_proba, records_from_probs, train, ModelError, ModelKind};
use fairdist::report::{
    build_matrix, render_matrix, render_summary, summarize, CellBehavior, MatrixCell, MetricKind,
    RenderFormat, ReportError,
};
use fairdist::smoothing::{
    bandwidth_with_fallback, kde, zone_areas, SmoothingError, DEFAULT_GRID_SIZE,
};
use fairdist::tabular::{
    course_ids, group_proportions, load_generic_csv, load_oulad, mutual_information,
    preprocess_with, stratified_split, Dataset, GenericCsvSpec, MiScores, PreprocessOptions,
    PreprocessStats, Preprocessed, TabularError, STUDENT_INFO_FILE, STUDENT_VLE_FILE,
};
use fairdist::viz::{
    plot_abroca_slice, plot_density_comparison, plot_madd_zones, plot_mi_bars, PlotKind, PlotSpec,
    VizError,
};
use fairdist::Group;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Read;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Tabular(#[from] TabularError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Smoothing(#[from] SmoothingError),
    #[error(transparent)]
    Abroca(#[from] AbrocaError),
    #[error(transparent)]
    Viz(#[from] VizError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("training failed: {0}")]
    Training(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AppError {
    /// 1 = usage, 2 = data, 3 = training.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 1,
            AppError::Training(_) => 3,
            _ => 2,
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, contents).map_err(|source| AppError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), AppError> {
    std::fs::create_dir_all(dir).map_err(|source| AppError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("output serializes");
    json.push('\n');
    json
}

fn sha256_file(path: &Path) -> Result<FileHash, AppError> {
    let mut file = std::fs::File::open(path).map_err(|source| AppError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut hasher = Sha256::new();
    let mut buffer = vec![0u8; 1 << 20];
    loop {
        let n = file.read(&mut buffer).map_err(|source| AppError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        if n == 0 {
            break;
        }
        hasher.update(&buffer[..n]);
    }
    Ok(FileHash {
        file: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        sha256: hex::encode(hasher.finalize()),
    })
}

fn hash_inputs(config: &AuditConfig) -> Result<Vec<FileHash>, AppError> {
    match &config.data {
        DataSource::Oulad { dir } => Ok(vec![
            sha256_file(&dir.join(STUDENT_INFO_FILE))?,
            sha256_file(&dir.join(STUDENT_VLE_FILE))?,
        ]),
        DataSource::GenericCsv { path, .. } => Ok(vec![sha256_file(path)?]),
    }
}

/// Loads and preprocesses every selected course.
fn load_courses(config: &AuditConfig) -> Result<Vec<Preprocessed>, AppError> {
    let options = PreprocessOptions {
        poverty_boundary_deprived: config.poverty_boundary_deprived,
    };
    match &config.data {
        DataSource::Oulad { dir } => {
            let raw = load_oulad(dir)?;
            let selected = if config.courses.is_empty() {
                course_ids(&raw)
            } else {
                config.courses.clone()
            };
            selected
                .iter()
                .map(|course| preprocess_with(&raw, course, &options).map_err(AppError::from))
                .collect()
        }
        DataSource::GenericCsv {
            path,
            target_column,
        } => {
            let prep = load_generic_csv(&GenericCsvSpec {
                path: path.clone(),
                target_column: target_column.clone(),
                sensitive_columns: config.sensitive.clone(),
                course_id: None,
            })?;
            if !config.courses.is_empty() && !config.courses.contains(&prep.dataset.course_id) {
                return Err(TabularError::CourseNotFound(config.courses[0].clone()).into());
            }
            Ok(vec![prep])
        }
    }
}

/// Per-course ingest record: preprocessing statistics plus the group
/// proportions of each sensitive feature.
#[derive(Debug, Clone, Serialize)]
pub struct CourseIngest {
    #[serde(flatten)]
    pub stats: PreprocessStats,
    pub group_shares: Vec<GroupShare>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestReport {
    pub total_rows_out: usize,
    pub input_hashes: Vec<FileHash>,
    pub courses: Vec<CourseIngest>,
}

fn course_group_shares(config: &AuditConfig, d: &Dataset) -> Result<Vec<GroupShare>, AppError> {
    config
        .sensitive
        .iter()
        .map(|feature| {
            let (p0, p1) = group_proportions(d, feature)?;
            Ok(GroupShare {
                feature: feature.clone(),
                p0,
                p1,
            })
        })
        .collect()
}

/// Preprocesses the data source and writes per-course dataset CSVs, stats
/// sidecars, and an overall ingest report.
pub fn cmd_ingest(config: &AuditConfig) -> Result<IngestReport, AppError> {
    config.validate()?;
    let input_hashes = hash_inputs(config)?;
    let prepped = load_courses(config)?;

    let mut courses = Vec::new();
    for prep in &prepped {
        courses.push(CourseIngest {
            stats: prep.stats.clone(),
            group_shares: course_group_shares(config, &prep.dataset)?,
        });
    }
    let report = IngestReport {
        total_rows_out: courses.iter().map(|c| c.stats.rows_out).sum(),
        input_hashes,
        courses,
    };

    ensure_dir(&config.out_dir)?;
    for prep in &prepped {
        let course = &prep.dataset.course_id;
        prep.dataset
            .write_csv(&config.out_dir.join(format!("{course}_dataset.csv")))?;
        let ingest = report
            .courses
            .iter()
            .find(|c| c.stats.course_id == *course)
            .expect("course was just ingested");
        write_file(
            &config.out_dir.join(format!("{course}_stats.json")),
            to_pretty_json(ingest).as_bytes(),
        )?;
    }
    write_file(
        &config.out_dir.join("ingest_report.json"),
        to_pretty_json(&report).as_bytes(),
    )?;
    Ok(report)
}

/// Computes mutual information between each sensitive feature and the other
/// features, per course, and writes the scores and their bar chart.
pub fn cmd_mi(config: &AuditConfig) -> Result<MiScores, AppError> {
    config.validate()?;
    let prepped = load_courses(config)?;
    let mut scores = MiScores::default();
    for prep in &prepped {
        for feature in &config.sensitive {
            scores.extend(mutual_information(&prep.dataset, feature)?);
        }
    }
    let spec = PlotSpec::new(
        PlotKind::MiBars,
        "Mutual information with the sensitive features",
    );
    let chart = plot_mi_bars(&scores, &spec)?;

    ensure_dir(&config.out_dir)?;
    write_file(
        &config.out_dir.join("mi_scores.json"),
        to_pretty_json(&scores).as_bytes(),
    )?;
    write_file(&config.out_dir.join("mi_bars.svg"), chart.as_bytes())?;
    Ok(scores)
}

fn group_display_names(feature: &str) -> (String, String) {
    let (g0, g1) = match feature {
        "gender" => ("women", "men"),
        "poverty" => ("less deprived", "more deprived"),
        "disability" => ("no disability", "declared disability"),
        _ => ("group 0", "group 1"),
    };
    (g0.to_string(), g1.to_string())
}

fn audit_cell(
    config: &AuditConfig,
    step: ProbabilityStep,
    display: ProbabilityStep,
    model: ModelKind,
    probs: &[f64],
    test: &Dataset,
    feature: &str,
) -> Result<AuditCell, AppError> {
    let groups = test.sensitive_groups(feature)?;
    let records = records_from_probs(probs, &groups, &test.y, config.threshold)?;
    let (probs_g0, probs_g1) = split_by_group(&records)?;

    let density_g0 = density_vector(&probs_g0, step)?;
    let density_g1 = density_vector(&probs_g1, step)?;
    let madd_result = madd(&density_g0, &density_g1)?;
    let behavior = classify_behavior(&madd_result, config.gap_threshold, config.peak_threshold);

    // Sensitivity of the metric to the sampling step, recomputed from the
    // raw probabilities at the coarser display step.
    let madd_at_display_step = madd(
        &density_vector(&probs_g0, display)?,
        &density_vector(&probs_g1, display)?,
    )?
    .value;
    let step_sensitivity = (madd_result.value - madd_at_display_step).abs();

    // KDE smoothing runs on the rounded probabilities, the same values the
    // density vectors count.
    let rounded = |probs: &[f64]| -> Result<Vec<f64>, DensityError> {
        probs.iter().map(|&p| round_prob(p, step)).collect()
    };
    let rounded_g0 = rounded(&probs_g0)?;
    let rounded_g1 = rounded(&probs_g1)?;
    let kde_g0 = kde(
        &rounded_g0,
        bandwidth_with_fallback(&rounded_g0, step),
        DEFAULT_GRID_SIZE,
    )?;
    let kde_g1 = kde(
        &rounded_g1,
        bandwidth_with_fallback(&rounded_g1, step),
        DEFAULT_GRID_SIZE,
    )?;
    let zones = zone_areas(&kde_g0, &kde_g1)?;

    let labels_g0: Vec<bool> = records
        .iter()
        .filter(|r| r.group == Group::G0)
        .map(|r| r.y_true)
        .collect();
    let labels_g1: Vec<bool> = records
        .iter()
        .filter(|r| r.group == Group::G1)
        .map(|r| r.y_true)
        .collect();
    let roc_g0 = roc_curve(&probs_g0, &labels_g0)?;
    let roc_g1 = roc_curve(&probs_g1, &labels_g1)?;
    let abroca_result = abroca(&roc_g0, &roc_g1)?;

    Ok(AuditCell {
        model,
        feature: feature.to_string(),
        madd: madd_result,
        behavior,
        madd_at_display_step,
        step_sensitivity,
        abroca: abroca_result,
        density_g0,
        density_g1,
        kde_g0,
        kde_g1,
        zones,
        roc_g0,
        roc_g1,
    })
}

fn audit_course(
    config: &AuditConfig,
    step: ProbabilityStep,
    display: ProbabilityStep,
    prep: &Preprocessed,
) -> Result<CourseAudit, AppError> {
    let dataset = &prep.dataset;
    let mut split = stratified_split(dataset, config.split_ratio, config.seed)?;
    if config.train_normalization {
        split = split.renormalize_with_train_stats()?;
    }

    let mut trained = Vec::new();
    let mut accuracies = Vec::new();
    for &kind in &config.models {
        let model = train(kind, &split.train, &config.hyperparams, config.seed)?;
        accuracies.push(ModelAccuracy {
            model: kind,
            accuracy: accuracy(&model, &split.test, config.threshold)?,
        });
        trained.push(model);
    }

    let mut cells = Vec::new();
    for model in &trained {
        // One scoring pass per model; the per-feature cells reuse it.
        let probs = predict_proba(model, &split.test.x)?;
        for feature in &config.sensitive {
            cells.push(audit_cell(
                config,
                step,
                display,
                model.kind,
                &probs,
                &split.test,
                feature,
            )?);
        }
    }

    let as_cells = |metric: fn(&AuditCell) -> f64| -> Vec<MatrixCell> {
        cells
            .iter()
            .map(|c| MatrixCell {
                model: c.model,
                feature: c.feature.clone(),
                value: metric(c),
            })
            .collect()
    };
    let madd_matrix = build_matrix(
        &as_cells(|c| c.madd.value),
        MetricKind::Madd,
        &dataset.course_id,
        &config.models,
        &config.sensitive,
    )?;
    let abroca_matrix = build_matrix(
        &as_cells(|c| c.abroca.value),
        MetricKind::Abroca,
        &dataset.course_id,
        &config.models,
        &config.sensitive,
    )?;
    let behaviors: Vec<CellBehavior> = cells
        .iter()
        .map(|c| CellBehavior {
            model: c.model,
            feature: c.feature.clone(),
            assessment: c.behavior.clone(),
        })
        .collect();
    let summary = summarize(&madd_matrix, &abroca_matrix, &behaviors)?;

    Ok(CourseAudit {
        course_id: dataset.course_id.clone(),
        rows: dataset.n_rows(),
        train_rows: split.train.n_rows(),
        test_rows: split.test.n_rows(),
        group_shares: course_group_shares(config, dataset)?,
        accuracies,
        cells,
        madd_matrix,
        abroca_matrix,
        summary,
    })
}

/// Runs the full audit pipeline and writes the bundle, reports, and plots.
///
/// Nothing is written until every course has been audited, so a training
/// failure (exit 3) leaves the output directory untouched.
pub fn cmd_audit(config: &AuditConfig) -> Result<AuditBundle, AppError> {
    config.validate()?;
    let step = config.step()?;
    let display = config.display_step()?;
    let input_hashes = hash_inputs(config)?;
    let prepped = load_courses(config)?;

    let mut courses = Vec::new();
    for prep in &prepped {
        courses.push(audit_course(config, step, display, prep)?);
    }

    let bundle = AuditBundle {
        config: EffectiveConfig {
            config: config.clone(),
            m: step.num_bins(),
        },
        input_hashes,
        courses,
    };

    ensure_dir(&config.out_dir)?;
    write_file(
        &config.out_dir.join("bundle.json"),
        bundle.to_json().as_bytes(),
    )?;
    write_reports(&bundle, &config.out_dir)?;
    write_plots(&bundle, &config.out_dir)?;
    Ok(bundle)
}

/// Renders every course report of a bundle into `dir`. Returns the paths.
pub fn write_reports(bundle: &AuditBundle, dir: &Path) -> Result<Vec<PathBuf>, AppError> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for course in &bundle.courses {
        let path = dir.join(format!("{}_report.md", course.course_id));
        write_file(&path, course_report_markdown(bundle, course).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

fn course_report_markdown(bundle: &AuditBundle, course: &CourseAudit) -> String {
    let config = &bundle.config;
    let mut md = String::new();
    md.push_str(&format!(
        "# Fairness audit — course {}\n\n",
        course.course_id
    ));
    md.push_str(&format!(
        "{} rows ({} train / {} test), e = {} (m = {}), t = {}, split = {}, seed = {}.\n\n",
        course.rows,
        course.train_rows,
        course.test_rows,
        config.config.e,
        config.m,
        config.config.threshold,
        config.config.split_ratio,
        config.config.seed,
    ));

    md.push_str("## Group proportions (full course data)\n\n");
    md.push_str("| Feature | Group 0 | Group 1 |\n| --- | --- | --- |\n");
    for share in &course.group_shares {
        md.push_str(&format!(
            "| {} | {:.1}% | {:.1}% |\n",
            share.feature,
            share.p0 * 100.0,
            share.p1 * 100.0
        ));
    }

    md.push_str("\n## Model accuracy (test split)\n\n| Model | Accuracy |\n| --- | --- |\n");
    for acc in &course.accuracies {
        md.push_str(&format!("| {} | {:.3} |\n", acc.model, acc.accuracy));
    }

    md.push_str("\n## MADD\n\n");
    md.push_str(&render_matrix(&course.madd_matrix, RenderFormat::Markdown));
    md.push_str("\n## ABROCA\n\n");
    md.push_str(&render_matrix(
        &course.abroca_matrix,
        RenderFormat::Markdown,
    ));
    md.push('\n');
    md.push_str(&render_summary(&course.summary, RenderFormat::Markdown));

    md.push_str("\n### Step sensitivity\n\n");
    md.push_str(&format!(
        "MADD at e = {} versus the display step {}:\n\n",
        config.config.e, config.config.display_step
    ));
    md.push_str("| Model | Feature | MADD(e) | MADD(display) | abs. diff |\n");
    md.push_str("| --- | --- | --- | --- | --- |\n");
    for cell in &course.cells {
        md.push_str(&format!(
            "| {} | {} | {:.3} | {:.3} | {:.3} |\n",
            cell.model,
            cell.feature,
            cell.madd.value,
            cell.madd_at_display_step,
            cell.step_sensitivity
        ));
    }
    md
}

/// Renders every SVG plot of a bundle into `dir`. Returns the paths.
pub fn write_plots(bundle: &AuditBundle, dir: &Path) -> Result<Vec<PathBuf>, AppError> {
    ensure_dir(dir)?;
    let display_step = bundle.config.config.display_step;
    let mut written = Vec::new();
    for course in &bundle.courses {
        for cell in &course.cells {
            let group_names = group_display_names(&cell.feature);
            let title = |what: &str| {
                format!(
                    "{} / {} / {} — {what}",
                    course.course_id, cell.model, cell.feature
                )
            };
            let base = format!("{}_{}_{}", course.course_id, cell.model, cell.feature);

            let mut spec = PlotSpec::new(PlotKind::DensityComparison, title("densities"));
            spec.display_step = display_step;
            spec.group_names = group_names.clone();
            let doc = plot_density_comparison(
                &cell.density_g0,
                &cell.density_g1,
                &cell.kde_g0,
                &cell.kde_g1,
                &spec,
            )?;
            let path = dir.join(format!(
                "{base}_{}.svg",
                PlotKind::DensityComparison.file_suffix()
            ));
            write_file(&path, doc.as_bytes())?;
            written.push(path);

            let mut spec = PlotSpec::new(PlotKind::MaddZones, title("MADD zones"));
            spec.group_names = group_names.clone();
            let doc = plot_madd_zones(&cell.kde_g0, &cell.kde_g1, &spec)?;
            let path = dir.join(format!("{base}_{}.svg", PlotKind::MaddZones.file_suffix()));
            write_file(&path, doc.as_bytes())?;
            written.push(path);

            let mut spec = PlotSpec::new(PlotKind::AbrocaSlice, title("ABROCA"));
            spec.group_names = group_names;
            let doc = plot_abroca_slice(&cell.roc_g0, &cell.roc_g1, &spec)?;
            let path = dir.join(format!(
                "{base}_{}.svg",
                PlotKind::AbrocaSlice.file_suffix()
            ));
            write_file(&path, doc.as_bytes())?;
            written.push(path);
        }
    }
    Ok(written)
}

fn load_bundle(path: &Path) -> Result<AuditBundle, AppError> {
    AuditBundle::load(path).map_err(|source| AppError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Re-renders the SVG plots from a saved bundle.
pub fn cmd_plot(bundle_path: &Path, out: Option<&Path>) -> Result<Vec<PathBuf>, AppError> {
    let bundle = load_bundle(bundle_path)?;
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| bundle_path.parent().unwrap_or(Path::new(".")).to_path_buf());
    write_plots(&bundle, &dir)
}

/// Re-renders the Markdown reports from a saved bundle.
pub fn cmd_report(bundle_path: &Path, out: Option<&Path>) -> Result<Vec<PathBuf>, AppError> {
    let bundle = load_bundle(bundle_path)?;
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| bundle_path.parent().unwrap_or(Path::new(".")).to_path_buf());
    write_reports(&bundle, &dir)
}
