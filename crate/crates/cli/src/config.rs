//! Audit configuration: TOML file, command-line flags, and the resolved
//! effective configuration. Flags win over file values; everything else
//! falls back to the documented defaults.

use fairdist::density::ProbabilityStep;
use fairdist::models::{Hyperparams, ModelKind};
use fairdist::tabular::SENSITIVE_FEATURES;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid probability step e = {0}: 1/e must be a positive integer so that m = 1/e + 1 grid points exist (e.g. 0.1 or 0.01)")]
    InvalidStep(f64),
    #[error("invalid display step {0}: must divide 1 exactly")]
    InvalidDisplayStep(f64),
    #[error("classification threshold must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error("split ratio must lie in (0, 1), got {0}")]
    InvalidSplit(f64),
    #[error("unknown model '{0}' (expected LR, KN, DT, or NB)")]
    UnknownModel(String),
    #[error("no models selected")]
    NoModels,
    #[error("no sensitive features selected")]
    NoSensitiveFeatures,
    #[error("behavior thresholds must be nonnegative")]
    NegativeThreshold,
    #[error("exactly one data source is required: --data-dir for an OULAD directory or --csv with --target-col and --sensitive")]
    DataSource,
}

/// Where the audit data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DataSource {
    /// A directory with the OULAD CSV files.
    Oulad { dir: PathBuf },
    /// A single CSV with declared target and sensitive columns.
    GenericCsv {
        path: PathBuf,
        target_column: String,
    },
}

/// The fully resolved audit configuration, echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub data: DataSource,
    /// Course ids to audit; empty means every course in the data.
    pub courses: Vec<String>,
    pub sensitive: Vec<String>,
    /// Probability sampling step for the density vectors.
    pub e: f64,
    /// Classification threshold.
    pub threshold: f64,
    /// Train fraction of the stratified split.
    pub split_ratio: f64,
    pub seed: u64,
    pub models: Vec<ModelKind>,
    pub hyperparams: Hyperparams,
    /// Histogram bar width in the plots.
    pub display_step: f64,
    /// |mean gap| at or above which unequal treatment is flagged.
    pub gap_threshold: f64,
    /// Peak density at or above which stereotypical judgement is flagged.
    pub peak_threshold: f64,
    pub out_dir: PathBuf,
    /// Puts the 40–50% deprivation band into the deprived group.
    pub poverty_boundary_deprived: bool,
    /// Re-normalize with statistics from the training split only.
    pub train_normalization: bool,
}

impl AuditConfig {
    pub fn step(&self) -> Result<ProbabilityStep, ConfigError> {
        ProbabilityStep::new(self.e).map_err(|_| ConfigError::InvalidStep(self.e))
    }

    pub fn display_step(&self) -> Result<ProbabilityStep, ConfigError> {
        ProbabilityStep::new(self.display_step)
            .map_err(|_| ConfigError::InvalidDisplayStep(self.display_step))
    }

    /// Number of density-vector grid points, `m = 1/e + 1`.
    pub fn m(&self) -> Result<usize, ConfigError> {
        Ok(self.step()?.num_bins())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.step()?;
        self.display_step()?;
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(ConfigError::InvalidThreshold(self.threshold));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(ConfigError::InvalidSplit(self.split_ratio));
        }
        if self.models.is_empty() {
            return Err(ConfigError::NoModels);
        }
        if self.sensitive.is_empty() {
            return Err(ConfigError::NoSensitiveFeatures);
        }
        if self.gap_threshold < 0.0 || self.peak_threshold < 0.0 {
            return Err(ConfigError::NegativeThreshold);
        }
        Ok(())
    }
}

/// Command-line flags shared by the data-driven subcommands.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonFlags {
    /// Directory holding the OULAD CSV files
    #[arg(long, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
    /// Generic CSV file (alternative to --data-dir)
    #[arg(long, value_name = "FILE", conflicts_with = "data_dir")]
    pub csv: Option<PathBuf>,
    /// Target column of the generic CSV (values 0/1)
    #[arg(long, value_name = "NAME")]
    pub target_col: Option<String>,
    /// Sensitive feature names (comma-separated)
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    pub sensitive: Option<Vec<String>>,
    /// Course ids to audit (comma-separated; default: all)
    #[arg(long = "course", value_delimiter = ',', value_name = "IDS")]
    pub courses: Option<Vec<String>>,
    /// Probability sampling step (1/e must be an integer)
    #[arg(long)]
    pub e: Option<f64>,
    /// Classification threshold in (0, 1)
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Train fraction of the stratified split, in (0, 1)
    #[arg(long)]
    pub split: Option<f64>,
    /// Random seed for the split
    #[arg(long)]
    pub seed: Option<u64>,
    /// Models to audit (comma-separated: LR,KN,DT,NB)
    #[arg(long, value_delimiter = ',', value_name = "KINDS")]
    pub models: Option<Vec<String>>,
    /// Histogram bar width in plots (must divide 1)
    #[arg(long)]
    pub display_step: Option<f64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// TOML configuration file; flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// |mean gap| threshold for flagging unequal treatment
    #[arg(long)]
    pub gap_threshold: Option<f64>,
    /// Peak density threshold for flagging stereotypical judgement
    #[arg(long)]
    pub peak_threshold: Option<f64>,
    /// Put the 40-50% deprivation band into the deprived group
    #[arg(long)]
    pub poverty_boundary_deprived: bool,
    /// Normalize with statistics from the training split only
    #[arg(long)]
    pub train_normalization: bool,
}

/// The TOML configuration file; every field optional, same names as flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub data_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub target_col: Option<String>,
    pub sensitive: Option<Vec<String>>,
    pub course: Option<Vec<String>>,
    pub e: Option<f64>,
    pub threshold: Option<f64>,
    pub split: Option<f64>,
    pub seed: Option<u64>,
    pub models: Option<Vec<String>>,
    pub display_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub gap_threshold: Option<f64>,
    pub peak_threshold: Option<f64>,
    pub poverty_boundary_deprived: Option<bool>,
    pub train_normalization: Option<bool>,
    #[serde(default)]
    pub hyperparams: Option<Hyperparams>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }
}

fn parse_models(names: &[String]) -> Result<Vec<ModelKind>, ConfigError> {
    if names.is_empty() {
        return Err(ConfigError::NoModels);
    }
    names
        .iter()
        .map(|name| {
            name.parse()
                .map_err(|_| ConfigError::UnknownModel(name.clone()))
        })
        .collect()
}

/// Resolves flags over file values over defaults into a validated config.
pub fn resolve(flags: &CommonFlags) -> Result<AuditConfig, ConfigError> {
    let file = match &flags.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };

    let data = match (
        flags.data_dir.as_ref().or(file.data_dir.as_ref()),
        flags.csv.as_ref().or(file.csv.as_ref()),
    ) {
        (Some(dir), None) => DataSource::Oulad { dir: dir.clone() },
        (None, Some(path)) => DataSource::GenericCsv {
            path: path.clone(),
            target_column: flags
                .target_col
                .clone()
                .or(file.target_col.clone())
                .ok_or(ConfigError::DataSource)?,
        },
        _ => return Err(ConfigError::DataSource),
    };

    let sensitive = flags
        .sensitive
        .clone()
        .or(file.sensitive.clone())
        .unwrap_or_else(|| SENSITIVE_FEATURES.iter().map(|s| s.to_string()).collect());

    let models = match flags.models.as_ref().or(file.models.as_ref()) {
        Some(names) => parse_models(names)?,
        None => ModelKind::ALL.to_vec(),
    };

    let config = AuditConfig {
        data,
        courses: flags
            .courses
            .clone()
            .or(file.course.clone())
            .unwrap_or_default(),
        sensitive,
        e: flags.e.or(file.e).unwrap_or(0.01),
        threshold: flags.threshold.or(file.threshold).unwrap_or(0.5),
        split_ratio: flags.split.or(file.split).unwrap_or(0.7),
        seed: flags.seed.or(file.seed).unwrap_or(42),
        models,
        hyperparams: file.hyperparams.unwrap_or_default(),
        display_step: flags.display_step.or(file.display_step).unwrap_or(0.1),
        gap_threshold: flags.gap_threshold.or(file.gap_threshold).unwrap_or(0.05),
        peak_threshold: flags.peak_threshold.or(file.peak_threshold).unwrap_or(0.25),
        out_dir: flags
            .out
            .clone()
            .or(file.out.clone())
            .unwrap_or_else(|| PathBuf::from("audit_out")),
        poverty_boundary_deprived: flags.poverty_boundary_deprived
            || file.poverty_boundary_deprived.unwrap_or(false),
        train_normalization: flags.train_normalization || file.train_normalization.unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}
