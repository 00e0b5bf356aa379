//! Stage-by-stage orchestration over a directory of artifacts.
//!
//! Every stage reads the artifacts of earlier stages from the output
//! directory, writes its own, and records their SHA-256 in `manifest.json`.
//! [`run_pipeline`] runs the six stages in order through the same files, so
//! running the stages one by one yields identical bytes.
//!
//! | stage    | reads                                        | writes                    |
//! |----------|----------------------------------------------|---------------------------|
//! | ingest   | input CSV                                    | `data.json`               |
//! | train    | `data.json`                                  | `grid.json`               |
//! | project  | `grid.json`                                  | `embedding.json`          |
//! | color    | `embedding.json`                             | `colors.json`             |
//! | render   | `data.json`, `grid.json`, `colors.json`      | `som.svg`, `scatter.svg`  |
//! | swatch   | nothing                                      | `swatch.svg`              |

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::colorspace::{builtin_plane, colorize_axes, ColorError, ColorPlane, RgbColor, CYAN_GRAY_RED};
use crate::dataset::{load_csv, standardize, CsvOptions, DataMatrix, DatasetError, StandardizationParams};
use crate::projection::{
    align_axes, normalize_components, project, Embedding2D, EmbeddingFile, ProjectionConfig, ProjectionError,
    ProjectionMethod,
};
use crate::render::{render_plane_swatch_svg, render_scatter_svg, render_som_svg, Overlay, RenderError, RenderSpec};
use crate::som::{
    assign, goodness, quantization_error, select_sigma, train_with_log, GridFile, SomError, TrainConfig,
    TrainingMetadata, DEFAULT_EPOCHS, DEFAULT_SIGMA_CANDIDATES,
};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_SCHEMA_VERSION: u32 = 1;

pub const DATA_FILE: &str = "data.json";
pub const GRID_FILE: &str = "grid.json";
pub const EMBEDDING_FILE: &str = "embedding.json";
pub const COLORS_FILE: &str = "colors.json";
pub const SOM_SVG: &str = "som.svg";
pub const SCATTER_SVG: &str = "scatter.svg";
pub const SWATCH_SVG: &str = "swatch.svg";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Train,
    Project,
    Color,
    Render,
    Swatch,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Train,
        Stage::Project,
        Stage::Color,
        Stage::Render,
        Stage::Swatch,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Train => "train",
            Stage::Project => "project",
            Stage::Color => "color",
            Stage::Render => "render",
            Stage::Swatch => "swatch",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown stage '{s}'"))
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Som(#[from] SomError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: schema version {found:?} is not supported (expected {expected})")]
    SchemaMismatch {
        path: PathBuf,
        found: Option<u64>,
        expected: u32,
    },
    #[error("{path}: {reason}")]
    Incompatible { path: PathBuf, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A stage failure tagged with the stage that raised it.
#[derive(Debug, Error)]
#[error("stage '{stage}' failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: StageError,
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InputConfig {
    pub path: Option<PathBuf>,
    pub has_header: bool,
    pub label_column: Option<String>,
    pub class_column: Option<String>,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self {
            path: None,
            has_header: true,
            label_column: None,
            class_column: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
}

impl Default for GridShape {
    fn default() -> Self {
        Self { rows: 6, cols: 7 }
    }
}

impl FromStr for GridShape {
    type Err = String;

    /// Parses `RxC`, e.g. `6x7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("grid '{s}' is not of the form RxC"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("grid '{s}' is not of the form RxC"))
        };
        Ok(Self {
            rows: parse(r)?,
            cols: parse(c)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainSection {
    pub epochs: usize,
    /// Defaults to half the longer grid side.
    pub sigma_initial: Option<f64>,
    /// When set, disables automatic selection.
    pub sigma_final: Option<f64>,
    pub sigma_candidates: Vec<f64>,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            epochs: DEFAULT_EPOCHS,
            sigma_initial: None,
            sigma_final: None,
            sigma_candidates: DEFAULT_SIGMA_CANDIDATES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProjectionSection {
    pub method: ProjectionMethod,
    pub k_neighbors: Option<usize>,
    pub repulsion_t: Option<f64>,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for ProjectionSection {
    fn default() -> Self {
        let d = ProjectionConfig::default();
        Self {
            method: d.method,
            k_neighbors: d.k_neighbors,
            repulsion_t: d.repulsion_t,
            max_iterations: d.max_iterations,
            tolerance: d.tolerance,
        }
    }
}

/// A builtin plane by name or a full plane definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaneChoice {
    Builtin(String),
    Custom(ColorPlane),
}

impl PlaneChoice {
    /// Custom planes must pass the gamut sweep.
    pub fn resolve(&self) -> Result<ColorPlane, ColorError> {
        match self {
            PlaneChoice::Builtin(name) => builtin_plane(name),
            PlaneChoice::Custom(plane) => plane.clone().validated(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColorSection {
    pub plane: PlaneChoice,
    /// Drive lightness by the first axis and hue by the second.
    pub swap_axes: bool,
}

impl Default for ColorSection {
    fn default() -> Self {
        Self {
            plane: PlaneChoice::Builtin(CYAN_GRAY_RED.into()),
            swap_axes: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSection {
    #[serde(flatten)]
    pub spec: RenderSpec,
    pub swatch_steps: [usize; 2],
}

impl Default for RenderSection {
    fn default() -> Self {
        Self {
            spec: RenderSpec::default(),
            swatch_steps: [11, 5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

/// Everything one run needs. Missing keys take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub schema_version: u32,
    pub input: InputConfig,
    pub grid: GridShape,
    pub train: TrainSection,
    pub projection: ProjectionSection,
    pub color: ColorSection,
    pub render: RenderSection,
    pub output: OutputConfig,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            input: InputConfig::default(),
            grid: GridShape::default(),
            train: TrainSection::default(),
            projection: ProjectionSection::default(),
            color: ColorSection::default(),
            render: RenderSection::default(),
            output: OutputConfig::default(),
            seed: 0,
        }
    }
}

impl PipelineConfig {
    /// Loads a config file, or the config recorded in a run manifest.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, StageError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| StageError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let json_err = |source| StageError::Json {
            path: path.to_path_buf(),
            source,
        };
        let mut value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
        if value.get("artifacts").is_some() {
            if let Some(config) = value.get_mut("config") {
                value = config.take();
            }
        }
        check_schema(&value, path, CONFIG_SCHEMA_VERSION)?;
        serde_json::from_value(value).map_err(json_err)
    }

    pub fn train_config(&self) -> TrainConfig {
        let base = TrainConfig::for_grid(self.grid.rows, self.grid.cols);
        let sigma_initial = self.train.sigma_initial.unwrap_or(base.sigma_initial);
        TrainConfig {
            epochs: self.train.epochs,
            sigma_initial,
            sigma_final: self.train.sigma_final.unwrap_or(sigma_initial.min(1.0)),
            seed: self.seed,
            sigma_candidates: match self.train.sigma_final {
                Some(_) => None,
                None => Some(self.train.sigma_candidates.clone()),
            },
        }
    }

    pub fn projection_config(&self) -> ProjectionConfig {
        ProjectionConfig {
            method: self.projection.method,
            k_neighbors: self.projection.k_neighbors,
            repulsion_t: self.projection.repulsion_t,
            max_iterations: self.projection.max_iterations,
            tolerance: self.projection.tolerance,
            seed: self.seed,
        }
    }

    fn csv_options(&self) -> CsvOptions {
        CsvOptions {
            has_header: self.input.has_header,
            label_column: self.input.label_column.clone(),
            class_column: self.input.class_column.clone(),
        }
    }

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.output.dir.join(name)
    }
}

fn check_schema(value: &serde_json::Value, path: &Path, expected: u32) -> Result<(), StageError> {
    let found = value.get("schema_version").and_then(serde_json::Value::as_u64);
    if found != Some(expected as u64) {
        return Err(StageError::SchemaMismatch {
            path: path.to_path_buf(),
            found,
            expected,
        });
    }
    Ok(())
}

fn read_artifact<T: DeserializeOwned>(path: &Path) -> Result<T, StageError> {
    let text = fs::read_to_string(path).map_err(|source| StageError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let json_err = |source| StageError::Json {
        path: path.to_path_buf(),
        source,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
    check_schema(&value, path, ARTIFACT_SCHEMA_VERSION)?;
    serde_json::from_value(value).map_err(json_err)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    text
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), StageError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| StageError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, bytes).map_err(|source| StageError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Standardized data plus the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataFile {
    pub schema_version: u32,
    pub source: Option<String>,
    pub n_rows: usize,
    pub n_cols: usize,
    pub column_names: Vec<String>,
    pub constant_columns: Vec<String>,
    pub standardization: StandardizationParams,
    pub row_labels: Option<Vec<String>>,
    pub class_labels: Option<Vec<String>>,
    pub values: Vec<Vec<f64>>,
}

impl DataFile {
    pub fn new(source: Option<String>, data: &DataMatrix, params: StandardizationParams) -> Self {
        Self {
            schema_version: ARTIFACT_SCHEMA_VERSION,
            source,
            n_rows: data.n_rows(),
            n_cols: data.n_cols(),
            column_names: data.column_names().to_vec(),
            constant_columns: params
                .constant_columns()
                .into_iter()
                .map(|j| data.column_names()[j].clone())
                .collect(),
            standardization: params,
            row_labels: data.row_labels().map(<[String]>::to_vec),
            class_labels: data.class_labels().map(<[String]>::to_vec),
            values: data.rows().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn matrix(&self) -> Result<DataMatrix, DatasetError> {
        let mut data = DataMatrix::from_rows(self.values.clone(), self.column_names.clone())?;
        if let Some(l) = &self.row_labels {
            data = data.with_row_labels(l.clone())?;
        }
        if let Some(c) = &self.class_labels {
            data = data.with_class_labels(c.clone())?;
        }
        Ok(data)
    }
}

/// Normalized coordinates and the colors derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorsFile {
    pub schema_version: u32,
    pub plane: ColorPlane,
    pub swap_axes: bool,
    /// Embedding rotated onto its principal axes.
    pub aligned: Vec<[f64; 2]>,
    /// `aligned` min-max scaled to the unit square.
    pub normalized: Vec<[f64; 2]>,
    pub colors: Vec<RgbColor>,
    pub hex: Vec<String>,
}

/// Record of a run: configuration and artifact checksums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub seed: u64,
    pub config: PipelineConfig,
    /// File name to SHA-256 hex digest.
    pub artifacts: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Numbers reported by a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub quantization_error: Option<f64>,
    pub goodness: Option<f64>,
    pub sigma_final: Option<f64>,
    pub final_stress: Option<f64>,
    /// Artifacts written, in order.
    pub written: Vec<PathBuf>,
}

impl RunSummary {
    fn merge(&mut self, other: RunSummary) {
        self.quantization_error = other.quantization_error.or(self.quantization_error);
        self.goodness = other.goodness.or(self.goodness);
        self.sigma_final = other.sigma_final.or(self.sigma_final);
        self.final_stress = other.final_stress.or(self.final_stress);
        self.written.extend(other.written);
    }
}

struct Output<'a> {
    config: &'a PipelineConfig,
    files: Vec<(String, String)>,
    summary: RunSummary,
}

impl<'a> Output<'a> {
    fn new(config: &'a PipelineConfig) -> Self {
        Self {
            config,
            files: Vec::new(),
            summary: RunSummary::default(),
        }
    }

    fn write(&mut self, name: &str, contents: String) -> Result<(), StageError> {
        let path = self.config.artifact(name);
        write_file(&path, contents.as_bytes())?;
        self.files.push((name.to_string(), sha256_hex(contents.as_bytes())));
        self.summary.written.push(path);
        Ok(())
    }

    /// Merges checksums into the directory's manifest.
    fn finish(self) -> Result<RunSummary, StageError> {
        let path = self.config.artifact(MANIFEST_FILE);
        let mut artifacts = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str::<Manifest>(&text)
                .map(|m| m.artifacts)
                .unwrap_or_default(),
            Err(_) => BTreeMap::new(),
        };
        artifacts.extend(self.files);
        let manifest = Manifest {
            schema_version: ARTIFACT_SCHEMA_VERSION,
            seed: self.config.seed,
            config: self.config.clone(),
            artifacts,
        };
        write_file(&path, to_json(&manifest).as_bytes())?;
        Ok(self.summary)
    }
}

fn ingest(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let path = config
        .input
        .path
        .as_ref()
        .ok_or_else(|| StageError::Config("no input CSV given".into()))?;
    let raw = load_csv(path, &config.csv_options())?;
    let (data, params) = standardize(&raw)?;
    let file = DataFile::new(Some(path.display().to_string()), &data, params);
    out.write(DATA_FILE, to_json(&file))
}

fn train_stage(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let data = read_artifact::<DataFile>(&config.artifact(DATA_FILE))?.matrix()?;
    let train = config.train_config();
    let GridShape { rows, cols } = config.grid;
    let (grid, log, scores) = match &train.sigma_candidates {
        Some(_) => {
            let sel = select_sigma(&data, rows, cols, &train)?;
            (sel.grid, sel.log, sel.scores)
        }
        None => {
            let (grid, log) = train_with_log(&data, rows, cols, &train)?;
            (grid, log, Vec::new())
        }
    };
    let qe = quantization_error(&grid, &data)?;
    let good = if grid.len() >= 2 {
        Some(goodness(&grid, &data)?)
    } else {
        None
    };
    let meta = TrainingMetadata {
        epochs: train.epochs,
        sigma_schedule: log.sigma_schedule.clone(),
        seed: train.seed,
        goodness: good,
        quantization_error: qe,
        sigma_scores: scores,
    };
    out.summary.quantization_error = Some(qe);
    out.summary.goodness = good;
    out.summary.sigma_final = log.sigma_schedule.last().copied();
    out.write(GRID_FILE, to_json(&GridFile::new(&grid, meta)))
}

fn grid_of(path: &Path) -> Result<crate::som::SomGrid, StageError> {
    let file: GridFile = read_artifact(path)?;
    Ok(file.to_grid()?)
}

fn project_stage(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let grid = grid_of(&config.artifact(GRID_FILE))?;
    let projection = project(&grid.reference_vectors(), &config.projection_config())?;
    out.summary.final_stress = Some(projection.final_stress);
    out.write(EMBEDDING_FILE, to_json(&EmbeddingFile::new(&projection)))
}

fn color_stage(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let plane = config.color.plane.resolve()?;
    let file: EmbeddingFile = read_artifact(&config.artifact(EMBEDDING_FILE))?;
    let aligned = align_axes(&file.embedding());
    let normalized = normalize_components(&aligned);
    let colors = colorize_axes(&normalized, &plane, config.color.swap_axes)?;
    let colors_file = ColorsFile {
        schema_version: ARTIFACT_SCHEMA_VERSION,
        plane,
        swap_axes: config.color.swap_axes,
        aligned: aligned.points,
        normalized: normalized.points,
        hex: colors.iter().map(RgbColor::to_hex).collect(),
        colors,
    };
    out.write(COLORS_FILE, to_json(&colors_file))
}

fn render_stage(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let data_path = config.artifact(DATA_FILE);
    let data = read_artifact::<DataFile>(&data_path)?.matrix()?;
    let grid = grid_of(&config.artifact(GRID_FILE))?;
    let colors_path = config.artifact(COLORS_FILE);
    let colors: ColorsFile = read_artifact(&colors_path)?;
    if colors.colors.len() != grid.len() {
        return Err(StageError::Incompatible {
            path: colors_path,
            reason: format!("{} colors for {} units", colors.colors.len(), grid.len()),
        });
    }
    if data.n_cols() != grid.dim() {
        return Err(StageError::Incompatible {
            path: data_path,
            reason: format!("{} columns, grid dimension {}", data.n_cols(), grid.dim()),
        });
    }
    let bmus = assign(&grid, &data)?;
    let overlay = Overlay::from_assignments(&bmus, data.row_labels(), data.class_labels());
    let spec = &config.render.spec;
    let som = render_som_svg(&grid, &colors.colors, &overlay, spec)?;
    let scatter = render_scatter_svg(&Embedding2D::new(colors.aligned), &colors.colors, spec)?;
    out.write(SOM_SVG, som)?;
    out.write(SCATTER_SVG, scatter)
}

fn swatch_stage(config: &PipelineConfig, out: &mut Output) -> Result<(), StageError> {
    let plane = config.color.plane.resolve()?;
    let [u, v] = config.render.swatch_steps;
    let svg = render_plane_swatch_svg(&plane, u, v, &config.render.spec)?;
    out.write(SWATCH_SVG, svg)
}

/// Runs exactly one stage against the configured output directory.
pub fn run_stage(stage: Stage, config: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    let mut out = Output::new(config);
    let result = match stage {
        Stage::Ingest => ingest(config, &mut out),
        Stage::Train => train_stage(config, &mut out),
        Stage::Project => project_stage(config, &mut out),
        Stage::Color => color_stage(config, &mut out),
        Stage::Render => render_stage(config, &mut out),
        Stage::Swatch => swatch_stage(config, &mut out),
    };
    result.map_err(at(stage))?;
    out.finish().map_err(at(stage))
}

/// Runs all six stages in order.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    // A stale manifest from an earlier run must not leak checksums.
    let _ = fs::remove_file(config.artifact(MANIFEST_FILE));
    let mut summary = RunSummary::default();
    for stage in Stage::ALL {
        summary.merge(run_stage(stage, config)?);
    }
    Ok(summary)
}
