use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use somchroma::pipeline::{run_pipeline, run_stage, GridShape, PipelineConfig, PlaneChoice, RunSummary, Stage};
use somchroma::render::UnitShape;
use somchroma::{ColorPlane, ProjectionMethod};

#[derive(Parser)]
#[command(name = "somchroma", version, about = "Color SOM grids through CIELAB planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a CSV and write standardized data.json
    Ingest(Flags),
    /// Train the map and write grid.json
    Train(Flags),
    /// Project reference vectors and write embedding.json
    Project(Flags),
    /// Map the embedding onto a color plane and write colors.json
    Color(Flags),
    /// Write som.svg and scatter.svg
    Render(Flags),
    /// Write swatch.svg for the selected plane
    Swatch(Flags),
    /// Run every stage
    Pipeline(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mds,
    Sammon,
    Lmds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Circle,
    Hexagon,
}

#[derive(Args)]
struct Flags {
    /// JSON config or a previous run's manifest.json
    #[arg(long, env = "SOMCHROMA_CONFIG")]
    config: Option<PathBuf>,
    /// Input CSV
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input CSV has no header row
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    class_column: Option<String>,
    /// Grid shape, e.g. 6x7
    #[arg(long)]
    grid: Option<GridShape>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    sigma_init: Option<f64>,
    /// Fixed final sigma; disables automatic selection
    #[arg(long, conflicts_with = "sigma_auto")]
    sigma_final: Option<f64>,
    /// Candidate final sigmas, comma separated
    #[arg(long, value_delimiter = ',')]
    sigma_auto: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Neighbors per point for lmds
    #[arg(long = "k")]
    k: Option<usize>,
    /// Repulsion weight for lmds
    #[arg(long)]
    repulsion: Option<f64>,
    /// Builtin plane name or a JSON plane file
    #[arg(long)]
    plane: Option<String>,
    /// Drive lightness by the first axis
    #[arg(long)]
    swap_axes: bool,
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
    /// Artifact directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; output does not depend on it
    #[arg(long)]
    threads: Option<usize>,
}

impl Flags {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path).with_context(|| format!("loading config {}", path.display()))?,
            None => PipelineConfig::default(),
        };
        if let Some(p) = &self.input {
            cfg.input.path = Some(p.clone());
        }
        if self.no_header {
            cfg.input.has_header = false;
        }
        if let Some(c) = &self.label_column {
            cfg.input.label_column = Some(c.clone());
        }
        if let Some(c) = &self.class_column {
            cfg.input.class_column = Some(c.clone());
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if let Some(e) = self.epochs {
            cfg.train.epochs = e;
        }
        if let Some(s) = self.sigma_init {
            cfg.train.sigma_initial = Some(s);
        }
        if let Some(s) = self.sigma_final {
            cfg.train.sigma_final = Some(s);
        }
        if let Some(c) = &self.sigma_auto {
            cfg.train.sigma_final = None;
            cfg.train.sigma_candidates = c.clone();
        }
        if let Some(m) = self.method {
            cfg.projection.method = match m {
                MethodArg::Mds => ProjectionMethod::MetricMds,
                MethodArg::Sammon => ProjectionMethod::Sammon,
                MethodArg::Lmds => ProjectionMethod::Lmds,
            };
        }
        if let Some(k) = self.k {
            cfg.projection.k_neighbors = Some(k);
        }
        if let Some(t) = self.repulsion {
            cfg.projection.repulsion_t = Some(t);
        }
        if let Some(p) = &self.plane {
            cfg.color.plane = if p.ends_with(".json") {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading plane {p}"))?;
                PlaneChoice::Custom(
                    serde_json::from_str::<ColorPlane>(&text).with_context(|| format!("parsing plane {p}"))?,
                )
            } else {
                PlaneChoice::Builtin(p.clone())
            };
        }
        if self.swap_axes {
            cfg.color.swap_axes = true;
        }
        if let Some(s) = self.shape {
            cfg.render.spec.unit_shape = match s {
                ShapeArg::Circle => UnitShape::Circle,
                ShapeArg::Hexagon => UnitShape::Hexagon,
            };
        }
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

fn report(summary: &RunSummary) {
    if let Some(s) = summary.sigma_final {
        eprintln!("final sigma: {s}");
    }
    if let Some(q) = summary.quantization_error {
        eprintln!("quantization error: {q:.6}");
    }
    if let Some(g) = summary.goodness {
        eprintln!("goodness: {g:.6}");
    }
    if let Some(s) = summary.final_stress {
        eprintln!("final stress: {s:.6e}");
    }
    for path in &summary.written {
        eprintln!("wrote {}", path.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    let (stage, flags) = match cli.command {
        Command::Ingest(f) => (Some(Stage::Ingest), f),
        Command::Train(f) => (Some(Stage::Train), f),
        Command::Project(f) => (Some(Stage::Project), f),
        Command::Color(f) => (Some(Stage::Color), f),
        Command::Render(f) => (Some(Stage::Render), f),
        Command::Swatch(f) => (Some(Stage::Swatch), f),
        Command::Pipeline(f) => (None, f),
    };
    if let Some(n) = flags.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let config = flags.config()?;
    // Fail before any work when the plane is unusable.
    if matches!(stage, None | Some(Stage::Color) | Some(Stage::Swatch)) {
        config.color.plane.resolve()?;
    }
    let summary = match stage {
        Some(s) => run_stage(s, &config)?,
        None => run_pipeline(&config)?,
    };
    report(&summary);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
