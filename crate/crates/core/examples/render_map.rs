//! Renders a hexagon-unit map of the bundled iris data with class markers,
//! plus the projection scatter, without going through the file pipeline.
//!
//! cargo run --example render_map -- out/render

use std::fs;
use std::path::PathBuf;

use somchroma::colorspace::{builtin_plane, colorize, GREEN_YELLOW_RED};
use somchroma::dataset::standardize;
use somchroma::projection::{align_axes, normalize_components, project, ProjectionConfig, ProjectionMethod};
use somchroma::render::{render_scatter_svg, render_som_svg, Overlay, RenderSpec, UnitShape};
use somchroma::samples;
use somchroma::som::{assign, train, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "out/render".into());
    fs::create_dir_all(&out)?;

    let (data, _) = standardize(&samples::iris())?;
    let grid = train(&data, 6, 7, &TrainConfig::for_grid(6, 7))?;
    let projected = project(
        &grid.reference_vectors(),
        &ProjectionConfig::new(ProjectionMethod::Sammon),
    )?;
    let aligned = align_axes(&projected.embedding);
    let colors = colorize(&normalize_components(&aligned), &builtin_plane(GREEN_YELLOW_RED)?)?;

    let overlay = Overlay::from_assignments(&assign(&grid, &data)?, None, data.class_labels());
    let spec = RenderSpec {
        unit_shape: UnitShape::Hexagon,
        spacing_fraction: 0.15,
        ..RenderSpec::default()
    };
    fs::write(out.join("som.svg"), render_som_svg(&grid, &colors, &overlay, &spec)?)?;
    fs::write(out.join("scatter.svg"), render_scatter_svg(&aligned, &colors, &spec)?)?;
    println!("wrote {}/som.svg and {}/scatter.svg", out.display(), out.display());
    Ok(())
}
