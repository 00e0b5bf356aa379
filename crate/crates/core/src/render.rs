//! SVG output: the colored map, the projection scatter and plane swatches.
//!
//! All numbers are written with three decimals so identical inputs give
//! identical bytes. Elements carry a `class` attribute (`background`,
//! `unit`, `marker`, `label`, `dot`, `swatch`) so they can be counted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::{lab_to_srgb, plane_color, ColorPlane, RgbColor};
use crate::projection::Embedding2D;
use crate::som::SomGrid;

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("expected {expected} {what}, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("overlay refers to unit {unit}, but the grid has {units} units")]
    UnitOutOfRange { unit: usize, units: usize },
    #[error("invalid render spec: {0}")]
    InvalidSpec(String),
    #[error("swatch needs at least 2 steps per side, got {u}x{v}")]
    TooFewSteps { u: usize, v: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitShape {
    Circle,
    Hexagon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerShape {
    Circle,
    Triangle,
    Rectangle,
}

const MARKER_CYCLE: [MarkerShape; 3] = [MarkerShape::Circle, MarkerShape::Triangle, MarkerShape::Rectangle];

mod hex_color {
    use super::RgbColor;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &RgbColor, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&c.to_hex())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RgbColor, D::Error> {
        let text = String::deserialize(d)?;
        RgbColor::from_hex(&text).map_err(serde::de::Error::custom)
    }
}

/// Geometry and styling of the rendered map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSpec {
    pub unit_shape: UnitShape,
    /// Gap between neighboring units as a fraction of the unit diameter.
    pub spacing_fraction: f64,
    /// Reference color exposed between units.
    #[serde(with = "hex_color")]
    pub background: RgbColor,
    pub unit_radius_px: f64,
    pub label_font_size_px: f64,
    /// Marker per class tag; unlisted tags take circle, triangle, rectangle
    /// in sorted tag order.
    #[serde(default)]
    pub marker_map: BTreeMap<String, MarkerShape>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            unit_shape: UnitShape::Circle,
            spacing_fraction: 0.1,
            background: RgbColor::WHITE,
            unit_radius_px: 20.0,
            label_font_size_px: 9.0,
            marker_map: BTreeMap::new(),
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), RenderError> {
        if !(0.0..0.5).contains(&self.spacing_fraction) {
            return Err(RenderError::InvalidSpec(format!(
                "spacing_fraction must lie in [0, 0.5), got {}",
                self.spacing_fraction
            )));
        }
        if !(self.unit_radius_px > 0.0 && self.unit_radius_px.is_finite()) {
            return Err(RenderError::InvalidSpec("unit_radius_px must be positive".into()));
        }
        if !(self.label_font_size_px > 0.0 && self.label_font_size_px.is_finite()) {
            return Err(RenderError::InvalidSpec("label_font_size_px must be positive".into()));
        }
        Ok(())
    }

    /// Center-to-center distance of lattice neighbors.
    pub fn step(&self) -> f64 {
        2.0 * self.unit_radius_px * (1.0 + self.spacing_fraction)
    }

    fn padding(&self) -> f64 {
        self.step() + self.label_font_size_px
    }
}

/// Per-unit labels and class markers drawn over the map.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub labels: BTreeMap<usize, Vec<String>>,
    /// Class tag of every data point attracted by the unit, in data order.
    pub markers: BTreeMap<usize, Vec<String>>,
}

impl Overlay {
    /// Builds the overlay from best-matching units and optional row
    /// labels / class tags.
    pub fn from_assignments(bmus: &[usize], labels: Option<&[String]>, classes: Option<&[String]>) -> Self {
        let mut overlay = Overlay::default();
        for (i, &unit) in bmus.iter().enumerate() {
            if let Some(l) = labels {
                overlay.labels.entry(unit).or_default().push(l[i].clone());
            }
            if let Some(c) = classes {
                overlay.markers.entry(unit).or_default().push(c[i].clone());
            }
        }
        overlay
    }

    /// Count of each class tag at `unit`.
    pub fn counts(&self, unit: usize) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for tag in self.markers.get(&unit).into_iter().flatten() {
            *out.entry(tag.as_str()).or_insert(0) += 1;
        }
        out
    }

    pub fn validate(&self, units: usize) -> Result<(), RenderError> {
        for &unit in self.labels.keys().chain(self.markers.keys()) {
            if unit >= units {
                return Err(RenderError::UnitOutOfRange { unit, units });
            }
        }
        Ok(())
    }

    fn marker_shapes(&self, spec: &RenderSpec) -> BTreeMap<String, MarkerShape> {
        let mut shapes = spec.marker_map.clone();
        let mut tags: Vec<&String> = self.markers.values().flatten().collect();
        tags.sort();
        tags.dedup();
        let mut next = 0;
        for tag in tags {
            if !shapes.contains_key(tag) {
                shapes.insert(tag.clone(), MARKER_CYCLE[next % MARKER_CYCLE.len()]);
                next += 1;
            }
        }
        shapes
    }
}

/// Pixel-space placement of the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub centers: Vec<[f64; 2]>,
    pub width: f64,
    pub height: f64,
    pub step: f64,
}

const ROW_HEIGHT: f64 = 0.866_025_403_784_438_6;

pub fn hex_layout(grid: &SomGrid, spec: &RenderSpec) -> Layout {
    lattice_layout(grid.rows(), grid.cols(), spec)
}

fn lattice_layout(rows: usize, cols: usize, spec: &RenderSpec) -> Layout {
    let step = spec.step();
    let pad = spec.padding();
    let offset = if rows > 1 { 0.5 * step } else { 0.0 };
    let width = 2.0 * pad + step * cols.saturating_sub(1) as f64 + offset;
    let height = 2.0 * pad + step * ROW_HEIGHT * rows.saturating_sub(1) as f64;
    let centers = (0..rows)
        .flat_map(|r| {
            (0..cols).map(move |c| {
                [
                    pad + step * (c as f64 + 0.5 * (r % 2) as f64),
                    pad + step * ROW_HEIGHT * r as f64,
                ]
            })
        })
        .collect();
    Layout {
        centers,
        width,
        height,
        step,
    }
}

/// Three-decimal formatting without negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open_svg(width: f64, height: f64, background: &RgbColor) -> String {
    let (w, h) = (num(width), num(height));
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        s,
        "<rect class=\"background\" x=\"0.000\" y=\"0.000\" width=\"{w}\" height=\"{h}\" fill=\"{}\"/>",
        background.to_hex()
    );
    s
}

fn points_attr(points: &[[f64; 2]]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", num(p[0]), num(p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Pointy-top hexagon with the given inradius; flat sides face the
/// horizontal and diagonal lattice neighbors.
fn hexagon(center: [f64; 2], inradius: f64) -> Vec<[f64; 2]> {
    let circumradius = inradius / ROW_HEIGHT;
    (0..6)
        .map(|k| {
            let angle = (-90.0 + 60.0 * k as f64).to_radians();
            [
                center[0] + circumradius * angle.cos(),
                center[1] + circumradius * angle.sin(),
            ]
        })
        .collect()
}

fn marker_element(shape: MarkerShape, c: [f64; 2], size: f64, stroke: &str) -> String {
    let style = format!("fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.000\"");
    match shape {
        MarkerShape::Circle => format!(
            "<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"{}\" {style}/>",
            num(c[0]),
            num(c[1]),
            num(size)
        ),
        MarkerShape::Triangle => {
            let pts = [
                [c[0], c[1] - size],
                [c[0] + size * ROW_HEIGHT, c[1] + 0.5 * size],
                [c[0] - size * ROW_HEIGHT, c[1] + 0.5 * size],
            ];
            format!("<polygon class=\"marker\" points=\"{}\" {style}/>", points_attr(&pts))
        }
        MarkerShape::Rectangle => {
            let half = size * std::f64::consts::FRAC_1_SQRT_2;
            format!(
                "<rect class=\"marker\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {style}/>",
                num(c[0] - half),
                num(c[1] - half),
                num(2.0 * half),
                num(2.0 * half)
            )
        }
    }
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Offsets of `n` markers inside a unit of radius `r`, and the marker size.
fn marker_spiral(n: usize, r: f64) -> (Vec<[f64; 2]>, f64) {
    let area = 0.6 * r;
    if n <= 1 {
        return (vec![[0.0, 0.0]], 0.3 * r);
    }
    let size = (0.3 * r).min(0.9 * area / (n as f64).sqrt());
    let offsets = (0..n)
        .map(|k| {
            let rho = area * ((k as f64 + 0.5) / n as f64).sqrt();
            let theta = k as f64 * GOLDEN_ANGLE;
            [rho * theta.cos(), rho * theta.sin()]
        })
        .collect();
    (offsets, size)
}

/// The colored lattice with overlay markers and labels.
pub fn render_som_svg(
    grid: &SomGrid,
    colors: &[RgbColor],
    overlay: &Overlay,
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.validate()?;
    let m = grid.len();
    if colors.len() != m {
        return Err(RenderError::LengthMismatch {
            what: "unit colors",
            expected: m,
            found: colors.len(),
        });
    }
    overlay.validate(m)?;
    let layout = hex_layout(grid, spec);
    let r = spec.unit_radius_px;
    let mut s = open_svg(layout.width, layout.height, &spec.background);

    s.push_str("<g class=\"units\">\n");
    for (c, color) in layout.centers.iter().zip(colors) {
        match spec.unit_shape {
            UnitShape::Circle => {
                let _ = writeln!(
                    s,
                    "<circle class=\"unit\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
                    num(c[0]),
                    num(c[1]),
                    num(r),
                    color.to_hex()
                );
            }
            UnitShape::Hexagon => {
                let _ = writeln!(
                    s,
                    "<polygon class=\"unit\" points=\"{}\" fill=\"{}\"/>",
                    points_attr(&hexagon(*c, r)),
                    color.to_hex()
                );
            }
        }
    }
    s.push_str("</g>\n");

    if !overlay.markers.is_empty() {
        let shapes = overlay.marker_shapes(spec);
        s.push_str("<g class=\"markers\">\n");
        for (&unit, tags) in &overlay.markers {
            let mut ordered: Vec<&String> = tags.iter().collect();
            ordered.sort();
            let (offsets, size) = marker_spiral(ordered.len(), r);
            let stroke = if colors[unit].luminance() > 0.18 {
                "#000000"
            } else {
                "#ffffff"
            };
            let center = layout.centers[unit];
            for (tag, off) in ordered.iter().zip(&offsets) {
                let at = [center[0] + off[0], center[1] + off[1]];
                s.push_str(&marker_element(shapes[*tag], at, size, stroke));
                s.push('\n');
            }
        }
        s.push_str("</g>\n");
    }

    if !overlay.labels.is_empty() {
        let _ = writeln!(
            s,
            "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\" fill=\"#000000\">",
            num(spec.label_font_size_px)
        );
        for (&unit, labels) in &overlay.labels {
            let c = layout.centers[unit];
            let _ = writeln!(
                s,
                "<text class=\"label\" x=\"{}\" y=\"{}\">{}</text>",
                num(c[0]),
                num(c[1] - r - 2.0),
                escape(&labels.join(", "))
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Side of the square scatter canvas, in unit radii.
const SCATTER_SIZE_RADII: f64 = 20.0;

/// One dot per projected unit, with equal scaling on both axes and a 5%
/// margin. A zero-range axis is given a range of one.
pub fn render_scatter_svg(
    embedding: &Embedding2D,
    colors: &[RgbColor],
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.validate()?;
    if colors.len() != embedding.len() {
        return Err(RenderError::LengthMismatch {
            what: "point colors",
            expected: embedding.len(),
            found: colors.len(),
        });
    }
    let size = SCATTER_SIZE_RADII * spec.unit_radius_px;
    let margin = 0.05 * size;
    let inner = size - 2.0 * margin;
    let dot = 0.3 * spec.unit_radius_px;

    let bounds = |d: usize| {
        let lo = embedding.points.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = embedding.points.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (x0, x1) = bounds(0);
    let (y0, y1) = bounds(1);
    let range = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    // Keep dots fully inside the margin box.
    let usable = inner - 2.0 * dot;
    let scale = (usable / range(x0, x1)).min(usable / range(y0, y1));
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);

    let mut s = open_svg(size, size, &spec.background);
    s.push_str("<g class=\"dots\">\n");
    for (p, color) in embedding.points.iter().zip(colors) {
        let x = size / 2.0 + (p[0] - cx) * scale;
        let y = size / 2.0 - (p[1] - cy) * scale;
        let _ = writeln!(
            s,
            "<circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"#404040\" stroke-width=\"0.500\"/>",
            num(x),
            num(y),
            num(dot),
            color.to_hex()
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// `steps_u x steps_v` samples of a plane; hue runs left to right and
/// lightness bottom to top.
pub fn render_plane_swatch_svg(
    plane: &ColorPlane,
    steps_u: usize,
    steps_v: usize,
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.validate()?;
    if steps_u < 2 || steps_v < 2 {
        return Err(RenderError::TooFewSteps { u: steps_u, v: steps_v });
    }
    let side = 2.0 * spec.unit_radius_px;
    let gap = spec.spacing_fraction * side;
    let pad = gap.max(0.25 * side);
    let width = 2.0 * pad + steps_u as f64 * side + (steps_u - 1) as f64 * gap;
    let height = 2.0 * pad + steps_v as f64 * side + (steps_v - 1) as f64 * gap;

    let mut s = open_svg(width, height, &spec.background);
    let _ = writeln!(s, "<g class=\"swatches\" data-plane=\"{}\">", escape(&plane.name));
    for row in 0..steps_v {
        let v = 1.0 - row as f64 / (steps_v - 1) as f64;
        for col in 0..steps_u {
            let u = col as f64 / (steps_u - 1) as f64;
            let lab = plane_color(plane, u, v).expect("grid samples lie in the unit square");
            let _ = writeln!(
                s,
                "<rect class=\"swatch\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                num(pad + col as f64 * (side + gap)),
                num(pad + row as f64 * (side + gap)),
                num(side),
                num(side),
                lab_to_srgb(&lab).to_hex()
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
