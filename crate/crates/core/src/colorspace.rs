//! Two-dimensional color planes inside CIELAB and their sRGB display.
//!
//! A plane maps the unit square to Lab: `v` drives lightness linearly over
//! `L_range`, `u` drives `a*` linearly over `a_range`, and `b*` is either a
//! constant or tied to `a*`. Display conversion goes Lab -> XYZ (D65) ->
//! linear sRGB -> gamma-encoded sRGB, with the RGB/XYZ matrices derived from
//! the sRGB primaries and the D65 chromaticity so that `L* = 100` maps to
//! white exactly.

use std::fmt;
use std::sync::LazyLock;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projection::Embedding2D;

#[derive(Debug, Error, PartialEq)]
pub enum ColorError {
    #[error("plane coordinate ({u}, {v}) is outside the unit square")]
    OutsideUnitSquare { u: f64, v: f64 },
    #[error("plane '{name}' leaves the sRGB gamut at (u={u:.2}, v={v:.2}): {lab} -> channel {channel:.4}")]
    OutOfGamut {
        name: String,
        u: f64,
        v: f64,
        lab: LabColor,
        channel: f64,
    },
    #[error("invalid plane '{name}': {reason}")]
    InvalidPlane { name: String, reason: String },
    #[error("unknown plane '{name}'; builtin planes are: {available}")]
    UnknownPlane { name: String, available: String },
    #[error("invalid color '{0}', expected #RRGGBB")]
    InvalidHex(String),
}

/// CIE 1976 L*a*b* color.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    #[serde(rename = "L")]
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }

    pub fn chroma(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Hue angle `atan2(b*, a*)` in degrees, in `(-180, 180]`.
    pub fn hue_degrees(&self) -> f64 {
        self.b.atan2(self.a).to_degrees()
    }

    /// CIE76 color difference.
    pub fn delta_e(&self, other: &LabColor) -> f64 {
        ((self.l - other.l).powi(2) + (self.a - other.a).powi(2) + (self.b - other.b).powi(2)).sqrt()
    }
}

impl fmt::Display for LabColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lab({:.2}, {:.2}, {:.2})", self.l, self.a, self.b)
    }
}

/// Gamma-encoded sRGB with channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl RgbColor {
    pub const WHITE: RgbColor = RgbColor { r: 1.0, g: 1.0, b: 1.0 };
    pub const BLACK: RgbColor = RgbColor { r: 0.0, g: 0.0, b: 0.0 };

    pub fn channels(&self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    /// 8-bit channels, rounding half up.
    pub fn to_bytes(&self) -> [u8; 3] {
        self.channels()
            .map(|c| (c.clamp(0.0, 1.0) * 255.0 + 0.5).floor().min(255.0) as u8)
    }

    /// `#rrggbb`.
    pub fn to_hex(&self) -> String {
        let [r, g, b] = self.to_bytes();
        format!("#{r:02x}{g:02x}{b:02x}")
    }

    pub fn from_hex(s: &str) -> Result<Self, ColorError> {
        let digits = s.strip_prefix('#').unwrap_or(s);
        if digits.len() != 6 || !digits.is_ascii() {
            return Err(ColorError::InvalidHex(s.to_string()));
        }
        let byte =
            |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).map_err(|_| ColorError::InvalidHex(s.to_string()));
        Ok(Self {
            r: byte(0)? as f64 / 255.0,
            g: byte(2)? as f64 / 255.0,
            b: byte(4)? as f64 / 255.0,
        })
    }

    /// WCAG relative luminance.
    pub fn luminance(&self) -> f64 {
        let [r, g, b] = self.channels().map(decode_gamma);
        0.2126 * r + 0.7152 * g + 0.0722 * b
    }
}

struct Conversion {
    white: Vector3<f64>,
    rgb_to_xyz: Matrix3<f64>,
    xyz_to_rgb: Matrix3<f64>,
}

static SRGB: LazyLock<Conversion> = LazyLock::new(|| {
    let xyz = |x: f64, y: f64| Vector3::new(x / y, 1.0, (1.0 - x - y) / y);
    let white = xyz(0.3127, 0.3290);
    let primaries = Matrix3::from_columns(&[xyz(0.64, 0.33), xyz(0.30, 0.60), xyz(0.15, 0.06)]);
    let scale = primaries.try_inverse().expect("sRGB primaries are independent") * white;
    let rgb_to_xyz = primaries * Matrix3::from_diagonal(&scale);
    let xyz_to_rgb = rgb_to_xyz.try_inverse().expect("invertible");
    Conversion {
        white,
        rgb_to_xyz,
        xyz_to_rgb,
    }
});

const EPSILON_LAB: f64 = 6.0 / 29.0;

fn lab_f_inv(t: f64) -> f64 {
    if t > EPSILON_LAB {
        t * t * t
    } else {
        3.0 * EPSILON_LAB * EPSILON_LAB * (t - 4.0 / 29.0)
    }
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON_LAB.powi(3) {
        t.cbrt()
    } else {
        t / (3.0 * EPSILON_LAB * EPSILON_LAB) + 4.0 / 29.0
    }
}

/// Gamma encoding; the linear segment extends to negative values.
fn encode_gamma(c: f64) -> f64 {
    if c <= 0.003_130_8 {
        12.92 * c
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

fn decode_gamma(c: f64) -> f64 {
    if c <= 0.040_45 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

pub fn lab_to_xyz(c: &LabColor) -> [f64; 3] {
    let w = SRGB.white;
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    [w[0] * lab_f_inv(fx), w[1] * lab_f_inv(fy), w[2] * lab_f_inv(fz)]
}

pub fn xyz_to_lab(xyz: [f64; 3]) -> LabColor {
    let w = SRGB.white;
    let fx = lab_f(xyz[0] / w[0]);
    let fy = lab_f(xyz[1] / w[1]);
    let fz = lab_f(xyz[2] / w[2]);
    LabColor::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Gamma-encoded sRGB channels before clamping; may leave `[0, 1]`.
pub fn lab_to_srgb_unclamped(c: &LabColor) -> [f64; 3] {
    let linear = SRGB.xyz_to_rgb * Vector3::from(lab_to_xyz(c));
    [
        encode_gamma(linear[0]),
        encode_gamma(linear[1]),
        encode_gamma(linear[2]),
    ]
}

/// Display color of `c`, channels clamped to `[0, 1]`.
pub fn lab_to_srgb(c: &LabColor) -> RgbColor {
    let [r, g, b] = lab_to_srgb_unclamped(c).map(|v| v.clamp(0.0, 1.0));
    RgbColor { r, g, b }
}

pub fn srgb_to_lab(c: &RgbColor) -> LabColor {
    let linear = Vector3::new(decode_gamma(c.r), decode_gamma(c.g), decode_gamma(c.b));
    let xyz = SRGB.rgb_to_xyz * linear;
    xyz_to_lab([xyz[0], xyz[1], xyz[2]])
}

/// Whether every unclamped sRGB channel lies in `[-tolerance, 1 + tolerance]`.
pub fn in_gamut(c: &LabColor, tolerance: f64) -> bool {
    lab_to_srgb_unclamped(c)
        .iter()
        .all(|&v| v >= -tolerance && v <= 1.0 + tolerance)
}

/// How `b*` follows from `a*` on a plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "BRuleRepr", try_from = "BRuleRepr")]
pub enum BRule {
    Constant(f64),
    /// `b* = a*`
    EqualsA,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BRuleRepr {
    Constant(f64),
    Rule(String),
}

impl From<BRule> for BRuleRepr {
    fn from(rule: BRule) -> Self {
        match rule {
            BRule::Constant(b) => BRuleRepr::Constant(b),
            BRule::EqualsA => BRuleRepr::Rule("b = a".into()),
        }
    }
}

impl TryFrom<BRuleRepr> for BRule {
    type Error = String;

    fn try_from(repr: BRuleRepr) -> Result<Self, Self::Error> {
        match repr {
            BRuleRepr::Constant(b) => Ok(BRule::Constant(b)),
            BRuleRepr::Rule(s) => match s.replace(' ', "").as_str() {
                "b=a" | "a" | "equals_a" => Ok(BRule::EqualsA),
                _ => Err(format!("unknown b_rule '{s}', expected a number or \"b = a\"")),
            },
        }
    }
}

/// Affine plane in Lab parameterized over the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorPlane {
    pub name: String,
    #[serde(rename = "L_range")]
    pub l_range: [f64; 2],
    pub a_range: [f64; 2],
    pub b_rule: BRule,
}

pub const GREEN_YELLOW_RED: &str = "green-yellow-red";
pub const CYAN_GRAY_RED: &str = "cyan-gray-red";

/// Channel slack allowed by the gamut sweep.
pub const GAMUT_TOLERANCE: f64 = 0.002;
/// Samples per side in the gamut sweep.
pub const GAMUT_RESOLUTION: usize = 101;

/// The two stock planes.
pub fn builtin_planes() -> Vec<ColorPlane> {
    vec![
        ColorPlane {
            name: GREEN_YELLOW_RED.into(),
            l_range: [20.0, 80.0],
            a_range: [-60.0, 60.0],
            b_rule: BRule::Constant(40.0),
        },
        ColorPlane {
            name: CYAN_GRAY_RED.into(),
            l_range: [20.0, 80.0],
            a_range: [-45.0, 45.0],
            b_rule: BRule::EqualsA,
        },
    ]
}

pub fn builtin_plane(name: &str) -> Result<ColorPlane, ColorError> {
    let planes = builtin_planes();
    let available = planes.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", ");
    planes
        .into_iter()
        .find(|p| p.name == name)
        .ok_or(ColorError::UnknownPlane {
            name: name.to_string(),
            available,
        })
}

fn check_unit(u: f64, v: f64) -> Result<(), ColorError> {
    if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ColorError::OutsideUnitSquare { u, v })
    }
}

impl ColorPlane {
    fn lab_at(&self, u: f64, v: f64) -> LabColor {
        let l = self.l_range[0] + v * (self.l_range[1] - self.l_range[0]);
        let a = self.a_range[0] + u * (self.a_range[1] - self.a_range[0]);
        let b = match self.b_rule {
            BRule::Constant(b) => b,
            BRule::EqualsA => a,
        };
        LabColor::new(l, a, b)
    }

    /// Checks the ranges; the gamut sweep is separate.
    pub fn check_ranges(&self) -> Result<(), ColorError> {
        let invalid = |reason: &str| ColorError::InvalidPlane {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        let [lo, hi] = self.l_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 100.0) {
            return Err(invalid("L_range must satisfy 0 <= L_min < L_max <= 100"));
        }
        if !self.a_range.iter().all(|a| a.is_finite()) {
            return Err(invalid("a_range must be finite"));
        }
        if let BRule::Constant(b) = self.b_rule {
            if !b.is_finite() {
                return Err(invalid("b must be finite"));
            }
        }
        Ok(())
    }

    /// Samples the plane on a `resolution x resolution` grid and reports the
    /// sample whose sRGB channel strays furthest beyond `[-tol, 1 + tol]`.
    pub fn gamut_sweep(&self, resolution: usize, tolerance: f64) -> Result<(), ColorError> {
        let steps = resolution.max(2) - 1;
        let mut worst: Option<(f64, f64, f64, LabColor, f64)> = None;
        for i in 0..=steps {
            for k in 0..=steps {
                let (u, v) = (i as f64 / steps as f64, k as f64 / steps as f64);
                let lab = self.lab_at(u, v);
                for ch in lab_to_srgb_unclamped(&lab) {
                    let excess = (-tolerance - ch).max(ch - 1.0 - tolerance);
                    if excess > 0.0 && worst.is_none_or(|w| excess > w.0) {
                        worst = Some((excess, u, v, lab, ch));
                    }
                }
            }
        }
        match worst {
            None => Ok(()),
            Some((_, u, v, lab, channel)) => Err(ColorError::OutOfGamut {
                name: self.name.clone(),
                u,
                v,
                lab,
                channel,
            }),
        }
    }

    /// Range checks plus the default gamut sweep; required for user planes.
    pub fn validated(self) -> Result<Self, ColorError> {
        self.check_ranges()?;
        self.gamut_sweep(GAMUT_RESOLUTION, GAMUT_TOLERANCE)?;
        Ok(self)
    }
}

/// Lab color at `(u, v)`: `u` moves along the hue line, `v` along lightness.
pub fn plane_color(plane: &ColorPlane, u: f64, v: f64) -> Result<LabColor, ColorError> {
    check_unit(u, v)?;
    Ok(plane.lab_at(u, v))
}

/// Colors each normalized embedding point; the first coordinate drives hue.
pub fn colorize(embedding: &Embedding2D, plane: &ColorPlane) -> Result<Vec<RgbColor>, ColorError> {
    colorize_axes(embedding, plane, false)
}

/// [`colorize`] with the option to drive lightness by the first coordinate.
pub fn colorize_axes(
    embedding: &Embedding2D,
    plane: &ColorPlane,
    swap_axes: bool,
) -> Result<Vec<RgbColor>, ColorError> {
    embedding
        .points
        .iter()
        .map(|p| {
            let (u, v) = if swap_axes { (p[1], p[0]) } else { (p[0], p[1]) };
            plane_color(plane, u, v).map(|lab| lab_to_srgb(&lab))
        })
        .collect()
}
