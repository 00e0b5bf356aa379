//! Samples the two builtin planes, prints their anchor colors and gamut
//! status, and writes a swatch for each.
//!
//! cargo run --example color_planes -- out/planes

use std::fs;
use std::path::PathBuf;

use somchroma::colorspace::{builtin_planes, lab_to_srgb, plane_color, GAMUT_RESOLUTION, GAMUT_TOLERANCE};
use somchroma::render::{render_plane_swatch_svg, RenderSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "out/planes".into());
    fs::create_dir_all(&out)?;
    for plane in builtin_planes() {
        println!("{}", plane.name);
        for (u, v) in [(0.0, 0.5), (0.5, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)] {
            let lab = plane_color(&plane, u, v)?;
            println!("  u={u:.1} v={v:.1}  {lab}  {}", lab_to_srgb(&lab).to_hex());
        }
        match plane.gamut_sweep(GAMUT_RESOLUTION, GAMUT_TOLERANCE) {
            Ok(()) => println!("  inside the sRGB gamut"),
            Err(e) => println!("  {e}"),
        }
        let path = out.join(format!("{}.svg", plane.name));
        fs::write(&path, render_plane_swatch_svg(&plane, 11, 5, &RenderSpec::default())?)?;
        println!("  wrote {}", path.display());
    }
    Ok(())
}
