//! Full pipeline on the bundled iris data: 6x7 map, Sammon's mapping,
//! cyan-gray-red plane. Writes every artifact to the given directory.
//!
//! cargo run --example iris_pipeline -- out/iris

use std::path::{Path, PathBuf};

use somchroma::pipeline::{run_pipeline, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "out/iris".into());
    let mut config = PipelineConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/iris.json"))?;
    config.input.path = Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"));
    config.output.dir = out;

    let summary = run_pipeline(&config)?;
    println!("sigma_final        {:?}", summary.sigma_final);
    println!("quantization error {:?}", summary.quantization_error);
    println!("goodness           {:?}", summary.goodness);
    println!("final stress       {:?}", summary.final_stress);
    for path in summary.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
