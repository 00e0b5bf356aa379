//! Trains maps on three Gaussian clusters and picks the final neighborhood
//! width by goodness.

use somchroma::dataset::standardize;
use somchroma::samples;
use somchroma::som::{assign, select_sigma, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (data, _) = standardize(&samples::three_blobs(42))?;
    let (rows, cols) = (6, 7);
    let config = TrainConfig::for_grid(rows, cols);
    let selection = select_sigma(&data, rows, cols, &config)?;

    for score in &selection.scores {
        let mark = if score.sigma_final == selection.sigma_final {
            "*"
        } else {
            " "
        };
        println!(
            "{mark} sigma_final {:>4}  goodness {:.4}",
            score.sigma_final, score.goodness
        );
    }
    let qe = &selection.log.quantization_errors;
    println!(
        "quantization error: epoch 1 {:.4}, epoch {} {:.4}",
        qe[0],
        qe.len(),
        qe[qe.len() - 1]
    );

    // Unit occupancy per cluster.
    let bmus = assign(&selection.grid, &data)?;
    let classes = data.class_labels().unwrap();
    for tag in ["c0", "c1", "c2"] {
        let mut units: Vec<usize> = bmus
            .iter()
            .zip(classes)
            .filter(|(_, c)| *c == tag)
            .map(|(u, _)| *u)
            .collect();
        units.sort();
        units.dedup();
        println!("{tag}: {} units", units.len());
    }
    Ok(())
}
