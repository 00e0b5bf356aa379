//! Compares metric MDS, Sammon's mapping and local MDS on the reference
//! vectors of an iris map.

use somchroma::dataset::standardize;
use somchroma::projection::{pairwise_distances, project, sammon_stress, ProjectionConfig, ProjectionMethod};
use somchroma::samples;
use somchroma::som::{train, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (data, _) = standardize(&samples::iris())?;
    let grid = train(&data, 6, 7, &TrainConfig::for_grid(6, 7))?;
    let vectors = grid.reference_vectors();
    let dx = pairwise_distances(&vectors);

    for method in [
        ProjectionMethod::MetricMds,
        ProjectionMethod::Sammon,
        ProjectionMethod::Lmds,
    ] {
        let p = project(&vectors, &ProjectionConfig::new(method))?;
        println!(
            "{method:<10} stress {:>12.6}  iterations {:>4}  sammon stress of result {:.6}",
            p.final_stress,
            p.iterations,
            sammon_stress(&dx, &p.embedding)?
        );
        if method == ProjectionMethod::Lmds {
            println!(
                "           k = {:?}, t = {:.3e}",
                p.resolved.k_neighbors,
                p.resolved.repulsion_t.unwrap()
            );
        }
    }
    Ok(())
}
