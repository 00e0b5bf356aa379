//! Bundled and synthetic data sets for examples and tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{read_csv, CsvOptions, DataMatrix};

const IRIS_CSV: &str = include_str!("../data/iris.csv");

/// Fisher's iris measurements: 150 rows, 4 features, `species` as class.
pub fn iris() -> DataMatrix {
    let options = CsvOptions {
        has_header: true,
        label_column: None,
        class_column: Some("species".into()),
    };
    read_csv(IRIS_CSV.as_bytes(), &options).expect("bundled iris data parses")
}

/// Isotropic Gaussian clusters around `centers`, `sizes[i]` points each,
/// tagged `c0`, `c1`, ... in cluster order.
pub fn gaussian_blobs(centers: &[Vec<f64>], sizes: &[usize], std_dev: f64, seed: u64) -> DataMatrix {
    assert_eq!(centers.len(), sizes.len(), "one size per center");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, std_dev).expect("positive standard deviation");
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for (k, (center, &size)) in centers.iter().zip(sizes).enumerate() {
        for _ in 0..size {
            rows.push(center.iter().map(|c| c + noise.sample(&mut rng)).collect());
            classes.push(format!("c{k}"));
        }
    }
    DataMatrix::from_unnamed_rows(rows)
        .and_then(|d| d.with_class_labels(classes))
        .expect("generated data is well formed")
}

/// Three well-separated 4-dimensional clusters of 40 points.
pub fn three_blobs(seed: u64) -> DataMatrix {
    let centers = vec![
        vec![0.0, 0.0, 0.0, 0.0],
        vec![6.0, 0.0, 1.0, 0.0],
        vec![0.0, 6.0, 0.0, 1.0],
    ];
    gaussian_blobs(&centers, &[40, 40, 40], 1.0, seed)
}

/// 207 rows of 15 indicators in five uneven groups, with row labels
/// `r001`...`r207`. Stands in for a country-by-indicator table.
pub fn indicator_table(seed: u64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let spread = Normal::new(0.0, 3.0).unwrap();
    let centers: Vec<Vec<f64>> = (0..5)
        .map(|_| (0..15).map(|_| spread.sample(&mut rng)).collect())
        .collect();
    let data = gaussian_blobs(&centers, &[60, 50, 45, 32, 20], 1.2, seed);
    let labels = (1..=data.n_rows()).map(|i| format!("r{i:03}")).collect();
    data.with_row_labels(labels).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iris_shape() {
        let d = iris();
        assert_eq!((d.n_rows(), d.n_cols()), (150, 4));
        let classes = d.class_labels().unwrap();
        for species in ["setosa", "versicolor", "virginica"] {
            assert_eq!(classes.iter().filter(|c| *c == species).count(), 50);
        }
    }

    #[test]
    fn synthetic_shapes_are_deterministic() {
        let t = indicator_table(1);
        assert_eq!((t.n_rows(), t.n_cols()), (207, 15));
        assert_eq!(t, indicator_table(1));
        assert_ne!(t, indicator_table(2));
        assert_eq!(three_blobs(0).n_rows(), 120);
    }
}
