//! Cluster coloring for self-organizing maps.
//!
//! The crate trains a batch SOM on a hexagonal lattice, projects its
//! reference vectors to the plane with metric MDS, Sammon's mapping or local
//! MDS, and colors every unit from a two-dimensional plane in CIELAB: the
//! first projected axis drives hue, the second lightness. Results are
//! written as SVG.
//!
//! ```no_run
//! use somchroma::{colorspace, projection, samples, som};
//!
//! let (data, _) = somchroma::dataset::standardize(&samples::iris()).unwrap();
//! let config = som::TrainConfig::for_grid(6, 7);
//! let selection = som::select_sigma(&data, 6, 7, &config).unwrap();
//! let method = projection::ProjectionConfig::new(projection::ProjectionMethod::Sammon);
//! let projected = projection::project(&selection.grid.reference_vectors(), &method).unwrap();
//! let unit_square = projection::normalize_components(&projection::align_axes(&projected.embedding));
//! let plane = colorspace::builtin_plane(colorspace::CYAN_GRAY_RED).unwrap();
//! let colors = colorspace::colorize(&unit_square, &plane).unwrap();
//! assert_eq!(colors.len(), 42);
//! ```

pub mod colorspace;
pub mod dataset;
pub mod pipeline;
pub mod projection;
pub mod render;
pub mod samples;
pub mod som;

pub use colorspace::{ColorPlane, LabColor, RgbColor};
pub use dataset::DataMatrix;
pub use projection::{Embedding2D, ProjectionConfig, ProjectionMethod};
pub use render::{Overlay, RenderSpec};
pub use som::{SomGrid, TrainConfig};
