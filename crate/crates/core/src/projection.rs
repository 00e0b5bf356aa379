//! Distance-preserving projection of reference vectors to the plane.
//!
//! Three stress functions are available, all over unordered pairs `j < h`
//! with `dx` the input-space and `dy` the embedding distance:
//!
//! * metric MDS: `sum (dx - dy)^2`
//! * Sammon: `(1 / sum dx) * sum (dx - dy)^2 / dx`
//! * local MDS: `sum_{pairs in N} (dx - dy)^2 - t * sum_{pairs not in N} dy`,
//!   where `N` is a symmetrized k-nearest-neighbor pair set and `t >= 0`
//!   weights the repulsion between non-neighbors.
//!
//! [`project`] starts from classical scaling and runs full-batch gradient
//! descent with a step that halves on rejection and grows by 1.2 on success.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProjectionError {
    #[error("points {0} and {1} coincide in input space; Sammon stress is undefined")]
    ZeroDistance(usize, usize),
    #[error("stress became non-finite at iteration {0}")]
    NonFiniteStress(usize),
    #[error("k = {k} is out of range for {m} points (need 1 <= k < {m})")]
    NeighborsOutOfRange { k: usize, m: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Symmetric `M x M` matrix of input-space distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a full row-major matrix, checking symmetry, zero diagonal,
    /// nonnegativity and finiteness.
    pub fn from_entries(size: usize, entries: Vec<f64>) -> Result<Self, ProjectionError> {
        if entries.len() != size * size {
            return Err(ProjectionError::SizeMismatch(format!(
                "{} entries for size {size}",
                entries.len()
            )));
        }
        for j in 0..size {
            if entries[j * size + j] != 0.0 {
                return Err(ProjectionError::Invalid("non-zero diagonal".into()));
            }
            for h in 0..size {
                let v = entries[j * size + h];
                if !v.is_finite() || v < 0.0 || v != entries[h * size + j] {
                    return Err(ProjectionError::Invalid(format!("bad entry at ({j}, {h})")));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, h: usize) -> f64 {
        self.entries[j * self.size + h]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.entries[j * self.size..(j + 1) * self.size]
    }

    /// Mean over unordered pairs; zero when there are none.
    pub fn mean_pair_distance(&self) -> f64 {
        let m = self.size;
        if m < 2 {
            return 0.0;
        }
        let mut total = 0.0;
        for j in 0..m {
            for h in j + 1..m {
                total += self.get(j, h);
            }
        }
        total / (m * (m - 1) / 2) as f64
    }
}

/// Euclidean distances between all rows.
pub fn pairwise_distances<R: AsRef<[f64]>>(vectors: &[R]) -> DistanceMatrix {
    let m = vectors.len();
    let mut entries = vec![0.0; m * m];
    for j in 0..m {
        for h in j + 1..m {
            let d = vectors[j]
                .as_ref()
                .iter()
                .zip(vectors[h].as_ref())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            entries[j * m + h] = d;
            entries[h * m + j] = d;
        }
    }
    DistanceMatrix { size: m, entries }
}

/// Points in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding2D {
    pub points: Vec<[f64; 2]>,
}

impl Embedding2D {
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.points.iter().all(|p| p[0].is_finite() && p[1].is_finite())
    }

    pub fn distance(&self, j: usize, h: usize) -> f64 {
        let (a, b) = (self.points[j], self.points[h]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }
}

/// Unordered index pairs stored as `(low, high)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet(BTreeSet<(usize, usize)>);

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every unordered pair of `m` points.
    pub fn all(m: usize) -> Self {
        let mut s = Self::new();
        for j in 0..m {
            for h in j + 1..m {
                s.insert(j, h);
            }
        }
        s
    }

    pub fn insert(&mut self, j: usize, h: usize) -> bool {
        self.0.insert((j.min(h), j.max(h)))
    }

    pub fn contains(&self, j: usize, h: usize) -> bool {
        self.0.contains(&(j.min(h), j.max(h)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }
}

fn check_sizes(dx: &DistanceMatrix, y: &Embedding2D) {
    assert_eq!(dx.size(), y.len(), "distance matrix and embedding sizes differ");
}

/// Metric MDS stress over unordered pairs.
pub fn mds_stress(dx: &DistanceMatrix, y: &Embedding2D) -> f64 {
    check_sizes(dx, y);
    let m = y.len();
    let mut s = 0.0;
    for j in 0..m {
        for h in j + 1..m {
            let r = dx.get(j, h) - y.distance(j, h);
            s += r * r;
        }
    }
    s
}

/// Sum of input distances over unordered pairs, or the first coincident pair.
fn sammon_normalizer(dx: &DistanceMatrix) -> Result<f64, ProjectionError> {
    let m = dx.size();
    let mut c = 0.0;
    for j in 0..m {
        for h in j + 1..m {
            let d = dx.get(j, h);
            if d <= 0.0 {
                return Err(ProjectionError::ZeroDistance(j, h));
            }
            c += d;
        }
    }
    Ok(c)
}

/// Sammon stress. Fails on any coincident pair of input points.
pub fn sammon_stress(dx: &DistanceMatrix, y: &Embedding2D) -> Result<f64, ProjectionError> {
    check_sizes(dx, y);
    let c = sammon_normalizer(dx)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    let m = y.len();
    let mut s = 0.0;
    for j in 0..m {
        for h in j + 1..m {
            let d = dx.get(j, h);
            let r = d - y.distance(j, h);
            s += r * r / d;
        }
    }
    Ok(s / c)
}

/// Local MDS stress with repulsion weight `t` on non-neighbor pairs.
pub fn lmds_stress(dx: &DistanceMatrix, y: &Embedding2D, neighbors: &PairSet, t: f64) -> f64 {
    check_sizes(dx, y);
    let m = y.len();
    let mut attraction = 0.0;
    let mut repulsion = 0.0;
    for j in 0..m {
        for h in j + 1..m {
            let dy = y.distance(j, h);
            if neighbors.contains(j, h) {
                let r = dx.get(j, h) - dy;
                attraction += r * r;
            } else {
                repulsion += dy;
            }
        }
    }
    attraction - t * repulsion
}

/// Accumulates `coef * (y_j - y_h) / dy` into `j` and its negation into `h`.
fn push_pair(grad: &mut [[f64; 2]], y: &Embedding2D, j: usize, h: usize, coef: f64) {
    let dy = y.distance(j, h);
    if dy == 0.0 {
        return;
    }
    let (a, b) = (y.points[j], y.points[h]);
    let gx = coef * (a[0] - b[0]) / dy;
    let gy = coef * (a[1] - b[1]) / dy;
    grad[j][0] += gx;
    grad[j][1] += gy;
    grad[h][0] -= gx;
    grad[h][1] -= gy;
}

/// Gradient of [`mds_stress`] with respect to every embedded point.
pub fn mds_gradient(dx: &DistanceMatrix, y: &Embedding2D) -> Vec<[f64; 2]> {
    check_sizes(dx, y);
    let m = y.len();
    let mut g = vec![[0.0; 2]; m];
    for j in 0..m {
        for h in j + 1..m {
            let coef = -2.0 * (dx.get(j, h) - y.distance(j, h));
            push_pair(&mut g, y, j, h, coef);
        }
    }
    g
}

pub fn sammon_gradient(dx: &DistanceMatrix, y: &Embedding2D) -> Result<Vec<[f64; 2]>, ProjectionError> {
    check_sizes(dx, y);
    let c = sammon_normalizer(dx)?;
    let m = y.len();
    let mut g = vec![[0.0; 2]; m];
    if c == 0.0 {
        return Ok(g);
    }
    for j in 0..m {
        for h in j + 1..m {
            let d = dx.get(j, h);
            let coef = -2.0 * (d - y.distance(j, h)) / (d * c);
            push_pair(&mut g, y, j, h, coef);
        }
    }
    Ok(g)
}

pub fn lmds_gradient(dx: &DistanceMatrix, y: &Embedding2D, neighbors: &PairSet, t: f64) -> Vec<[f64; 2]> {
    check_sizes(dx, y);
    let m = y.len();
    let mut g = vec![[0.0; 2]; m];
    for j in 0..m {
        for h in j + 1..m {
            let coef = if neighbors.contains(j, h) {
                -2.0 * (dx.get(j, h) - y.distance(j, h))
            } else {
                -t
            };
            push_pair(&mut g, y, j, h, coef);
        }
    }
    g
}

/// Symmetrized k-nearest-neighbor pairs: `(j, h)` is kept when either point
/// is among the other's `k` nearest. Distance ties go to the lower index.
pub fn knn_pairs(dx: &DistanceMatrix, k: usize) -> Result<PairSet, ProjectionError> {
    let m = dx.size();
    if k == 0 || k >= m {
        return Err(ProjectionError::NeighborsOutOfRange { k, m });
    }
    let mut pairs = PairSet::new();
    for j in 0..m {
        let mut others: Vec<usize> = (0..m).filter(|&h| h != j).collect();
        others.sort_by(|&a, &b| dx.get(j, a).total_cmp(&dx.get(j, b)).then(a.cmp(&b)));
        for &h in &others[..k] {
            pairs.insert(j, h);
        }
    }
    Ok(pairs)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Adds the shortest linking pairs until the pair graph is connected.
///
/// Returns the number of pairs added.
pub fn connect_components(dx: &DistanceMatrix, pairs: &mut PairSet) -> usize {
    let m = dx.size();
    let mut parent: Vec<usize> = (0..m).collect();
    for (j, h) in pairs.iter().collect::<Vec<_>>() {
        let (a, b) = (find(&mut parent, j), find(&mut parent, h));
        parent[a.max(b)] = a.min(b);
    }
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for j in 0..m {
        for h in j + 1..m {
            candidates.push((j, h));
        }
    }
    candidates.sort_by(|&(a, b), &(c, d)| dx.get(a, b).total_cmp(&dx.get(c, d)).then((a, b).cmp(&(c, d))));
    let mut added = 0;
    for (j, h) in candidates {
        let (a, b) = (find(&mut parent, j), find(&mut parent, h));
        if a != b {
            parent[a.max(b)] = a.min(b);
            pairs.insert(j, h);
            added += 1;
        }
    }
    added
}

fn canonical_sign(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = 0.0f64;
    for x in &v {
        if x.abs() > best.abs() {
            best = *x;
        }
    }
    if best < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Torgerson scaling: top two eigenpairs of the double-centered squared
/// distances. Negative eigenvalues give an all-zero coordinate.
pub fn classical_scaling(dx: &DistanceMatrix) -> Embedding2D {
    let m = dx.size();
    if m == 0 {
        return Embedding2D::new(vec![]);
    }
    let sq = DMatrix::from_fn(m, m, |j, h| dx.get(j, h).powi(2));
    let row_means: Vec<f64> = (0..m).map(|j| sq.row(j).sum() / m as f64).collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    let b = DMatrix::from_fn(m, m, |j, h| -0.5 * (sq[(j, h)] - row_means[j] - row_means[h] + grand));
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut axes = [vec![0.0; m], vec![0.0; m]];
    for (axis, &idx) in axes.iter_mut().zip(order.iter()) {
        let lambda = eig.eigenvalues[idx];
        if lambda > 0.0 {
            let v = canonical_sign(eig.eigenvectors.column(idx).iter().copied().collect());
            *axis = v.iter().map(|x| x * lambda.sqrt()).collect();
        }
    }
    Embedding2D::new((0..m).map(|j| [axes[0][j], axes[1][j]]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMethod {
    MetricMds,
    Sammon,
    Lmds,
}

impl fmt::Display for ProjectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionMethod::MetricMds => "metric_mds",
            ProjectionMethod::Sammon => "sammon",
            ProjectionMethod::Lmds => "lmds",
        })
    }
}

impl FromStr for ProjectionMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mds" | "metric_mds" => Ok(ProjectionMethod::MetricMds),
            "sammon" => Ok(ProjectionMethod::Sammon),
            "lmds" => Ok(ProjectionMethod::Lmds),
            other => Err(format!(
                "unknown projection method '{other}' (expected mds, sammon or lmds)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    pub method: ProjectionMethod,
    /// Neighborhood size for local MDS; `max(4, ceil(0.05 M))` when unset.
    pub k_neighbors: Option<usize>,
    /// Repulsion weight for local MDS; derived from the starting layout when unset.
    pub repulsion_t: Option<f64>,
    pub max_iterations: usize,
    /// Stop once an accepted step changes stress by less than this fraction.
    pub tolerance: f64,
    pub seed: u64,
}

impl ProjectionConfig {
    pub fn new(method: ProjectionMethod) -> Self {
        Self {
            method,
            k_neighbors: None,
            repulsion_t: None,
            max_iterations: 2000,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self::new(ProjectionMethod::Sammon)
    }
}

pub fn default_k_neighbors(m: usize) -> usize {
    4.max((0.05 * m as f64).ceil() as usize)
}

/// Share of the starting attraction term matched by the default repulsion.
pub const DEFAULT_REPULSION_RATIO: f64 = 0.01;

/// Outcome of [`project`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub embedding: Embedding2D,
    /// Stress at the start and after each accepted step.
    pub stress_history: Vec<f64>,
    pub final_stress: f64,
    /// Steps attempted, accepted or not.
    pub iterations: usize,
    /// Configuration with local MDS defaults filled in.
    pub resolved: ProjectionConfig,
}

/// Magnitude of the seeded jitter added to the classical-scaling start.
pub const INIT_JITTER: f64 = 1e-6;

enum Objective {
    Mds,
    Sammon,
    Lmds { pairs: PairSet, t: f64 },
}

impl Objective {
    fn stress(&self, dx: &DistanceMatrix, y: &Embedding2D) -> f64 {
        match self {
            Objective::Mds => mds_stress(dx, y),
            // The precondition is checked before optimization starts.
            Objective::Sammon => sammon_stress(dx, y).unwrap_or(f64::NAN),
            Objective::Lmds { pairs, t } => lmds_stress(dx, y, pairs, *t),
        }
    }

    fn gradient(&self, dx: &DistanceMatrix, y: &Embedding2D) -> Vec<[f64; 2]> {
        match self {
            Objective::Mds => mds_gradient(dx, y),
            Objective::Sammon => sammon_gradient(dx, y).unwrap_or_else(|_| vec![[0.0; 2]; y.len()]),
            Objective::Lmds { pairs, t } => lmds_gradient(dx, y, pairs, *t),
        }
    }
}

/// Projects `vectors` to the plane by minimizing the configured stress.
pub fn project<R: AsRef<[f64]>>(vectors: &[R], config: &ProjectionConfig) -> Result<Projection, ProjectionError> {
    if config.max_iterations == 0 || config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(ProjectionError::Invalid(
            "max_iterations and tolerance must be positive".into(),
        ));
    }
    let dx = pairwise_distances(vectors);
    project_distances(&dx, config)
}

/// [`project`] on precomputed distances.
pub fn project_distances(dx: &DistanceMatrix, config: &ProjectionConfig) -> Result<Projection, ProjectionError> {
    let m = dx.size();
    let mut resolved = config.clone();

    let mut y = classical_scaling(dx);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for p in &mut y.points {
        p[0] += rng.random_range(-INIT_JITTER..=INIT_JITTER);
        p[1] += rng.random_range(-INIT_JITTER..=INIT_JITTER);
    }

    let objective = match config.method {
        ProjectionMethod::MetricMds => Objective::Mds,
        ProjectionMethod::Sammon => {
            sammon_normalizer(dx)?;
            Objective::Sammon
        }
        ProjectionMethod::Lmds => {
            if m < 2 {
                Objective::Lmds {
                    pairs: PairSet::new(),
                    t: 0.0,
                }
            } else {
                let k = config.k_neighbors.unwrap_or_else(|| default_k_neighbors(m).min(m - 1));
                let mut pairs = knn_pairs(dx, k)?;
                let linked = connect_components(dx, &mut pairs);
                if linked > 0 {
                    log::info!("added {linked} linking pairs to connect the {k}-NN graph");
                }
                let t = match config.repulsion_t {
                    Some(t) if t >= 0.0 && t.is_finite() => t,
                    Some(t) => return Err(ProjectionError::Invalid(format!("repulsion must be >= 0, got {t}"))),
                    None => default_repulsion(dx, &y, &pairs),
                };
                resolved.k_neighbors = Some(k);
                resolved.repulsion_t = Some(t);
                Objective::Lmds { pairs, t }
            }
        }
    };

    let mut stress = objective.stress(dx, &y);
    if !stress.is_finite() {
        return Err(ProjectionError::NonFiniteStress(0));
    }
    let mut history = vec![stress];
    let mut step = 0.05 * dx.mean_pair_distance();
    let mut iterations = 0;
    if step > 0.0 {
        while iterations < config.max_iterations {
            iterations += 1;
            let grad = objective.gradient(dx, &y);
            if grad.iter().all(|g| g[0] == 0.0 && g[1] == 0.0) {
                break;
            }
            let candidate = Embedding2D::new(
                y.points
                    .iter()
                    .zip(&grad)
                    .map(|(p, g)| [p[0] - step * g[0], p[1] - step * g[1]])
                    .collect(),
            );
            let next = objective.stress(dx, &candidate);
            if !next.is_finite() || !candidate.is_finite() {
                return Err(ProjectionError::NonFiniteStress(iterations));
            }
            if next <= stress {
                let change = (stress - next) / stress.abs().max(f64::MIN_POSITIVE);
                y = candidate;
                stress = next;
                history.push(stress);
                step *= 1.2;
                if change < config.tolerance || stress == 0.0 {
                    break;
                }
            } else {
                step *= 0.5;
                if step < f64::MIN_POSITIVE {
                    break;
                }
            }
        }
    }
    Ok(Projection {
        embedding: y,
        stress_history: history,
        final_stress: stress,
        iterations,
        resolved,
    })
}

/// Repulsion weight making the repulsion term a fixed share of the
/// attraction term on the starting layout.
fn default_repulsion(dx: &DistanceMatrix, y: &Embedding2D, pairs: &PairSet) -> f64 {
    let attraction = lmds_stress(dx, y, pairs, 0.0);
    let spread = -lmds_stress(dx, y, pairs, 1.0) + attraction;
    if spread > 0.0 {
        DEFAULT_REPULSION_RATIO * attraction / spread
    } else {
        0.0
    }
}

/// Rotates the cloud onto its principal axes (about the origin) so the
/// first coordinate carries the larger variance. Each output coordinate is
/// then flipped so its largest-magnitude value is positive.
pub fn align_axes(y: &Embedding2D) -> Embedding2D {
    let m = y.len();
    if m == 0 {
        return y.clone();
    }
    let n = m as f64;
    let mx = y.points.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = y.points.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for p in &y.points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        a += dx * dx;
        b += dx * dy;
        c += dy * dy;
    }
    let gap = ((a - c).powi(2) + 4.0 * b * b).sqrt();
    let isotropic = a + c == 0.0 || gap <= 1e-12 * (a + c);
    let points: Vec<[f64; 2]> = if isotropic {
        y.points.clone()
    } else {
        let theta = 0.5 * (2.0 * b).atan2(a - c);
        let (s, co) = theta.sin_cos();
        y.points
            .iter()
            .map(|p| [co * p[0] + s * p[1], -s * p[0] + co * p[1]])
            .collect()
    };
    let mut out = Embedding2D::new(points);
    for d in 0..2 {
        let mut extreme = 0.0f64;
        for p in &out.points {
            if p[d].abs() > extreme.abs() {
                extreme = p[d];
            }
        }
        if extreme < 0.0 {
            out.points.iter_mut().for_each(|p| p[d] = -p[d]);
        }
    }
    out
}

/// Min-max scales each coordinate to `[0, 1]`; a constant coordinate maps to 0.5.
pub fn normalize_components(y: &Embedding2D) -> Embedding2D {
    let mut out = y.clone();
    for d in 0..2 {
        let lo = y.points.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = y.points.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        for p in &mut out.points {
            p[d] = if range > 0.0 { (p[d] - lo) / range } else { 0.5 };
        }
    }
    out
}

pub const EMBEDDING_SCHEMA_VERSION: u32 = 1;

/// JSON form of a projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub schema_version: u32,
    pub method: ProjectionMethod,
    pub config: ProjectionConfig,
    pub points: Vec<[f64; 2]>,
    pub final_stress: f64,
    pub iterations: usize,
}

impl EmbeddingFile {
    pub fn new(projection: &Projection) -> Self {
        Self {
            schema_version: EMBEDDING_SCHEMA_VERSION,
            method: projection.resolved.method,
            config: projection.resolved.clone(),
            points: projection.embedding.points.clone(),
            final_stress: projection.final_stress,
            iterations: projection.iterations,
        }
    }

    pub fn embedding(&self) -> Embedding2D {
        Embedding2D::new(self.points.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(points: &[[f64; 2]]) -> Embedding2D {
        Embedding2D::new(points.to_vec())
    }

    fn two_point(d: f64) -> DistanceMatrix {
        DistanceMatrix::from_entries(2, vec![0.0, d, d, 0.0]).unwrap()
    }

    #[test]
    fn three_four_five() {
        let dx = pairwise_distances(&[vec![0.0, 0.0], vec![3.0, 4.0]]);
        assert_eq!(dx.get(0, 1), 5.0);
        assert_eq!(dx.get(1, 0), 5.0);
        let same = pairwise_distances(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!((0..3).all(|j| same.row(j).iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn stress_examples() {
        let dx = two_point(1.0);
        assert_eq!(mds_stress(&dx, &emb(&[[0.0, 0.0], [1.0, 0.0]])), 0.0);
        assert_eq!(mds_stress(&dx, &emb(&[[0.0, 0.0], [3.0, 0.0]])), 4.0);
        let dx2 = two_point(2.0);
        assert_eq!(sammon_stress(&dx2, &emb(&[[0.0, 0.0], [1.0, 0.0]])).unwrap(), 0.25);
        assert_eq!(sammon_stress(&dx2, &emb(&[[0.0, 0.0], [0.0, 2.0]])).unwrap(), 0.0);
    }

    #[test]
    fn sammon_rejects_coincident_points() {
        let dx = pairwise_distances(&[vec![0.0], vec![1.0], vec![1.0]]);
        let y = emb(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert_eq!(sammon_stress(&dx, &y), Err(ProjectionError::ZeroDistance(1, 2)));
        let cfg = ProjectionConfig::new(ProjectionMethod::Sammon);
        assert_eq!(
            project(&[vec![0.0], vec![1.0], vec![1.0]], &cfg).unwrap_err(),
            ProjectionError::ZeroDistance(1, 2)
        );
    }

    #[test]
    fn lmds_limits() {
        let dx = pairwise_distances(&[vec![0.0, 0.0], vec![1.0, 0.5], vec![3.0, 1.0], vec![0.2, 2.0]]);
        let y = emb(&[[0.1, 0.0], [1.0, 0.0], [2.0, 1.5], [0.0, 1.0]]);
        let all = PairSet::all(4);
        assert_eq!(lmds_stress(&dx, &y, &all, 3.0), mds_stress(&dx, &y));
        let none = PairSet::new();
        let expected: f64 = -(0..4)
            .flat_map(|j| (j + 1..4).map(move |h| (j, h)))
            .map(|(j, h)| y.distance(j, h))
            .sum::<f64>();
        assert_eq!(lmds_stress(&dx, &y, &none, 1.0), expected);
    }

    #[test]
    fn knn_examples() {
        let two = pairwise_distances(&[vec![0.0], vec![4.0]]);
        assert_eq!(knn_pairs(&two, 1).unwrap(), PairSet::all(2));
        let line = pairwise_distances(&[vec![0.0], vec![1.0], vec![10.0]]);
        let p = knn_pairs(&line, 1).unwrap();
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(knn_pairs(&line, 2).unwrap(), PairSet::all(3));
        assert!(matches!(
            knn_pairs(&line, 3),
            Err(ProjectionError::NeighborsOutOfRange { .. })
        ));
        assert!(matches!(
            knn_pairs(&line, 0),
            Err(ProjectionError::NeighborsOutOfRange { .. })
        ));
    }

    #[test]
    fn linking_pairs_connect_clusters() {
        let dx = pairwise_distances(&[vec![0.0], vec![0.1], vec![10.0], vec![10.1]]);
        let mut p = knn_pairs(&dx, 1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(connect_components(&dx, &mut p), 1);
        assert!(p.contains(1, 2));
        assert_eq!(connect_components(&dx, &mut p), 0);
    }

    #[test]
    fn classical_scaling_degenerate_inputs() {
        let same = pairwise_distances(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(classical_scaling(&same)
            .points
            .iter()
            .all(|p| p[0] == 0.0 && p[1] == 0.0));
        let planar = [
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, 1.0],
            vec![3.0, 3.0],
            vec![-1.0, 2.0],
        ];
        let dx = pairwise_distances(&planar);
        assert!(mds_stress(&dx, &classical_scaling(&dx)) <= 1e-9);
    }

    #[test]
    fn alignment_identity_and_swap() {
        let y = emb(&[[3.0, 1.0], [-3.0, 1.0], [4.0, -1.0], [-4.0, -1.0]]);
        // Already principal: x has larger variance and xy covariance is zero.
        let a = align_axes(&y);
        for (p, q) in a.points.iter().zip(&y.points) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
        let swapped = emb(&[[1.0, 3.0], [1.0, -3.0], [-1.0, 4.0], [-1.0, -4.0]]);
        let b = align_axes(&swapped);
        for (p, q) in b.points.iter().zip(&swapped.points) {
            assert!((p[0].abs() - q[1].abs()).abs() < 1e-12);
            assert!((p[1].abs() - q[0].abs()).abs() < 1e-12);
        }
        // Largest-magnitude coordinate on each axis is positive.
        assert!((b.points[2][0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_cloud_keeps_orientation() {
        let y = emb(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        assert_eq!(align_axes(&y), y);
    }

    #[test]
    fn normalization_examples() {
        let y = emb(&[[-2.0, 7.0], [0.0, 7.0], [2.0, 7.0]]);
        let n = normalize_components(&y);
        assert_eq!(n.points, vec![[0.0, 0.5], [0.5, 0.5], [1.0, 0.5]]);
    }

    #[test]
    fn method_names() {
        assert_eq!("mds".parse::<ProjectionMethod>().unwrap(), ProjectionMethod::MetricMds);
        assert_eq!("lmds".parse::<ProjectionMethod>().unwrap(), ProjectionMethod::Lmds);
        assert!("pca".parse::<ProjectionMethod>().is_err());
        assert_eq!(
            serde_json::to_string(&ProjectionMethod::MetricMds).unwrap(),
            "\"metric_mds\""
        );
    }

    #[test]
    fn planar_input_is_recovered_exactly() {
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i as f64 * 1.3).sin() * 3.0, (i as f64 * 0.4).cos()])
            .collect();
        let out = project(&pts, &ProjectionConfig::new(ProjectionMethod::MetricMds)).unwrap();
        assert!(out.final_stress <= 1e-8, "{}", out.final_stress);
    }

    #[test]
    fn single_point_has_zero_stress() {
        let out = project(&[vec![1.0, 2.0, 3.0]], &ProjectionConfig::new(ProjectionMethod::Lmds)).unwrap();
        assert_eq!(out.embedding.len(), 1);
        assert_eq!(out.final_stress, 0.0);
    }
}
