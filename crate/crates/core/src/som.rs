//! Batch self-organizing map on a hexagonal lattice.
//!
//! Training alternates two steps over the whole data set: every point is
//! assigned to its best-matching unit, then every unit moves to the average
//! of the data weighted by a Gaussian kernel over planar lattice distance
//! between the point's best-matching unit and the unit itself.
//!
//! The neighborhood width can be chosen automatically by training one map
//! per candidate width and keeping the one with the lowest Kaski–Lagus
//! goodness (distance to the second-best unit plus the shortest lattice path
//! between best and second-best units, measured in input space).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DataMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum SomError {
    #[error("grid must have at least one row and one column, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("grid of {units} units is too large for {rows} data rows (limit is 100 units per row)")]
    GridTooLarge { units: usize, rows: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("neighborhood width must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("goodness needs at least two units")]
    TooFewUnits,
    #[error("no sigma candidates given")]
    NoCandidates,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

const ROW_HEIGHT: f64 = 0.866_025_403_784_438_6; // sqrt(3) / 2

/// Planar coordinates of unit `(r, c)` in the offset hexagonal lattice.
pub fn hex_position(r: usize, c: usize) -> [f64; 2] {
    [c as f64 + 0.5 * (r % 2) as f64, r as f64 * ROW_HEIGHT]
}

/// Lattice neighbors of unit `(r, c)` as row-major indices, ascending.
pub fn hex_neighbors(rows: usize, cols: usize, r: usize, c: usize) -> Vec<usize> {
    let (r, c) = (r as isize, c as isize);
    // Odd rows sit half a step to the right of even rows.
    let shift = if r % 2 == 0 { -1 } else { 0 };
    let candidates = [
        (r - 1, c + shift),
        (r - 1, c + shift + 1),
        (r, c - 1),
        (r, c + 1),
        (r + 1, c + shift),
        (r + 1, c + shift + 1),
    ];
    let mut out: Vec<usize> = candidates
        .iter()
        .filter(|(rr, cc)| *rr >= 0 && *cc >= 0 && (*rr as usize) < rows && (*cc as usize) < cols)
        .map(|&(rr, cc)| rr as usize * cols + cc as usize)
        .collect();
    out.sort_unstable();
    out
}

/// `rows x cols` hexagonal lattice of reference vectors, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SomGrid {
    rows: usize,
    cols: usize,
    dim: usize,
    positions: Vec<[f64; 2]>,
    vectors: Vec<f64>,
}

impl SomGrid {
    /// Builds a grid from explicit reference vectors in row-major unit order.
    pub fn from_vectors(rows: usize, cols: usize, vectors: Vec<Vec<f64>>) -> Result<Self, SomError> {
        if rows == 0 || cols == 0 {
            return Err(SomError::EmptyGrid { rows, cols });
        }
        if vectors.len() != rows * cols {
            return Err(SomError::InvalidGrid(format!(
                "{} reference vectors for a {rows}x{cols} grid",
                vectors.len()
            )));
        }
        let dim = vectors[0].len();
        if dim == 0 {
            return Err(SomError::InvalidGrid("reference vectors are empty".into()));
        }
        let mut flat = Vec::with_capacity(rows * cols * dim);
        for v in vectors {
            if v.len() != dim {
                return Err(SomError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(SomError::InvalidGrid("non-finite reference vector entry".into()));
            }
            flat.extend(v);
        }
        Ok(Self::from_flat(rows, cols, dim, flat))
    }

    fn from_flat(rows: usize, cols: usize, dim: usize, vectors: Vec<f64>) -> Self {
        let positions = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| hex_position(r, c)))
            .collect();
        Self {
            rows,
            cols,
            dim,
            positions,
            vectors,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of units, `rows * cols`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn reference_vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn reference_vectors(&self) -> Vec<&[f64]> {
        self.vectors.chunks_exact(self.dim).collect()
    }

    pub fn position(&self, i: usize) -> [f64; 2] {
        self.positions[i]
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// `(row, col)` of unit `i`.
    pub fn coords(&self, i: usize) -> (usize, usize) {
        (i / self.cols, i % self.cols)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let (r, c) = self.coords(i);
        hex_neighbors(self.rows, self.cols, r, c)
    }

    fn check_dim(&self, found: usize) -> Result<(), SomError> {
        if found != self.dim {
            return Err(SomError::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Kernel width at the first epoch, in lattice steps.
    pub sigma_initial: f64,
    /// Kernel width at the last epoch.
    pub sigma_final: f64,
    pub seed: u64,
    /// Final widths tried by [`select_sigma`].
    pub sigma_candidates: Option<Vec<f64>>,
}

pub const DEFAULT_EPOCHS: usize = 40;
pub const DEFAULT_SIGMA_CANDIDATES: [f64; 5] = [0.4, 0.7, 1.0, 1.5, 2.0];

impl TrainConfig {
    /// Defaults for a `rows x cols` grid: 40 epochs, initial width half the
    /// longer grid side, final width 1 (or the initial width if smaller).
    pub fn for_grid(rows: usize, cols: usize) -> Self {
        let sigma_initial = rows.max(cols) as f64 / 2.0;
        Self {
            epochs: DEFAULT_EPOCHS,
            sigma_initial,
            sigma_final: sigma_initial.min(1.0),
            seed: 0,
            sigma_candidates: Some(DEFAULT_SIGMA_CANDIDATES.to_vec()),
        }
    }

    pub fn validate(&self) -> Result<(), SomError> {
        if self.epochs == 0 {
            return Err(SomError::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.sigma_final > 0.0 && self.sigma_final.is_finite()) {
            return Err(SomError::InvalidSigma(self.sigma_final));
        }
        if !self.sigma_initial.is_finite() || self.sigma_final > self.sigma_initial {
            return Err(SomError::InvalidConfig(format!(
                "need 0 < sigma_final ({}) <= sigma_initial ({})",
                self.sigma_final, self.sigma_initial
            )));
        }
        Ok(())
    }

    /// Width used at each epoch: linear from initial to final.
    pub fn sigma_schedule(&self) -> Vec<f64> {
        let e = self.epochs;
        (0..e)
            .map(|k| {
                if e == 1 {
                    self.sigma_initial
                } else {
                    let t = k as f64 / (e - 1) as f64;
                    self.sigma_initial + (self.sigma_final - self.sigma_initial) * t
                }
            })
            .collect()
    }
}

fn unit_vector(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Flips `v` so its largest-magnitude entry is positive.
fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    let mut best = 0.0f64;
    for x in v.iter() {
        if x.abs() > best.abs() {
            best = *x;
        }
    }
    if best < 0.0 {
        -v
    } else {
        v
    }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize, orthogonal_to: Option<&DVector<f64>>) -> DVector<f64> {
    loop {
        let mut v = DVector::from_iterator(dim, (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)));
        if let Some(e) = orthogonal_to {
            let proj = v.dot(e);
            v -= e * proj;
        }
        if v.norm() > 1e-8 {
            return unit_vector(v);
        }
    }
}

/// Magnitude of the fallback spread along undefined principal directions.
const DEGENERATE_SPREAD: f64 = 1e-3;

/// Places the reference vectors on the plane of the two leading principal
/// components, spread linearly over +-2 standard deviations of each score.
///
/// The first component runs along the longer planar extent of the lattice.
/// When the data has rank below two, the missing direction is drawn from
/// `seed` and spread by only `1e-3`.
pub fn init_grid(rows: usize, cols: usize, data: &DataMatrix, seed: u64) -> Result<SomGrid, SomError> {
    if rows == 0 || cols == 0 {
        return Err(SomError::EmptyGrid { rows, cols });
    }
    let units = rows * cols;
    if units > data.n_rows() * 100 {
        return Err(SomError::GridTooLarge {
            units,
            rows: data.n_rows(),
        });
    }
    let n = data.n_cols();
    let count = data.n_rows();
    let mean = DVector::from_iterator(n, (0..n).map(|j| data.column(j).sum::<f64>() / count as f64));
    let mut cov = DMatrix::<f64>::zeros(n, n);
    if count > 1 {
        for row in data.rows() {
            let d = DVector::from_column_slice(row) - &mean;
            cov += &d * d.transpose();
        }
        cov /= (count - 1) as f64;
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let lambda = |k: usize| order.get(k).map_or(0.0, |&i| eig.eigenvalues[i].max(0.0));
    let vector = |k: usize| canonical_sign(eig.eigenvectors.column(order[k]).into_owned());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = lambda(0).max(1.0);
    let (e1, spread1) = if lambda(0) > 1e-12 * scale {
        (vector(0), 2.0 * lambda(0).sqrt())
    } else {
        (random_direction(&mut rng, n, None), DEGENERATE_SPREAD)
    };
    let (e2, spread2) = if n >= 2 && lambda(1) > 1e-12 * scale {
        (vector(1), 2.0 * lambda(1).sqrt())
    } else if n >= 2 {
        (random_direction(&mut rng, n, Some(&e1)), DEGENERATE_SPREAD)
    } else {
        (e1.clone(), DEGENERATE_SPREAD)
    };

    let width = (cols - 1) as f64 + if rows > 1 { 0.5 } else { 0.0 };
    let height = (rows - 1) as f64 * ROW_HEIGHT;
    let scaled = |v: f64, extent: f64| if extent > 0.0 { 2.0 * v / extent - 1.0 } else { 0.0 };

    let mut flat = Vec::with_capacity(units * n);
    for r in 0..rows {
        for c in 0..cols {
            let [x, y] = hex_position(r, c);
            let (sx, sy) = (scaled(x, width), scaled(y, height));
            let (major, minor) = if width >= height { (sx, sy) } else { (sy, sx) };
            let m = &mean + &e1 * (major * spread1) + &e2 * (minor * spread2);
            flat.extend(m.iter());
        }
    }
    Ok(SomGrid::from_flat(rows, cols, n, flat))
}

/// Index of the unit nearest to `x`; ties go to the lowest index.
pub fn bmu(x: &[f64], grid: &SomGrid) -> Result<usize, SomError> {
    grid.check_dim(x.len())?;
    Ok(nearest(x, grid))
}

fn nearest(x: &[f64], grid: &SomGrid) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, m) in grid.vectors.chunks_exact(grid.dim).enumerate() {
        let d = sq_dist(x, m);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Best and second-best unit, lowest index first on ties.
fn two_nearest(x: &[f64], grid: &SomGrid) -> (usize, usize) {
    let (mut b1, mut d1) = (usize::MAX, f64::INFINITY);
    let (mut b2, mut d2) = (usize::MAX, f64::INFINITY);
    for (i, m) in grid.vectors.chunks_exact(grid.dim).enumerate() {
        let d = sq_dist(x, m);
        if d < d1 {
            (b2, d2) = (b1, d1);
            (b1, d1) = (i, d);
        } else if d < d2 {
            (b2, d2) = (i, d);
        }
    }
    (b1, b2)
}

/// Best-matching unit of every data row.
pub fn assign(grid: &SomGrid, data: &DataMatrix) -> Result<Vec<usize>, SomError> {
    grid.check_dim(data.n_cols())?;
    Ok(data
        .values()
        .par_chunks_exact(data.n_cols())
        .map(|x| nearest(x, grid))
        .collect())
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// One batch update with Gaussian kernel width `sigma`.
///
/// Per-unit sums run over that unit's data sorted by value, so the result
/// does not depend on row order or thread count.
pub fn batch_epoch(grid: &SomGrid, data: &DataMatrix, sigma: f64) -> Result<SomGrid, SomError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(SomError::InvalidSigma(sigma));
    }
    let bmus = assign(grid, data)?;
    let m = grid.len();
    let dim = grid.dim;

    let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); m];
    for (row, &c) in data.rows().zip(&bmus) {
        members[c].push(row);
    }
    let mut sums = vec![0.0; m * dim];
    for (c, rows) in members.iter_mut().enumerate() {
        rows.sort_by(|a, b| lexicographic(a, b));
        let acc = &mut sums[c * dim..(c + 1) * dim];
        for row in rows.iter() {
            for (s, v) in acc.iter_mut().zip(row.iter()) {
                *s += v;
            }
        }
    }
    let occupied: Vec<usize> = (0..m).filter(|&c| !members[c].is_empty()).collect();

    let two_sigma_sq = 2.0 * sigma * sigma;
    let mut out = grid.vectors.clone();
    let mut num = vec![0.0; dim];
    for i in 0..m {
        num.iter_mut().for_each(|v| *v = 0.0);
        let mut den = 0.0;
        let pi = grid.positions[i];
        for &c in &occupied {
            let pc = grid.positions[c];
            let d2 = (pi[0] - pc[0]).powi(2) + (pi[1] - pc[1]).powi(2);
            let h = (-d2 / two_sigma_sq).exp();
            if h == 0.0 {
                continue;
            }
            den += h * members[c].len() as f64;
            for (acc, s) in num.iter_mut().zip(&sums[c * dim..(c + 1) * dim]) {
                *acc += h * s;
            }
        }
        if den > 0.0 {
            for (o, s) in out[i * dim..(i + 1) * dim].iter_mut().zip(&num) {
                *o = s / den;
            }
        }
    }
    Ok(SomGrid::from_flat(grid.rows, grid.cols, dim, out))
}

/// Per-epoch record of a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub sigma_schedule: Vec<f64>,
    /// Quantization error after each epoch.
    pub quantization_errors: Vec<f64>,
}

/// Trains a map from the PCA initialization.
pub fn train(data: &DataMatrix, rows: usize, cols: usize, config: &TrainConfig) -> Result<SomGrid, SomError> {
    train_with_log(data, rows, cols, config).map(|(g, _)| g)
}

pub fn train_with_log(
    data: &DataMatrix,
    rows: usize,
    cols: usize,
    config: &TrainConfig,
) -> Result<(SomGrid, TrainingLog), SomError> {
    config.validate()?;
    let grid = init_grid(rows, cols, data, config.seed)?;
    continue_training(grid, data, &config.sigma_schedule())
}

/// Runs one batch epoch per entry of `schedule`, starting from `grid`.
pub fn continue_training(
    mut grid: SomGrid,
    data: &DataMatrix,
    schedule: &[f64],
) -> Result<(SomGrid, TrainingLog), SomError> {
    let mut errors = Vec::with_capacity(schedule.len());
    for &sigma in schedule {
        grid = batch_epoch(&grid, data, sigma)?;
        errors.push(quantization_error(&grid, data)?);
        log::debug!(
            "epoch {}: sigma {sigma:.4}, qe {:.6}",
            errors.len(),
            errors[errors.len() - 1]
        );
    }
    Ok((
        grid,
        TrainingLog {
            sigma_schedule: schedule.to_vec(),
            quantization_errors: errors,
        },
    ))
}

/// Mean distance from each data point to its best-matching unit.
pub fn quantization_error(grid: &SomGrid, data: &DataMatrix) -> Result<f64, SomError> {
    let bmus = assign(grid, data)?;
    let total: f64 = data
        .rows()
        .zip(&bmus)
        .map(|(x, &c)| dist(x, grid.reference_vector(c)))
        .sum();
    Ok(total / data.n_rows() as f64)
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance, then index.
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest lattice-path lengths from `source`, with edges weighted by the
/// input-space distance between adjacent reference vectors.
pub fn lattice_path_lengths(grid: &SomGrid, source: usize) -> Vec<f64> {
    let m = grid.len();
    let mut best = vec![f64::INFINITY; m];
    let mut heap = BinaryHeap::new();
    best[source] = 0.0;
    heap.push(Frontier(0.0, source));
    while let Some(Frontier(d, u)) = heap.pop() {
        if d > best[u] {
            continue;
        }
        for v in grid.neighbors(u) {
            let nd = d + dist(grid.reference_vector(u), grid.reference_vector(v));
            if nd < best[v] {
                best[v] = nd;
                heap.push(Frontier(nd, v));
            }
        }
    }
    best
}

/// Kaski–Lagus goodness; lower is better.
pub fn goodness(grid: &SomGrid, data: &DataMatrix) -> Result<f64, SomError> {
    if grid.len() < 2 {
        return Err(SomError::TooFewUnits);
    }
    grid.check_dim(data.n_cols())?;
    let pairs: Vec<(usize, usize)> = data
        .values()
        .par_chunks_exact(data.n_cols())
        .map(|x| two_nearest(x, grid))
        .collect();
    let mut paths: Vec<Option<Vec<f64>>> = vec![None; grid.len()];
    let mut total = 0.0;
    for (x, &(c, c2)) in data.rows().zip(&pairs) {
        let from_c = paths[c].get_or_insert_with(|| lattice_path_lengths(grid, c));
        total += dist(x, grid.reference_vector(c2)) + from_c[c2];
    }
    Ok(total / data.n_rows() as f64)
}

/// Goodness of the map trained with one candidate width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaScore {
    pub sigma_final: f64,
    pub goodness: f64,
}

#[derive(Debug, Clone)]
pub struct SigmaSelection {
    pub sigma_final: f64,
    pub grid: SomGrid,
    pub log: TrainingLog,
    pub goodness: f64,
    /// One entry per candidate, in the order given.
    pub scores: Vec<SigmaScore>,
}

/// Tolerance under which two goodness values count as tied.
pub const GOODNESS_TIE: f64 = 1e-12;

/// Position of the lowest score; near-ties go to the smaller width.
pub fn best_candidate(scores: &[SigmaScore]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &scores[b];
                let better = s.goodness < cur.goodness - GOODNESS_TIE
                    || ((s.goodness - cur.goodness).abs() <= GOODNESS_TIE && s.sigma_final < cur.sigma_final);
                Some(if better { i } else { b })
            }
        };
    }
    best
}

/// Trains one map per candidate final width and keeps the best by goodness.
pub fn select_sigma(
    data: &DataMatrix,
    rows: usize,
    cols: usize,
    config: &TrainConfig,
) -> Result<SigmaSelection, SomError> {
    let candidates = config.sigma_candidates.as_deref().unwrap_or_default();
    if candidates.is_empty() {
        return Err(SomError::NoCandidates);
    }
    let mut runs = Vec::with_capacity(candidates.len());
    let mut scores = Vec::with_capacity(candidates.len());
    for &sigma_final in candidates {
        let cfg = TrainConfig {
            sigma_final,
            ..config.clone()
        };
        let (grid, log) = train_with_log(data, rows, cols, &cfg)?;
        let g = goodness(&grid, data)?;
        log::info!("sigma_final {sigma_final}: goodness {g:.6}");
        scores.push(SigmaScore {
            sigma_final,
            goodness: g,
        });
        runs.push((grid, log));
    }
    let best = best_candidate(&scores).expect("non-empty candidates");
    let (grid, log) = runs.swap_remove(best);
    Ok(SigmaSelection {
        sigma_final: scores[best].sigma_final,
        grid,
        log,
        goodness: scores[best].goodness,
        scores,
    })
}

pub const GRID_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub epochs: usize,
    pub sigma_schedule: Vec<f64>,
    pub seed: u64,
    /// Absent for single-unit grids.
    pub goodness: Option<f64>,
    pub quantization_error: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma_scores: Vec<SigmaScore>,
}

/// JSON form of a trained grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub schema_version: u32,
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    /// One vector per unit, row-major over the lattice.
    pub reference_vectors: Vec<Vec<f64>>,
    pub training_metadata: TrainingMetadata,
}

impl GridFile {
    pub fn new(grid: &SomGrid, training_metadata: TrainingMetadata) -> Self {
        Self {
            schema_version: GRID_SCHEMA_VERSION,
            rows: grid.rows,
            cols: grid.cols,
            dim: grid.dim,
            reference_vectors: grid.reference_vectors().iter().map(|v| v.to_vec()).collect(),
            training_metadata,
        }
    }

    pub fn to_grid(&self) -> Result<SomGrid, SomError> {
        let grid = SomGrid::from_vectors(self.rows, self.cols, self.reference_vectors.clone())?;
        if grid.dim != self.dim {
            return Err(SomError::DimensionMismatch {
                expected: self.dim,
                found: grid.dim,
            });
        }
        Ok(grid)
    }
}
