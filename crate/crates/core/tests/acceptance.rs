//! Acceptance criteria, one line of output each. Exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use somchroma::colorspace::{
    builtin_plane, builtin_planes, in_gamut, lab_to_srgb, lab_to_srgb_unclamped, plane_color, srgb_to_lab, LabColor,
    RgbColor, CYAN_GRAY_RED, GAMUT_RESOLUTION, GAMUT_TOLERANCE, GREEN_YELLOW_RED,
};
use somchroma::dataset::{standardize, write_csv, DataMatrix};
use somchroma::pipeline::{
    run_pipeline, run_stage, DataFile, PipelineConfig, PlaneChoice, Stage, DATA_FILE, EMBEDDING_FILE, GRID_FILE,
    SCATTER_SVG, SOM_SVG, SWATCH_SVG,
};
use somchroma::projection::{
    knn_pairs, lmds_gradient, lmds_stress, mds_gradient, mds_stress, pairwise_distances, project, sammon_gradient,
    sammon_stress, Embedding2D, EmbeddingFile, ProjectionConfig, ProjectionMethod,
};
use somchroma::samples;
use somchroma::som::{assign, batch_epoch, goodness, select_sigma, train, GridFile, SomGrid, TrainConfig};

type Outcome = Result<String, String>;
type Stress<'a> = Box<dyn Fn(&Embedding2D) -> f64 + 'a>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> T {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn iris_config(dir: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    cfg.input.path = Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"));
    cfg.input.class_column = Some("species".into());
    cfg.grid = "6x7".parse().unwrap();
    cfg.projection.method = ProjectionMethod::Sammon;
    cfg.color.plane = PlaneChoice::Builtin(CYAN_GRAY_RED.into());
    cfg.output.dir = dir.to_path_buf();
    cfg
}

fn iris_separation() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = iris_config(dir.path());
    let start = Instant::now();
    run_pipeline(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let data_file: DataFile = read_json(&dir.path().join(DATA_FILE));
    let data = data_file.matrix().unwrap();
    let grid = read_json::<GridFile>(&dir.path().join(GRID_FILE)).to_grid().unwrap();
    let emb = read_json::<EmbeddingFile>(&dir.path().join(EMBEDDING_FILE)).embedding();

    let bmus = assign(&grid, &data).unwrap();
    let classes = data.class_labels().unwrap();
    let mut tally: BTreeMap<usize, BTreeMap<&str, usize>> = BTreeMap::new();
    for (&u, c) in bmus.iter().zip(classes) {
        *tally.entry(u).or_default().entry(c.as_str()).or_default() += 1;
    }
    // Ties go to the alphabetically first class.
    let majority: BTreeMap<usize, &str> = tally
        .iter()
        .map(|(&u, counts)| {
            let best = counts.values().max().unwrap();
            (u, *counts.iter().find(|(_, n)| *n == best).unwrap().0)
        })
        .collect();
    let units_of = |name: &str| {
        majority
            .iter()
            .filter(|(_, c)| **c == name)
            .map(|(&u, _)| u)
            .collect::<Vec<_>>()
    };
    let (setosa, versicolor, virginica) = (units_of("setosa"), units_of("versicolor"), units_of("virginica"));
    let others: Vec<usize> = versicolor.iter().chain(&virginica).copied().collect();
    check(
        !setosa.is_empty() && !versicolor.is_empty() && !virginica.is_empty(),
        "a class has no majority units",
    )?;
    let mean_dist = |a: &[usize], b: &[usize]| {
        let mut sum = 0.0;
        for &i in a {
            for &j in b {
                sum += emb.distance(i, j);
            }
        }
        sum / (a.len() * b.len()) as f64
    };
    let ratio = mean_dist(&setosa, &others) / mean_dist(&versicolor, &virginica);
    let detail = format!("ratio {ratio:.3} (need >= 1.5), {elapsed:.2} s (need < 10)");
    check(ratio >= 1.5 && elapsed < 10.0, detail.clone())?;
    Ok(detail)
}

fn brute_mds_stress(points: &[[f64; 2]], y: &Embedding2D) -> f64 {
    let mut s = 0.0;
    for j in 0..points.len() {
        for h in j + 1..points.len() {
            let dx = (points[j][0] - points[h][0]).hypot(points[j][1] - points[h][1]);
            s += (dx - y.distance(j, h)).powi(2);
        }
    }
    s
}

fn exact_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for trial in 0..30 {
        let points: Vec<[f64; 2]> = (0..20)
            .map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])
            .collect();
        let mut cfg = ProjectionConfig::new(ProjectionMethod::MetricMds);
        cfg.seed = trial;
        let p = project(&points, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(brute_mds_stress(&points, &p.embedding));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!("worst stress {worst:.3e} (need <= 1e-8), {elapsed:.2} s (need < 5)");
    check(worst <= 1e-8 && elapsed < 5.0, detail.clone())?;
    Ok(detail)
}

fn finite_difference(f: &dyn Fn(&Embedding2D) -> f64, y: &Embedding2D, j: usize, d: usize) -> f64 {
    let step = 1e-6;
    let mut plus = y.clone();
    let mut minus = y.clone();
    plus.points[j][d] += step;
    minus.points[j][d] -= step;
    (f(&plus) - f(&minus)) / (2.0 * step)
}

fn gradient_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = [0.0f64; 3];
    for _ in 0..20 {
        let x: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..4).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let dx = pairwise_distances(&x);
        let y = Embedding2D::new(
            (0..10)
                .map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
                .collect(),
        );
        let pairs = knn_pairs(&dx, 3).unwrap();
        let t = rng.random_range(0.05..1.0);
        let cases: [(Stress, Vec<[f64; 2]>); 3] = [
            (Box::new(|e| mds_stress(&dx, e)), mds_gradient(&dx, &y)),
            (
                Box::new(|e| sammon_stress(&dx, e).unwrap()),
                sammon_gradient(&dx, &y).unwrap(),
            ),
            (
                Box::new(|e| lmds_stress(&dx, e, &pairs, t)),
                lmds_gradient(&dx, &y, &pairs, t),
            ),
        ];
        for (k, (f, grad)) in cases.iter().enumerate() {
            for (j, g) in grad.iter().enumerate() {
                for (d, &analytic) in g.iter().enumerate() {
                    let numeric = finite_difference(f.as_ref(), &y, j, d);
                    let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12);
                    worst[k] = worst[k].max(rel);
                }
            }
        }
    }
    let detail = format!(
        "worst relative error mds {:.2e}, sammon {:.2e}, lmds {:.2e} (need < 1e-4)",
        worst[0], worst[1], worst[2]
    );
    check(worst.iter().all(|&w| w < 1e-4), detail.clone())?;
    Ok(detail)
}

fn kmeans_step(vectors: &[Vec<f64>], points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = vectors[0].len();
    let mut sums = vec![vec![0.0; dim]; vectors.len()];
    let mut counts = vec![0usize; vectors.len()];
    for p in points {
        let dist = |v: &Vec<f64>| v.iter().zip(p).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let mut best = 0;
        for i in 1..vectors.len() {
            if dist(&vectors[i]) < dist(&vectors[best]) {
                best = i;
            }
        }
        counts[best] += 1;
        for (s, v) in sums[best].iter_mut().zip(p) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .zip(vectors)
        .map(|((s, n), old)| {
            if n == 0 {
                old.clone()
            } else {
                s.iter().map(|v| v / n as f64).collect()
            }
        })
        .collect()
}

fn lloyd_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shapes = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (1, 6), (6, 1)];
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let (rows, cols) = shapes[trial % shapes.len()];
        let n = rng.random_range(1..=20);
        let dim = rng.random_range(1..=4);
        let mut gen = |k: usize| {
            (0..k)
                .map(|_| (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>())
                .collect::<Vec<_>>()
        };
        let vectors = gen(rows * cols);
        let points = gen(n);
        let grid = SomGrid::from_vectors(rows, cols, vectors.clone()).unwrap();
        let data = DataMatrix::from_unnamed_rows(points.clone()).unwrap();
        let next = batch_epoch(&grid, &data, 1e-6).map_err(|e| e.to_string())?;
        let expected = kmeans_step(&vectors, &points);
        for (i, e) in expected.iter().enumerate() {
            for (a, b) in next.reference_vector(i).iter().zip(e) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let detail = format!("worst deviation {worst:.3e} (need <= 1e-9)");
    check(worst <= 1e-9, detail.clone())?;
    Ok(detail)
}

fn gamut_sweep() -> Outcome {
    let mut failures = Vec::new();
    for plane in builtin_planes() {
        let mut bad = 0;
        for i in 0..GAMUT_RESOLUTION {
            for j in 0..GAMUT_RESOLUTION {
                let u = i as f64 / (GAMUT_RESOLUTION - 1) as f64;
                let v = j as f64 / (GAMUT_RESOLUTION - 1) as f64;
                if !in_gamut(&plane_color(&plane, u, v).unwrap(), GAMUT_TOLERANCE) {
                    bad += 1;
                }
            }
        }
        if bad > 0 {
            let worst = plane.gamut_sweep(GAMUT_RESOLUTION, GAMUT_TOLERANCE).unwrap_err();
            failures.push(format!(
                "{bad}/{} samples out of gamut; {worst}",
                GAMUT_RESOLUTION * GAMUT_RESOLUTION
            ));
        }
    }
    check(failures.is_empty(), failures.join("; "))?;
    Ok("all samples within tolerance".into())
}

fn color_anchors() -> Outcome {
    let gyr = builtin_plane(GREEN_YELLOW_RED).unwrap();
    let cgr = builtin_plane(CYAN_GRAY_RED).unwrap();
    for j in 0..=100 {
        let v = j as f64 / 100.0;
        let c = plane_color(&gyr, 0.5, v).unwrap();
        check(c.a == 0.0 && c.b == 40.0, format!("green-yellow-red at v={v}: {c}"))?;
        let g = plane_color(&cgr, 0.5, v).unwrap();
        check(
            g.chroma() == 0.0,
            format!("cyan-gray-red at v={v}: chroma {}", g.chroma()),
        )?;
    }
    Ok("yellow (a=0, b=40) and gray (chroma 0) mid-lines exact at 101 lightness steps".into())
}

fn lab_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    while accepted < 1000 {
        let lab = LabColor::new(
            rng.random_range(0.0..100.0),
            rng.random_range(-128.0..128.0),
            rng.random_range(-128.0..128.0),
        );
        if !in_gamut(&lab, 0.0) {
            continue;
        }
        accepted += 1;
        let [r, g, b] = lab_to_srgb_unclamped(&lab);
        worst = worst.max(lab.delta_e(&srgb_to_lab(&RgbColor { r, g, b })));
    }
    let white = lab_to_srgb(&LabColor::new(100.0, 0.0, 0.0)).to_bytes();
    let black = lab_to_srgb(&LabColor::new(0.0, 0.0, 0.0)).to_bytes();
    let detail = format!("worst dE {worst:.3e} (need < 0.01), white {white:?}, black {black:?}");
    check(worst < 0.01 && white == [255; 3] && black == [0; 3], detail.clone())?;
    Ok(detail)
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = iris_config(dir.path());
    cfg.seed = 11;
    run_pipeline(&cfg).map_err(|e| e.to_string())?;
    let first = snapshot(dir.path());
    run_pipeline(&cfg).map_err(|e| e.to_string())?;
    check(snapshot(dir.path()) == first, "second pipeline run differs")?;

    for entry in fs::read_dir(dir.path()).unwrap() {
        fs::remove_file(entry.unwrap().path()).unwrap();
    }
    for stage in Stage::ALL {
        run_stage(stage, &cfg).map_err(|e| e.to_string())?;
    }
    let staged = snapshot(dir.path());
    let differing: Vec<&String> = first.keys().filter(|k| staged.get(*k) != first.get(*k)).collect();
    check(
        differing.is_empty() && staged.len() == first.len(),
        format!("stage-wise run differs in {differing:?}"),
    )?;
    Ok(format!(
        "{} files byte-identical across two runs and stage-wise execution",
        first.len()
    ))
}

fn sigma_selection() -> Outcome {
    let (data, _) = standardize(&samples::three_blobs(5)).unwrap();
    let (rows, cols) = (6, 7);
    let config = TrainConfig::for_grid(rows, cols);
    let selection = select_sigma(&data, rows, cols, &config).map_err(|e| e.to_string())?;
    let candidates = config.sigma_candidates.clone().unwrap();
    let mut best: Option<(f64, f64, SomGrid)> = None;
    for &s in &candidates {
        let cfg = TrainConfig {
            sigma_final: s,
            ..config.clone()
        };
        let grid = train(&data, rows, cols, &cfg).unwrap();
        let g = goodness(&grid, &data).unwrap();
        if best.as_ref().is_none_or(|(bg, _, _)| g < *bg) {
            best = Some((g, s, grid));
        }
    }
    let (g, s, grid) = best.unwrap();
    let detail = format!(
        "selected sigma {} (goodness {:.6}), exhaustive argmin {s} ({g:.6})",
        selection.sigma_final, selection.goodness
    );
    check(
        selection.sigma_final == s && selection.goodness == g && selection.grid == grid,
        detail.clone(),
    )?;
    Ok(detail)
}

fn smoke_9x9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let table = samples::indicator_table(0);
    let csv_path = dir.path().join("indicators.csv");
    write_csv(&table, fs::File::create(&csv_path).unwrap()).unwrap();
    let out = dir.path().join("out");
    let mut cfg = PipelineConfig::default();
    cfg.input.path = Some(csv_path);
    cfg.input.label_column = Some("label".into());
    cfg.input.class_column = Some("class".into());
    cfg.grid = "9x9".parse().unwrap();
    cfg.projection.method = ProjectionMethod::Lmds;
    cfg.color.plane = PlaneChoice::Builtin(GREEN_YELLOW_RED.into());
    cfg.output.dir = out.clone();

    let start = Instant::now();
    run_pipeline(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let som = fs::read_to_string(out.join(SOM_SVG)).unwrap();
    let scatter = fs::read_to_string(out.join(SCATTER_SVG)).unwrap();
    let swatch = fs::read_to_string(out.join(SWATCH_SVG)).unwrap();
    let grid = read_json::<GridFile>(&out.join(GRID_FILE)).to_grid().unwrap();
    let data = read_json::<DataFile>(&out.join(DATA_FILE)).matrix().unwrap();
    let mut occupied = assign(&grid, &data).unwrap();
    occupied.sort();
    occupied.dedup();

    let [su, sv] = cfg.render.swatch_steps;
    let counts = [
        ("unit", common::count_class(&som, "unit"), 81),
        ("marker", common::count_class(&som, "marker"), 207),
        ("label", common::count_class(&som, "label"), occupied.len()),
        ("background", common::count_class(&som, "background"), 1),
        ("dot", common::count_class(&scatter, "dot"), 81),
        ("swatch", common::count_class(&swatch, "swatch"), su * sv),
    ];
    for (what, found, expected) in counts {
        check(
            found == expected,
            format!("{found} {what} elements, expected {expected}"),
        )?;
    }
    for svg in [&som, &scatter, &swatch] {
        common::contained(svg)?;
    }
    let detail = format!("counts and viewBox containment hold, {elapsed:.2} s (need < 30)");
    check(elapsed < 30.0, detail.clone())?;
    Ok(detail)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("iris separation", iris_separation),
        ("exact-embedding recovery", exact_recovery),
        ("gradient suite", gradient_suite),
        ("Lloyd reduction", lloyd_reduction),
        ("gamut sweep", gamut_sweep),
        ("color anchors", color_anchors),
        ("Lab/sRGB round trip", lab_round_trip),
        ("determinism", determinism),
        ("sigma auto-selection", sigma_selection),
        ("9x9 smoke run", smoke_9x9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
