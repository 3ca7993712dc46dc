//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Pass criterion numbers as arguments
//! to run a subset, e.g. `cargo test -p saucd --test acceptance -- 2 5`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use saucd::distortion::{distortion_suite, taubin_smooth, white_noise, TAUBIN_LAMBDA, TAUBIN_MU};
use saucd::eval::{confidence_interval, iqr_filter, krocc, plcc, srocc, swiss_tournament};
use saucd::fixtures::{
    bumpy_sphere, metric_fixtures, random_blob, random_convex_hull, random_rotation,
    shape_fixtures, torus,
};
use saucd::laplacian::{appendix_c_mesh, build_laplacian, check_psd};
use saucd::metric::{
    prepare_spectrum, segment_area, spectrum_distance, weight_decomposition,
    weighted_spectrum_distance, NUM_KNOTS,
};
use saucd::training::{composite_loss, kfold_evaluate, ObjectBatch, TrainConfig};
use saucd::{saucd, weighted_saucd, LaplacianKind, Mesh, MetricOptions, Spectrum, SpectrumWeights};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn all_fixtures() -> Vec<(&'static str, Mesh)> {
    metric_fixtures().into_iter().chain(shape_fixtures()).collect()
}

fn rotate(m: &Mesh, r: &[[f64; 3]; 3]) -> Mesh {
    m.map_vertices(|p| {
        [0, 1, 2].map(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2])
    })
    .unwrap()
}

fn scaled(m: &Mesh, s: f64) -> Mesh {
    m.map_vertices(|p| p.map(|x| x * s)).unwrap()
}

fn distance_to(gt: &Spectrum, m: &Mesh, opts: &MetricOptions) -> f64 {
    spectrum_distance(&prepare_spectrum(m, opts).unwrap(), gt, opts.mode).unwrap()
}

// 1

fn psd_theorem() -> Outcome {
    let mut meshes: Vec<(String, Mesh)> = all_fixtures()
        .into_iter()
        .map(|(n, m)| (n.to_string(), m))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in 0..50u64 {
        let n = rng.random_range(20..=2000);
        meshes.push((format!("hull(n={n},seed={s})"), random_convex_hull(n, s)));
    }
    for s in 0..50u64 {
        let n = [12, 42, 162, 642][s as usize % 4];
        let m = if s % 2 == 0 {
            random_blob(n, s)
        } else {
            white_noise(&bumpy_sphere(s as usize % 4, s), 0.5, s).unwrap()
        };
        meshes.push((format!("smooth(n={},seed={s})", m.num_vertices()), m));
    }
    let mut worst = f64::INFINITY;
    let mut worst_name = String::new();
    let mut failures = Vec::new();
    let mut largest = 0;
    for (name, m) in &meshes {
        largest = largest.max(m.num_vertices());
        let r = match build_laplacian(m, LaplacianKind::Revised).and_then(|l| check_psd(&l, 1e-8)) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let ratio = r.min_eigenvalue / r.gershgorin_bound;
        if ratio < worst {
            worst = ratio;
            worst_name = name.clone();
        }
        if !r.passed || r.max_eigenvalue > r.gershgorin_bound * (1.0 + 1e-12) {
            failures.push(format!("{name}: {r:?}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{} meshes (largest N = {largest}), worst min eigenvalue / (2 max L_ii) = {worst:.3e} on {worst_name}{}",
            meshes.len(),
            if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
        ),
    )
}

// 2

/// Cyclic Jacobi eigenvalues of a small symmetric matrix, ascending.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn counterexample() -> Outcome {
    let r3 = 3f64.sqrt();
    let a0 = (4.0 - r3) / 8.0;
    let a3 = (3.0 * r3 - 2.0) / 8.0;
    let disc = (2.0 * (a0 * a0 + a3 * a3)).sqrt();
    let mut expected = [
        (2.0 - 2.0 * r3 / 3.0) / a0,
        (2.0 + 2.0 * r3) / a3,
        (a0 + a3 - disc) / (a0 * a3),
        (a0 + a3 + disc) / (a0 * a3),
    ];
    let lambda2 = expected[2];
    expected.sort_by(f64::total_cmp);
    let mesh = appendix_c_mesh();
    let l = build_laplacian(&mesh, LaplacianKind::Cotan).unwrap();
    let dense: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| l.get(i, j)).collect()).collect();
    let got = jacobi_eigenvalues(dense);
    let err = got
        .iter()
        .zip(&expected)
        .map(|(g, e)| (g - e).abs())
        .fold(0.0, f64::max);
    let library = check_psd(&l, 1e-8).unwrap();
    let revised = check_psd(&build_laplacian(&mesh, LaplacianKind::Revised).unwrap(), 1e-8).unwrap();
    let passed = err <= 1e-9
        && lambda2 < -1e-3
        && (library.min_eigenvalue - expected[0]).abs() <= 1e-9
        && !library.passed
        && revised.passed;
    Outcome::new(
        passed,
        format!(
            "cotan eigenvalues {got:.9?}, max error {err:.2e}, lambda_2 = {lambda2:.6}; revised min {:.3e} (bound {:.3})",
            revised.min_eigenvalue, revised.gershgorin_bound
        ),
    )
}

// 3

fn metric_identities() -> Outcome {
    let opts = MetricOptions::default();
    let mut worst = [0.0f64; 4];
    let mut failures = Vec::new();
    for (name, m) in all_fixtures() {
        let gt = prepare_spectrum(&m, &opts).unwrap();
        let same = saucd(&m, &m, &opts).unwrap();
        let noisy = white_noise(&m, 0.5, 7).unwrap();
        let asym = (saucd(&noisy, &m, &opts).unwrap() - saucd(&m, &noisy, &opts).unwrap()).abs();
        let sc = [0.1, 2.0, 10.0]
            .iter()
            .map(|&s| distance_to(&gt, &scaled(&m, s), &opts))
            .fold(0.0, f64::max);
        let rot = (0..20u64)
            .map(|s| distance_to(&gt, &rotate(&m, &random_rotation(1000 + s)), &opts))
            .fold(0.0, f64::max);
        let vals = [same, asym, sc, rot];
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
        if same > 1e-9 || asym > 1e-12 || sc > 1e-6 || rot > 1e-6 {
            failures.push(format!("{name}: {vals:?}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "worst identity {:.2e}, asymmetry {:.2e}, scale {:.2e}, rotation {:.2e}{}",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
        ),
    )
}

// 4

/// Linear interpolation clamped to the end values outside the support.
fn clamped_interp(x: &[f64], y: &[f64], t: f64) -> f64 {
    let q = x.partition_point(|&v| v <= t);
    if q == 0 {
        y[0]
    } else if q == x.len() {
        y[x.len() - 1]
    } else {
        let (x0, x1) = (x[q - 1], x[q]);
        y[q - 1] + (y[q] - y[q - 1]) * (t - x0) / (x1 - x0)
    }
}

fn dense_trapezoid(a: &Spectrum, b: &Spectrum, points: usize) -> f64 {
    let lo = a.freqs()[0].min(b.freqs()[0]);
    let hi = a.freqs().last().unwrap().max(*b.freqs().last().unwrap());
    let h = (hi - lo) / (points - 1) as f64;
    let f = |i: usize| {
        let t = if i == points - 1 { hi } else { lo + h * i as f64 };
        (clamped_interp(a.freqs(), a.amps(), t) - clamped_interp(b.freqs(), b.amps(), t)).abs()
    };
    let inner: f64 = (1..points - 1).map(f).sum();
    h * (inner + 0.5 * (f(0) + f(points - 1)))
}

fn discretization_oracle() -> Outcome {
    let opts = MetricOptions::default();
    let mut worst = 0.0f64;
    for s in 0..20u64 {
        let (a, b) = if s % 2 == 0 {
            let gt = random_blob(162, s);
            (white_noise(&gt, 0.4, s + 100).unwrap(), gt)
        } else {
            (random_convex_hull(60 + 7 * s as usize, s), random_convex_hull(90 + 3 * s as usize, s + 50))
        };
        let (sa, sb) = (prepare_spectrum(&a, &opts).unwrap(), prepare_spectrum(&b, &opts).unwrap());
        let d = saucd(&a, &b, &opts).unwrap();
        let oracle = dense_trapezoid(&sa, &sb, 1_000_000);
        worst = worst.max((d - oracle).abs() / oracle.abs());
    }
    // trapezoid, triangle, crossing at the midpoint, then a few more exact
    // binary fractions
    let cases = [
        ((1.0, 1.0, 1.0), 1.0),
        ((2.0, 0.0, 1.0), 1.0),
        ((1.0, -1.0, 1.0), 0.5),
        ((1.0, 3.0, 2.0), 4.0),
        ((2.0, -2.0, 1.0), 1.0),
        ((-1.0, -3.0, 0.5), 1.0),
        ((3.0, -1.0, 2.0), 2.5),
    ];
    let exact = cases
        .iter()
        .all(|&((p, c, dl), want)| segment_area(p, c, dl) == want);
    Outcome::new(
        worst <= 1e-5 && exact,
        format!("20 pairs, worst relative error vs 1e6-point trapezoid {worst:.2e}; segment cases exact: {exact}"),
    )
}

// 5

fn weighted_reduction() -> Outcome {
    let opts = MetricOptions::default();
    let mut worst_one = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for (name, gt) in all_fixtures() {
        if name == "appendix_c" {
            continue;
        }
        let test = white_noise(&gt, 0.5, 3).unwrap();
        let d = saucd(&test, &gt, &opts).unwrap();
        let w1 = weighted_saucd(&test, &gt, &SpectrumWeights::ones(), &opts).unwrap();
        worst_one = worst_one.max((w1 - d).abs());
        for c in [0.5, 3.0, 17.0] {
            let wc = weighted_saucd(&test, &gt, &SpectrumWeights::constant(c).unwrap(), &opts).unwrap();
            worst_ratio = worst_ratio.max((wc / d - c).abs());
        }
    }
    Outcome::new(
        worst_one <= 1e-12 && worst_ratio <= 1e-12,
        format!("|w=1 - saucd| {worst_one:.2e}, |ratio - c| {worst_ratio:.2e}"),
    )
}

// 6

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va * vb).sqrt()
}

fn kendall_pairs(m: &[f64], h: &[f64]) -> f64 {
    let n = m.len();
    let (mut c, mut d) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let p = (m[i] - m[j]) * (h[i] - h[j]);
            if p > 0.0 {
                c += 1;
            } else if p < 0.0 {
                d += 1;
            }
        }
    }
    (c - d) as f64 / (n * (n - 1) / 2) as f64
}

fn plain_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    for (pos, &i) in idx.iter().enumerate() {
        r[i] = (pos + 1) as f64;
    }
    r
}

fn correlation_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut kendall_mismatch = 0;
    let mut worst_spearman = 0.0f64;
    for trial in 0..1000 {
        let n = rng.random_range(2..60);
        // every other trial draws from a small alphabet so ties are common
        let draw = |rng: &mut ChaCha8Rng| {
            if trial % 2 == 0 {
                rng.random_range(0..5) as f64
            } else {
                rng.random::<f64>()
            }
        };
        let m: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let h: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        if krocc(&m, &h).unwrap() != kendall_pairs(&m, &h) {
            kendall_mismatch += 1;
        }
        if trial % 2 == 1 && n >= 3 {
            let s = srocc(&m, &h).unwrap();
            worst_spearman = worst_spearman.max((s - pearson(&plain_ranks(&m), &plain_ranks(&h))).abs());
        }
    }
    let (m, h) = ([1.0, 2.0, 3.0, 4.0], [1.0, 3.0, 2.0, 4.0]);
    let (p, s, k) = (plcc(&m, &h).unwrap(), srocc(&m, &h).unwrap(), krocc(&m, &h).unwrap());
    let worked = (p - 0.8).abs() <= 1e-12 && (s - 0.8).abs() <= 1e-12 && (k - 2.0 / 3.0).abs() <= 1e-12;
    Outcome::new(
        kendall_mismatch == 0 && worst_spearman <= 1e-12 && worked,
        format!(
            "KROCC mismatches {kendall_mismatch}/1000, worst |SROCC - PLCC(ranks)| {worst_spearman:.2e}, worked example ({p}, {s}, {k})"
        ),
    )
}

// 7

fn statistics() -> Outcome {
    let kept = iqr_filter(&[1.0, 2.0, 2.0, 3.0, 100.0]);
    let iqr_ok = kept == [1.0, 2.0, 2.0, 3.0];
    // 1.96 * sample std / sqrt(N), with the std worked by hand
    let cases: [(&[f64], f64); 3] = [
        (&[1.0, 2.0, 3.0, 4.0, 5.0], 1.96 * (2.5f64).sqrt() / 5f64.sqrt()),
        (&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0], 1.96 * (32.0f64 / 7.0).sqrt() / 8f64.sqrt()),
        (&[1.0, 2.0], 0.98),
    ];
    let ci_err = cases
        .iter()
        .map(|(x, want)| (confidence_interval(x).unwrap() - want).abs())
        .fold(0.0, f64::max);
    let mut swiss_bad = 0;
    for seed in 0..100 {
        let scores = swiss_tournament(28, 6, seed, |a, b| a.max(b)).unwrap();
        let total: u32 = scores.iter().sum();
        if total != 6 * 28 / 2 || scores[27] != 6 || scores[0] != 0 {
            swiss_bad += 1;
        }
    }
    Outcome::new(
        iqr_ok && ci_err <= 1e-9 && swiss_bad == 0,
        format!("iqr kept {kept:?}, CI max error {ci_err:.2e}, tournament violations {swiss_bad}/100"),
    )
}

// 8

fn random_batch(rng: &mut ChaCha8Rng, objects: usize) -> Vec<ObjectBatch> {
    (0..objects)
        .map(|o| {
            let rows = rng.random_range(6..25);
            ObjectBatch {
                object: format!("obj{o}"),
                distortions: (0..rows).map(|r| format!("d{r}")).collect(),
                bases: (0..rows)
                    .map(|_| std::array::from_fn(|_| rng.random_range(0.0..0.1)))
                    .collect(),
                scores: (0..rows).map(|_| rng.random_range(0.0..6.0)).collect(),
            }
        })
        .collect()
}

fn gradient_check() -> Outcome {
    let config = TrainConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let objects = rng.random_range(1..5);
        let batches = random_batch(&mut rng, objects);
        let w: [f64; NUM_KNOTS] = std::array::from_fn(|_| rng.random_range(0.3..2.0));
        let (_, grad) = composite_loss(&batches, &w, &config).unwrap();
        for k in 0..NUM_KNOTS {
            let (mut wp, mut wm) = (w, w);
            wp[k] += h;
            wm[k] -= h;
            let fd = (composite_loss(&batches, &wp, &config).unwrap().0
                - composite_loss(&batches, &wm, &config).unwrap().0)
                / (2.0 * h);
            worst = worst.max((fd - grad[k]).abs());
        }
    }
    Outcome::new(worst <= 1e-4, format!("10 batches x 20 knots, max |analytic - central FD| {worst:.2e}"))
}

// 9

fn hidden_knots() -> [f64; NUM_KNOTS] {
    std::array::from_fn(|k| 0.3 + 1.7 * (-(k as f64) / 5.0).exp())
}

fn training_recovery() -> Outcome {
    let opts = MetricOptions::default();
    let hidden = SpectrumWeights::new(&hidden_knots()).unwrap();
    let objects: Vec<(String, Mesh)> = (0..6u64)
        .map(|s| (format!("bumpy{s}"), bumpy_sphere(3, 40 + s)))
        .chain((0..6u64).map(|s| (format!("blob{s}"), random_blob(642, 60 + s))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut dual_route = 0.0f64;
    let mut batches = Vec::new();
    for (o, (name, gt_mesh)) in objects.iter().enumerate() {
        let gt = prepare_spectrum(gt_mesh, &opts).unwrap();
        let suite = distortion_suite(gt_mesh, o as u64).unwrap();
        let mut bases = Vec::new();
        let mut latent = Vec::new();
        let mut labels = Vec::new();
        for d in &suite {
            let test = prepare_spectrum(&d.mesh, &opts).unwrap();
            let b = weight_decomposition(&test, &gt, opts.mode).unwrap();
            let direct = weighted_spectrum_distance(&test, &gt, &hidden, opts.mode).unwrap();
            let via_basis: f64 = b.iter().zip(hidden.values()).map(|(x, w)| x * w).sum();
            dual_route = dual_route.max((direct - via_basis).abs() / direct.abs().max(1e-300));
            bases.push(b);
            latent.push(-direct);
            labels.push(d.spec.label());
        }
        let mean = latent.iter().sum::<f64>() / latent.len() as f64;
        let std = (latent.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (latent.len() - 1) as f64).sqrt();
        let noise = Normal::new(0.0, 0.05 * std).unwrap();
        batches.push(ObjectBatch {
            object: name.clone(),
            distortions: labels,
            bases,
            scores: latent.iter().map(|x| x + noise.sample(&mut rng)).collect(),
        });
    }
    let report = kfold_evaluate(&batches, &TrainConfig::default(), 12).unwrap();
    let stiff = TrainConfig {
        lambda_regu: 1e4,
        ..TrainConfig::default()
    };
    let anchored = kfold_evaluate(&batches, &stiff, 12).unwrap();
    let deviation = anchored
        .folds
        .iter()
        .flat_map(|f| f.weights.values().iter().map(|w| (w - 1.0).abs()))
        .fold(0.0, f64::max);
    Outcome::new(
        report.mean.srocc >= 0.9 && deviation <= 0.01 && dual_route <= 1e-12,
        format!(
            "12 objects x 24 distortions, held-out mean SROCC {:.4} (PLCC {:.4}, KROCC {:.4}); lambda_r = 1e4 max |w - 1| {deviation:.2e}; basis vs direct {dual_route:.1e}",
            report.mean.srocc, report.mean.plcc, report.mean.krocc
        ),
    )
}

// 10

fn distortion_monotonicity() -> Outcome {
    let opts = MetricOptions::default();
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (name, m) in all_fixtures() {
        let gt = match prepare_spectrum(&m, &opts) {
            Ok(gt) => gt,
            Err(e) => {
                all_ok = false;
                lines.push(format!("{name}: {e}"));
                continue;
            }
        };
        let dist = |mesh: saucd::Result<Mesh>| -> Result<f64, String> {
            let mesh = mesh.map_err(|e| e.to_string())?;
            let s = prepare_spectrum(&mesh, &opts).map_err(|e| e.to_string())?;
            spectrum_distance(&s, &gt, opts.mode).map_err(|e| e.to_string())
        };
        let noise: Result<Vec<f64>, String> =
            [0.1, 0.2, 0.3, 0.5].iter().map(|&s| dist(white_noise(&m, s, 10))).collect();
        let smooth: Result<Vec<f64>, String> = [5, 20, 50, 200]
            .iter()
            .map(|&it| dist(taubin_smooth(&m, it, TAUBIN_LAMBDA, TAUBIN_MU)))
            .collect();
        let increasing = |v: &Result<Vec<f64>, String>| v.as_ref().is_ok_and(|v| v.windows(2).all(|w| w[1] > w[0]));
        let ok = increasing(&noise) && increasing(&smooth);
        all_ok &= ok;
        let show = |v: &Result<Vec<f64>, String>| match v {
            Ok(v) => format!("{:.4?}", v),
            Err(e) => format!("error: {e}"),
        };
        lines.push(format!(
            "{} {name}: noise {} smoothing {}",
            if ok { "ok " } else { "BAD" },
            show(&noise),
            show(&smooth)
        ));
    }
    Outcome::new(all_ok, format!("\n         {}", lines.join("\n         ")))
}

// 11

fn throughput() -> Outcome {
    let gt = torus(1.0, 0.35, 100, 50);
    let test = white_noise(&gt, 0.3, 11).unwrap();
    let start = Instant::now();
    let d = saucd(&test, &gt, &MetricOptions::default()).unwrap();
    let t = start.elapsed();
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    Outcome::new(
        t < Duration::from_secs(60),
        format!(
            "N = {} vs {}, saucd {d:.5} in {:.1} s on {cores} core(s)",
            test.num_vertices(),
            gt.num_vertices(),
            t.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "revised Laplacian is PSD", budget: Some(Duration::from_secs(300)), run: psd_theorem },
        Criterion { id: 2, title: "cotan counterexample eigenvalues", budget: Some(Duration::from_secs(1)), run: counterexample },
        Criterion { id: 3, title: "metric identities", budget: Some(Duration::from_secs(120)), run: metric_identities },
        Criterion { id: 4, title: "discretization oracle", budget: Some(Duration::from_secs(300)), run: discretization_oracle },
        Criterion { id: 5, title: "weighted reduction", budget: None, run: weighted_reduction },
        Criterion { id: 6, title: "correlation oracles", budget: None, run: correlation_oracles },
        Criterion { id: 7, title: "statistics", budget: None, run: statistics },
        Criterion { id: 8, title: "loss gradient check", budget: Some(Duration::from_secs(60)), run: gradient_check },
        Criterion { id: 9, title: "training recovery", budget: Some(Duration::from_secs(600)), run: training_recovery },
        Criterion { id: 10, title: "distortion monotonicity", budget: None, run: distortion_monotonicity },
        Criterion { id: 11, title: "5000-vertex compare throughput", budget: None, run: throughput },
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in criteria.iter().filter(|c| selected.is_empty() || selected.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let passed = outcome.passed && in_time;
        let timing = match c.budget {
            Some(b) => format!("{:.2} s, limit {} s", elapsed.as_secs_f64(), b.as_secs_f64()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        println!(
            "[{}] {:>2} {}: {} ({timing})",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            outcome.detail
        );
        ran += 1;
        failed += usize::from(!passed);
    }
    if selected.is_empty() || selected.contains(&12) {
        println!(
            "[DOC ] 12 reference correlations on a user-supplied 12-object annotation set: data-dependent, not asserted (run `saucd evaluate`)"
        );
    }
    println!("{} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
