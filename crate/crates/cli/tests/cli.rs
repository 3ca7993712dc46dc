use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use saucd::distortion::{taubin_smooth, white_noise, TAUBIN_LAMBDA, TAUBIN_MU};
use saucd::fixtures;
use saucd::mesh::{load_mesh, save_mesh, MeshFormat};
use saucd::spectral::{fourier_basis, mesh_spectrum};
use saucd::{LaplacianKind, Mesh};
use serde_json::Value;

fn saucd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saucd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = saucd(args);
    assert!(
        out.status.success(),
        "saucd {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = saucd(args);
    assert!(!out.status.success(), "saucd {args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

fn write(dir: &Path, name: &str, mesh: &Mesh) -> String {
    let p = dir.join(name);
    save_mesh(mesh, &p, MeshFormat::Auto).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Three objects with white-noise and smoothing variants at four levels.
fn mesh_dir(root: &Path) -> PathBuf {
    let dir = root.join("meshes");
    for (i, gt) in [
        fixtures::bumpy_sphere(2, 1),
        fixtures::bumpy_sphere(2, 2),
        fixtures::random_blob(162, 3),
    ]
    .into_iter()
    .enumerate()
    {
        let obj = dir.join(format!("obj{i}"));
        std::fs::create_dir_all(&obj).unwrap();
        write(&obj, "gt.obj", &gt);
        for (l, sigma) in [0.1, 0.2, 0.3, 0.5].into_iter().enumerate() {
            let d = white_noise(&gt, sigma, 10 * i as u64 + l as u64).unwrap();
            write(&obj, &format!("white-noise-{}.obj", l + 1), &d);
        }
        for (l, it) in [5, 20, 50, 200].into_iter().enumerate() {
            let d = taubin_smooth(&gt, it, TAUBIN_LAMBDA, TAUBIN_MU).unwrap();
            write(&obj, &format!("smoothing-{}.ply", l + 1), &d);
        }
    }
    dir
}

#[test]
fn spectrum_rows_and_normalization() {
    let tmp = tempfile::tempdir().unwrap();
    let tet = write(tmp.path(), "tet.obj", &fixtures::tetrahedron());
    let csv = ok(&["spectrum", &tet]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "lambda,amplitude");
    assert_eq!(lines.len(), 5);

    let json: Value = serde_json::from_str(&ok(&["spectrum", &tet, "--normalize", "--format", "json"])).unwrap();
    assert!((json["auc"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(json["normalized"], Value::Bool(true));

    let torus = fixtures::torus(1.0, 0.35, 40, 25);
    assert_eq!(torus.num_vertices(), 1000);
    let t = write(tmp.path(), "torus.obj", &torus);
    let pruned = ok(&["spectrum", &t, "--prune", "0.01"]);
    assert_eq!(pruned.lines().count() - 1, 990);
}

#[test]
fn compare_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = write(tmp.path(), "a.obj", &fixtures::bumpy_sphere(2, 4));
    let b = write(tmp.path(), "b.ply", &white_noise(&fixtures::bumpy_sphere(2, 4), 0.5, 1).unwrap());
    let same: Value = serde_json::from_str(&ok(&["compare", &a, &a])).unwrap();
    assert_eq!(same["saucd"].as_f64().unwrap(), 0.0);

    let ones = tmp.path().join("ones.json");
    std::fs::write(&ones, format!("{:?}", vec![1.0; 20])).unwrap();
    let r: Value = serde_json::from_str(&ok(&[
        "compare", &b, &a, "--weights", s(&ones), "--baselines", "chamfer,uhd",
    ]))
    .unwrap();
    let d = r["saucd"].as_f64().unwrap();
    assert!(d > 0.0);
    assert!((r["weighted_saucd"].as_f64().unwrap() - d).abs() <= 1e-12);
    assert!(r["chamfer"].as_f64().unwrap() > 0.0);
    assert!(r["uhd"].as_f64().unwrap() > 0.0);

    let csv = ok(&["compare", &b, &a, "--format", "csv", "--laplacian", "topology"]);
    assert!(csv.starts_with("metric,value\nsaucd,"));
    assert!(fails(&["compare", &b, &a, "--laplacian", "cotan"]).contains("negative frequency"));
    assert!(fails(&["compare", &a, &a, "--baselines", "ssfid"]).contains("ssfid"));
    assert!(fails(&["compare", &a, &s(&tmp.path().join("nope.obj"))]).contains("nope.obj"));
}

#[test]
fn filter_round_trip_low_pass_and_empty_band() {
    let tmp = tempfile::tempdir().unwrap();
    let noisy = white_noise(&fixtures::icosphere(2), 1.0, 2).unwrap();
    let input = write(tmp.path(), "noisy.obj", &noisy);
    let full = tmp.path().join("full.obj");
    ok(&["filter", &input, "--lo", "0", "--hi", "1e30", "-o", s(&full)]);
    let back = load_mesh(&full, MeshFormat::Auto, false).unwrap();
    for (p, q) in back.vertices().iter().zip(noisy.vertices()) {
        for k in 0..3 {
            assert!((p[k] - q[k]).abs() < 1e-8);
        }
    }

    let basis = fourier_basis(&noisy, LaplacianKind::Revised).unwrap();
    let cut = basis.eigenvalues()[basis.dim() / 2];
    let low = tmp.path().join("low.obj");
    ok(&["filter", &input, "--lo", "0", "--hi", &cut.to_string(), "-o", s(&low)]);
    let low = load_mesh(&low, MeshFormat::Auto, false).unwrap();
    let tail = |m: &Mesh| {
        let sp = mesh_spectrum(&m.centered(), &basis).unwrap();
        sp.amps()[basis.dim() * 3 / 4..].iter().map(|a| a * a).sum::<f64>()
    };
    assert!(tail(&low) < 1e-12 * tail(&noisy).max(1.0));
    assert!(tail(&noisy) > 1e-6);

    let empty = tmp.path().join("empty.obj");
    fails(&["filter", &input, "--lo", "1e20", "--hi", "1e30", "-o", s(&empty)]);
    assert!(!empty.exists());
}

#[test]
fn distort_suite_is_complete_and_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let m = write(tmp.path(), "m.obj", &fixtures::bumpy_sphere(3, 6));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&["distort", &m, "-o", s(&a), "--seed", "5"]);
    ok(&["distort", &m, "-o", s(&b), "--seed", "5"]);
    let manifest: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.len(), 24);
    for e in &manifest {
        let f = e["file"].as_str().unwrap();
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }

    let sub = tmp.path().join("sub");
    ok(&["distort", &m, "-o", s(&sub), "--types", "impulse,smoothing", "--mesh-format", "ply"]);
    assert_eq!(std::fs::read_dir(&sub).unwrap().count(), 9);
    assert!(sub.join("smoothing-4.ply").exists());

    let bad = tmp.path().join("bad");
    assert!(fails(&["distort", &m, "-o", s(&bad), "--types", "blur"]).contains("blur"));
    fails(&["distort", &m, "-o", s(&bad), "--types", "poisson-reconstruction"]);
    assert!(!bad.exists());
}

#[test]
fn study_train_and_evaluate_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = mesh_dir(tmp.path());
    let ann = tmp.path().join("ann.csv");
    ok(&["simulate-study", s(&dir), "--subjects", "4", "--noise", "0.002", "--seed", "3", "-o", s(&ann)]);
    let again = ok(&["simulate-study", s(&dir), "--subjects", "4", "--noise", "0.002", "--seed", "3"]);
    assert_eq!(std::fs::read_to_string(&ann).unwrap(), again);
    assert_eq!(again.lines().count(), 1 + 3 * 8 * 4);

    let table = ok(&["evaluate", s(&ann), s(&dir), "--baselines", "chamfer,fscore,iou"]);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "coefficient,metric,obj0,obj1,obj2,overall");
    assert_eq!(rows.len(), 1 + 3 * 4);
    assert!(rows[1].starts_with("PLCC,saucd,"));
    assert!(rows.iter().any(|r| r.starts_with("KROCC,iou,")));
    let srocc: f64 = rows[5].rsplit(',').next().unwrap().parse().unwrap();
    assert!(rows[5].starts_with("SROCC,saucd,"));
    assert!(srocc > 0.5, "{srocc}");

    let weights = tmp.path().join("w.json");
    let report = tmp.path().join("folds.csv");
    ok(&[
        "train", s(&ann), s(&dir), "--lambda-regu", "1e4", "--iterations", "30",
        "-o", s(&weights), "--report", s(&report),
    ]);
    let w: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(&weights).unwrap()).unwrap();
    assert_eq!(w.len(), 20);
    assert!(w.iter().all(|x| (x - 1.0).abs() <= 0.01), "{w:?}");
    let folds = std::fs::read_to_string(&report).unwrap();
    assert_eq!(folds.lines().next().unwrap(), "fold,object,plcc,srocc,krocc");
    assert_eq!(folds.lines().count(), 4);

    let weighted = ok(&["evaluate", s(&ann), s(&dir), "--weights", s(&weights), "--format", "json"]);
    let v: Value = serde_json::from_str(&weighted).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["metric"], "weighted-saucd");
}

#[test]
fn failures_name_the_problem_and_leave_nothing_behind() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = mesh_dir(tmp.path());
    let ann = tmp.path().join("ann.csv");
    ok(&["simulate-study", s(&dir), "--subjects", "2", "-o", s(&ann)]);
    let moved = dir.join("obj1/smoothing-3.ply");
    let kept = tmp.path().join("kept.ply");
    std::fs::rename(&moved, &kept).unwrap();
    let weights = tmp.path().join("w.json");
    let err = fails(&["train", s(&ann), s(&dir), "-o", s(&weights)]);
    assert!(err.contains("smoothing-3.obj"), "{err}");
    assert!(!weights.exists());
    std::fs::rename(&kept, &moved).unwrap();

    let report = tmp.path().join("missing-dir/folds.csv");
    fails(&[
        "train", s(&ann), s(&dir), "--iterations", "2", "-o", s(&weights), "--report", s(&report),
    ]);
    assert!(!weights.exists());

    let out = tmp.path().join("table.csv");
    std::fs::remove_file(dir.join("obj2/gt.obj")).unwrap();
    fails(&["evaluate", s(&ann), s(&dir), "-o", s(&out)]);
    assert!(!out.exists());
}

#[test]
fn check_psd_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let c = write(tmp.path(), "c.obj", &saucd::laplacian::appendix_c_mesh());
    let revised: Value = serde_json::from_str(&ok(&["check-psd", &c])).unwrap();
    assert_eq!(revised["passed"], Value::Bool(true));
    let cotan: Value = serde_json::from_str(&ok(&["check-psd", &c, "--laplacian", "cotan"])).unwrap();
    assert_eq!(cotan["passed"], Value::Bool(false));
    assert!(cotan["min_eigenvalue"].as_f64().unwrap() < -1e-3);
    fails(&["check-psd", &c, "--laplacian", "fancy"]);
}

#[test]
fn thread_cap_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let a = write(tmp.path(), "a.obj", &fixtures::bumpy_sphere(2, 8));
    let b = write(tmp.path(), "b.obj", &white_noise(&fixtures::bumpy_sphere(2, 8), 0.3, 4).unwrap());
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_saucd"))
            .args(["compare", &b, &a, "--baselines", "fscore"])
            .env("SAUCD_THREADS", threads)
            .output()
            .unwrap();
        (out.status.success(), out.stdout)
    };
    let (ok1, one) = run("1");
    let (ok4, four) = run("4");
    assert!(ok1 && ok4);
    assert_eq!(one, four);
    assert!(!run("zero").0);
}
