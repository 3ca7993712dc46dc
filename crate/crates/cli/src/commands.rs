use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use saucd::baselines::{baseline, Metric};
use saucd::distortion::{suite_specs, write_suite, DistortedMesh, DistortionType};
use saucd::eval::{
    correlation_report, simulate_study, write_table_csv, AnnotationSet, MeshDirectory,
    MetricScores, StudyConfig, StudyObject,
};
use saucd::laplacian::{build_laplacian, check_psd};
use saucd::mesh::{load_mesh, save_mesh, validate, MeshFormat};
use saucd::metric::{prepare_spectrum, spectrum_distance, weighted_spectrum_distance};
use saucd::spectral::{bandpass_reconstruct, compute_spectrum, fourier_basis, Spectrum};
use saucd::training::{kfold_evaluate, prepare_batches, train_weights, TrainConfig};
use saucd::{Mesh, MetricOptions, SpectrumWeights};

use crate::output::Outputs;
use crate::{Command, Format, MetricArgs};

pub fn run(command: Command) -> Result<()> {
    let mut out = Outputs::new();
    match command {
        Command::Spectrum {
            mesh,
            laplacian,
            prune,
            normalize,
            format,
            output,
        } => {
            let m = read_mesh(&mesh)?;
            let mut s = compute_spectrum(&m, laplacian.laplacian)?;
            if prune > 0.0 {
                s = s.prune_noise(prune)?;
            }
            if normalize {
                s = s.auc_normalize()?;
            }
            let bytes = spectrum_output(&s, &m, format)?;
            out.write(output.as_deref(), &bytes)?;
        }
        Command::Compare {
            test,
            gt,
            metric,
            weights,
            baselines,
            seed,
            format,
            output,
        } => {
            let options = metric_options(&metric)?;
            let weights = weights.map(SpectrumWeights::load).transpose()?;
            let metrics = baseline_metrics(&baselines, seed)?;
            let (t, g) = (read_mesh(&test)?, read_mesh(&gt)?);
            let (a, b) = rayon::join(
                || prepare_spectrum(&t, &options),
                || prepare_spectrum(&g, &options),
            );
            let (a, b) = (a?, b?);
            let mut values = vec![("saucd".to_string(), spectrum_distance(&a, &b, options.mode)?)];
            if let Some(w) = &weights {
                values.push((
                    "weighted_saucd".into(),
                    weighted_spectrum_distance(&a, &b, w, options.mode)?,
                ));
            }
            for m in &metrics {
                let v = m.score(&t, &g).with_context(|| m.name().to_string())?;
                values.push((m.name().to_string(), v));
            }
            let bytes = match format {
                Format::Json => {
                    let mut obj = Map::new();
                    obj.insert("test".into(), json!(test.display().to_string()));
                    obj.insert("gt".into(), json!(gt.display().to_string()));
                    obj.insert("options".into(), serde_json::to_value(options)?);
                    for (k, v) in values {
                        obj.insert(k, json!(v));
                    }
                    pretty(&Value::Object(obj))?
                }
                Format::Csv => {
                    let mut s = String::from("metric,value\n");
                    for (k, v) in values {
                        s.push_str(&format!("{k},{v}\n"));
                    }
                    s.into_bytes()
                }
            };
            out.write(output.as_deref(), &bytes)?;
        }
        Command::Filter {
            mesh,
            lo,
            hi,
            laplacian,
            output,
        } => {
            let m = read_mesh(&mesh)?;
            let basis = fourier_basis(&m, laplacian.laplacian)?;
            let filtered = bandpass_reconstruct(&m, &basis, lo, hi)?;
            out.track(&output);
            save_mesh(&filtered, &output, MeshFormat::Auto)?;
        }
        Command::Distort {
            mesh,
            output,
            seed,
            types,
            mesh_format,
        } => {
            let format: MeshFormat = mesh_format.parse()?;
            if format == MeshFormat::Auto {
                bail!("mesh format must be obj or ply");
            }
            let kinds = distortion_types(&types)?;
            let m = read_mesh(&mesh)?;
            if !validate(&m).spectral_ready {
                bail!("{} is not a closed manifold mesh without degenerate faces", mesh.display());
            }
            let suite = suite_specs(seed)
                .into_par_iter()
                .filter(|s| kinds.contains(&s.kind))
                .map(|spec| {
                    let mesh = spec.apply(&m).with_context(|| spec.label())?;
                    Ok(DistortedMesh { spec, mesh })
                })
                .collect::<Result<Vec<_>>>()?;
            out.create_dir(&output)?;
            let ext = if format == MeshFormat::Obj { "obj" } else { "ply" };
            for d in &suite {
                out.track(&output.join(format!("{}.{ext}", d.spec.label())));
            }
            out.track(&output.join("manifest.json"));
            write_suite(&output, &suite, format)?;
            eprintln!("wrote {} meshes to {}", suite.len(), output.display());
        }
        Command::Train {
            annotations,
            mesh_dir,
            metric,
            lambda_plcc,
            lambda_srocc,
            lambda_regu,
            learning_rate,
            iterations,
            temperature,
            seed,
            output,
            report,
        } => {
            let options = metric_options(&metric)?;
            let config = TrainConfig {
                lambda_plcc,
                lambda_srocc,
                lambda_regu,
                learning_rate,
                iterations,
                temperature,
                seed,
            };
            config.validate()?;
            let ann = AnnotationSet::load(&annotations)?;
            let batches = prepare_batches(&ann, &MeshDirectory::new(&mesh_dir), &options)?;
            let folds = report
                .as_ref()
                .map(|_| kfold_evaluate(&batches, &config, batches.len()))
                .transpose()?;
            let trained = train_weights(&batches, &config)?;
            out.write(Some(&output), (trained.weights.to_json() + "\n").as_bytes())?;
            if let (Some(path), Some(folds)) = (&report, &folds) {
                let mut buf = Vec::new();
                folds.write_csv(&mut buf)?;
                out.write(Some(path), &buf)?;
                eprintln!(
                    "held-out mean: plcc {:.4} srocc {:.4} krocc {:.4}",
                    folds.mean.plcc, folds.mean.srocc, folds.mean.krocc
                );
            }
            eprintln!(
                "final loss {:.6}, {} knots clamped at 0",
                trained.final_loss, trained.clamped
            );
        }
        Command::Evaluate {
            annotations,
            mesh_dir,
            metric,
            weights,
            baselines,
            seed,
            format,
            output,
        } => {
            let options = metric_options(&metric)?;
            let weights = weights.map(SpectrumWeights::load).transpose()?;
            let metrics = baseline_metrics(&baselines, seed)?;
            let ann = AnnotationSet::load(&annotations)?;
            let mos = ann.mos_table()?;
            let dir = MeshDirectory::new(&mesh_dir);
            let objects = mos.objects();
            let gts: HashMap<String, (Mesh, Spectrum)> = objects
                .par_iter()
                .map(|o| {
                    let m = dir.ground_truth(o)?;
                    let s = prepare_spectrum(&m, &options)?;
                    Ok((o.clone(), (m, s)))
                })
                .collect::<Result<_>>()?;
            let rows: Vec<Vec<f64>> = mos
                .rows()
                .par_iter()
                .map(|r| {
                    let (gm, gs) = &gts[&r.object];
                    let tm = dir.distorted(&r.object, &r.distortion)?;
                    let ts = prepare_spectrum(&tm, &options)?;
                    let mut v = vec![spectrum_distance(&ts, gs, options.mode)?];
                    if let Some(w) = &weights {
                        v.push(weighted_spectrum_distance(&ts, gs, w, options.mode)?);
                    }
                    for m in &metrics {
                        v.push(m.score(&tm, gm).with_context(|| {
                            format!("{} on {}/{}", m.name(), r.object, r.distortion)
                        })?);
                    }
                    Ok(v)
                })
                .collect::<Result<_>>()?;
            let mut names: Vec<(String, bool)> = vec![("saucd".into(), true)];
            if weights.is_some() {
                names.push(("weighted-saucd".into(), true));
            }
            names.extend(metrics.iter().map(|m| (m.name().to_string(), m.lower_is_better())));
            let mut reports = Vec::new();
            for (i, (name, lower)) in names.iter().enumerate() {
                let scores: MetricScores = mos
                    .rows()
                    .iter()
                    .zip(&rows)
                    .map(|(r, v)| ((r.object.clone(), r.distortion.clone()), v[i]))
                    .collect();
                reports.push(correlation_report(name, &scores, *lower, &mos)?);
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_table_csv(&reports, &mut buf)?;
                    buf
                }
                Format::Json => pretty(&serde_json::to_value(&reports)?)?,
            };
            out.write(output.as_deref(), &bytes)?;
        }
        Command::CheckPsd {
            mesh,
            laplacian,
            tolerance,
            output,
        } => {
            let m = read_mesh(&mesh)?;
            let l = build_laplacian(&m, laplacian.laplacian)?;
            let report = check_psd(&l, tolerance)?;
            let mut v = serde_json::to_value(report)?;
            v["laplacian"] = json!(laplacian.laplacian.to_string());
            v["vertices"] = json!(m.num_vertices());
            out.write(output.as_deref(), &pretty(&v)?)?;
        }
        Command::SimulateStudy {
            mesh_dir,
            metric,
            weights,
            subjects,
            rounds,
            materials,
            noise,
            seed,
            format,
            output,
        } => {
            let options = metric_options(&metric)?;
            let weights = weights.map(SpectrumWeights::load).transpose()?;
            let dir = MeshDirectory::new(&mesh_dir);
            let names = dir.objects()?;
            if names.is_empty() {
                bail!("no object directories with a gt mesh under {}", mesh_dir.display());
            }
            let objects = names
                .par_iter()
                .map(|o| {
                    let gt = prepare_spectrum(&dir.ground_truth(o)?, &options)?;
                    let items = dir
                        .distortions(o)?
                        .into_par_iter()
                        .map(|d| {
                            let ts = prepare_spectrum(&dir.distorted(o, &d)?, &options)?;
                            let dist = match &weights {
                                Some(w) => weighted_spectrum_distance(&ts, &gt, w, options.mode)?,
                                None => spectrum_distance(&ts, &gt, options.mode)?,
                            };
                            Ok((d, -dist))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(StudyObject {
                        object: o.clone(),
                        items,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let config = StudyConfig {
                subjects,
                materials,
                rounds,
                judge_noise: noise,
                seed,
            };
            let ann = simulate_study(&objects, &config)?;
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    ann.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => (ann.to_json() + "\n").into_bytes(),
            };
            out.write(output.as_deref(), &bytes)?;
        }
    }
    out.commit();
    Ok(())
}

fn read_mesh(path: &Path) -> Result<Mesh> {
    load_mesh(path, MeshFormat::Auto, false).with_context(|| format!("reading {}", path.display()))
}

fn metric_options(args: &MetricArgs) -> Result<MetricOptions> {
    let options = MetricOptions {
        prune: args.prune,
        normalize: !args.no_normalize,
        laplacian: args.laplacian.laplacian,
        ..MetricOptions::default()
    };
    options.validate()?;
    Ok(options)
}

fn baseline_metrics(names: &[String], seed: u64) -> Result<Vec<Box<dyn Metric>>> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| Ok(baseline(n.trim(), seed)?))
        .collect()
}

fn distortion_types(names: &[String]) -> Result<Vec<DistortionType>> {
    if names.is_empty() {
        return Ok(DistortionType::GENERATED.to_vec());
    }
    names
        .iter()
        .map(|n| {
            let t: DistortionType = n.trim().parse()?;
            if !DistortionType::GENERATED.contains(&t) {
                bail!("{t} meshes cannot be generated here");
            }
            Ok(t)
        })
        .collect()
}

fn pretty(v: &Value) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn spectrum_output(s: &Spectrum, m: &Mesh, format: Format) -> Result<Vec<u8>> {
    let auc = s.auc()?;
    let lambda_max = s.max_freq().unwrap_or(0.0);
    match format {
        Format::Csv => {
            eprintln!(
                "vertices {} entries {} auc {auc} lambda_max {lambda_max}",
                m.num_vertices(),
                s.len()
            );
            let mut buf = Vec::new();
            s.write_csv(&mut buf)?;
            Ok(buf)
        }
        Format::Json => pretty(&json!({
            "vertices": m.num_vertices(),
            "entries": s.len(),
            "auc": auc,
            "lambda_max": lambda_max,
            "normalized": s.is_normalized(),
            "lambda": s.freqs(),
            "amplitude": s.amps(),
        })),
    }
}
