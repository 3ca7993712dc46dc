//! Learning the 20 frequency weights from human scores.
//!
//! Weighted SAUCD is linear in the knot values, so every mesh pair is
//! reduced once to its per-knot decomposition ([`ObjectBatch`]) and the
//! descent only re-weights those vectors. The loss mixes a PLCC term, a
//! soft-rank SROCC term and a pull toward all-ones; both correlation terms
//! are minimized toward perfect anti-correlation between distance and
//! score.

mod loss;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use loss::{composite_loss, correlation_loss, soft_rank, soft_rank_backward, ObjectBatch};

use crate::eval::{AnnotationSet, Correlations, MeshDirectory};
use crate::metric::{prepare_spectrum, weight_decomposition, MetricOptions, NUM_KNOTS};
use crate::{Error, Result, SpectrumWeights};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lambda_plcc: f64,
    pub lambda_srocc: f64,
    pub lambda_regu: f64,
    /// Initial step of each backtracking line search.
    pub learning_rate: f64,
    pub iterations: usize,
    pub temperature: f64,
    /// Recorded with the results; the descent itself is deterministic.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda_plcc: 0.1,
            lambda_srocc: 10.0,
            lambda_regu: 1.0,
            learning_rate: 1.0,
            iterations: 200,
            temperature: 0.1,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_plcc", self.lambda_plcc),
            ("lambda_srocc", self.lambda_srocc),
            ("lambda_regu", self.lambda_regu),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !(self.temperature > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be > 0, got {}",
                self.temperature
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub weights: SpectrumWeights,
    /// Loss before the first step and after every accepted step.
    pub history: Vec<f64>,
    /// Loss of the released (clamped) weights.
    pub final_loss: f64,
    /// Knots that were negative before the final clamp.
    pub clamped: usize,
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Gradient descent from all-ones with backtracking line search, then a
/// clamp of negative knots to 0.
pub fn train_weights(batches: &[ObjectBatch], config: &TrainConfig) -> Result<TrainResult> {
    config.validate()?;
    if batches.is_empty() {
        return Err(Error::InvalidArgument("no training objects".into()));
    }
    if let Some(b) = batches.iter().find(|b| b.len() < 3) {
        return Err(Error::Statistic(format!(
            "object {} has {} scored distortions, need at least 3",
            b.object,
            b.len()
        )));
    }
    let mut w = [1.0; NUM_KNOTS];
    let (mut loss, mut grad) = composite_loss(batches, &w, config)?;
    let mut history = vec![loss];
    let mut step = config.learning_rate;
    for _ in 0..config.iterations {
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2 == 0.0 {
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let cand: [f64; NUM_KNOTS] = std::array::from_fn(|k| w[k] - step * grad[k]);
            if let Ok((l, g)) = composite_loss(batches, &cand, config) {
                if l <= loss - ARMIJO * step * g2 {
                    accepted = Some((cand, l, g));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((cand, l, g)) = accepted else { break };
        w = cand;
        loss = l;
        grad = g;
        history.push(loss);
        // let the next search start a little longer than this one
        step = (step * 2.0).min(config.learning_rate);
    }
    let clamped = w.iter().filter(|&&x| x < 0.0).count();
    for x in &mut w {
        *x = x.max(0.0);
    }
    let final_loss = composite_loss(batches, &w, config)?.0;
    Ok(TrainResult {
        weights: SpectrumWeights::new(&w)?,
        history,
        final_loss,
        clamped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub object: String,
    pub weights: SpectrumWeights,
    /// Held-out agreement of the negated weighted distances with the
    /// scores.
    pub correlations: Correlations,
    pub clamped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KFoldReport {
    pub folds: Vec<FoldResult>,
    pub mean_weights: SpectrumWeights,
    pub mean: Correlations,
}

impl KFoldReport {
    /// `fold,object,plcc,srocc,krocc`.
    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["fold", "object", "plcc", "srocc", "krocc"])?;
        for f in &self.folds {
            w.write_record([
                f.fold.to_string(),
                f.object.clone(),
                f.correlations.plcc.to_string(),
                f.correlations.srocc.to_string(),
                f.correlations.krocc.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Leave-one-object-out: fold `i` trains on every batch except `i` and
/// tests on `i`. `k` must equal the number of objects.
pub fn kfold_evaluate(batches: &[ObjectBatch], config: &TrainConfig, k: usize) -> Result<KFoldReport> {
    if k != batches.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} but there are {} objects",
            batches.len()
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument("k-fold needs at least 2 objects".into()));
    }
    let folds = (0..k)
        .into_par_iter()
        .map(|i| {
            let train: Vec<ObjectBatch> = batches
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| b.clone())
                .collect();
            let result = train_weights(&train, config)?;
            let test = &batches[i];
            let neg: Vec<f64> = test
                .distances(result.weights.values())
                .iter()
                .map(|d| -d)
                .collect();
            let correlations = Correlations::between(&neg, &test.scores)
                .map_err(|e| Error::Statistic(format!("fold {i} ({}): {e}", test.object)))?;
            Ok(FoldResult {
                fold: i,
                object: test.object.clone(),
                weights: result.weights,
                correlations,
                clamped: result.clamped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mean_w = [0.0; NUM_KNOTS];
    for f in &folds {
        for (m, w) in mean_w.iter_mut().zip(f.weights.values()) {
            *m += w / k as f64;
        }
    }
    let mean = Correlations::mean(&folds.iter().map(|f| f.correlations).collect::<Vec<_>>());
    Ok(KFoldReport {
        folds,
        mean_weights: SpectrumWeights::new(&mean_w)?,
        mean,
    })
}

/// Per-knot decompositions of every annotated (object, distortion) pair
/// against the object's ground truth, with MOS as the score.
pub fn prepare_batches(
    annotations: &AnnotationSet,
    meshes: &MeshDirectory,
    options: &MetricOptions,
) -> Result<Vec<ObjectBatch>> {
    let mos = annotations.mos_table()?;
    mos.objects()
        .into_iter()
        .map(|object| {
            let gt = prepare_spectrum(&meshes.ground_truth(&object)?, options)?;
            let rows: Vec<_> = mos.for_object(&object).collect();
            let bases = rows
                .par_iter()
                .map(|r| {
                    let test = prepare_spectrum(&meshes.distorted(&object, &r.distortion)?, options)?;
                    weight_decomposition(&test, &gt, options.mode)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ObjectBatch {
                distortions: rows.iter().map(|r| r.distortion.clone()).collect(),
                scores: rows.iter().map(|r| r.mos).collect(),
                object,
                bases,
            })
        })
        .collect()
}
