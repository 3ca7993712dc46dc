use serde::{Deserialize, Serialize};

use super::TrainConfig;
use crate::eval::ranks;
use crate::metric::NUM_KNOTS;
use crate::{Error, Result};

/// Per-knot distance decompositions and human scores of one object's
/// distorted meshes: the distance of row `i` under weights `w` is
/// `bases[i] . w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectBatch {
    pub object: String,
    pub distortions: Vec<String>,
    pub bases: Vec<[f64; NUM_KNOTS]>,
    pub scores: Vec<f64>,
}

impl ObjectBatch {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn distances(&self, w: &[f64; NUM_KNOTS]) -> Vec<f64> {
        self.bases.iter().map(|b| dot(b, w)).collect()
    }
}

fn dot(a: &[f64; NUM_KNOTS], b: &[f64; NUM_KNOTS]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Pairwise-logistic soft ranks `1 + sum_{j != i} sigma((x_i - x_j) / t)`.
pub fn soft_rank(values: &[f64], temperature: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            1.0 + (0..n)
                .filter(|&j| j != i)
                .map(|j| sigmoid((values[i] - values[j]) / temperature))
                .sum::<f64>()
        })
        .collect()
}

/// Vector-Jacobian product of [`soft_rank`]: given `a = dL/dr`, returns
/// `dL/dx`.
pub fn soft_rank_backward(values: &[f64], temperature: f64, a: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut g = vec![0.0; n];
    for k in 0..n {
        for j in k + 1..n {
            let s = sigmoid((values[k] - values[j]) / temperature);
            let ds = s * (1.0 - s) / temperature;
            let c = ds * (a[k] - a[j]);
            g[k] += c;
            g[j] -= c;
        }
    }
    g
}

/// `(x - mean) / std` with the population std, plus that std.
fn standardize(x: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    let sd = var.sqrt();
    if !(sd > 1e-300) || !(sd.is_finite()) {
        return None;
    }
    Some((x.iter().map(|v| (v - m) / sd).collect(), sd))
}

/// Correlation part of the loss for one object and its gradient with
/// respect to the distances.
///
/// `lambda_p (1 + PLCC(d, s)) + lambda_sr (1 + softSROCC(d, s))`, where
/// the soft ranks are taken on standardized distances so the temperature
/// is scale-free.
pub fn correlation_loss(
    distances: &[f64],
    scores: &[f64],
    config: &TrainConfig,
) -> Result<(f64, Vec<f64>)> {
    let n = distances.len();
    if n != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: scores.len(),
        });
    }
    if n < 3 {
        return Err(Error::Statistic(format!("need at least 3 samples, got {n}")));
    }
    let (u, sd) =
        standardize(distances).ok_or_else(|| Error::Statistic("zero-variance distances".into()))?;
    let (v, _) =
        standardize(scores).ok_or_else(|| Error::Statistic("zero-variance scores".into()))?;
    let nf = n as f64;

    let plcc: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / nf;
    let r = soft_rank(&u, config.temperature);
    let hard = ranks(scores);
    let denom = nf * (nf * nf - 1.0);
    let d2: f64 = r.iter().zip(&hard).map(|(a, b)| (a - b) * (a - b)).sum();
    let soft_srocc = 1.0 - 6.0 * d2 / denom;
    let loss = config.lambda_plcc * (1.0 + plcc) + config.lambda_srocc * (1.0 + soft_srocc);

    let a: Vec<f64> = r
        .iter()
        .zip(&hard)
        .map(|(ri, hi)| config.lambda_srocc * -12.0 * (ri - hi) / denom)
        .collect();
    let mut g = soft_rank_backward(&u, config.temperature, &a);
    for (gi, vi) in g.iter_mut().zip(&v) {
        *gi += config.lambda_plcc * vi / nf;
    }
    // back through the standardization
    let gm = g.iter().sum::<f64>() / nf;
    let ug: f64 = u.iter().zip(&g).map(|(a, b)| a * b).sum();
    let gd = g
        .iter()
        .zip(&u)
        .map(|(gi, ui)| (gi - gm - ui * ug / nf) / sd)
        .collect();
    Ok((loss, gd))
}

/// Mean object loss plus `lambda_r / 20 * sum (w - 1)^2`, with the
/// gradient in `w`.
pub fn composite_loss(
    batches: &[ObjectBatch],
    weights: &[f64; NUM_KNOTS],
    config: &TrainConfig,
) -> Result<(f64, [f64; NUM_KNOTS])> {
    if batches.is_empty() {
        return Err(Error::InvalidArgument("no training objects".into()));
    }
    let mut loss = 0.0;
    let mut grad = [0.0; NUM_KNOTS];
    let scale = 1.0 / batches.len() as f64;
    for batch in batches {
        let d = batch.distances(weights);
        let (l, gd) = correlation_loss(&d, &batch.scores, config)
            .map_err(|e| Error::Statistic(format!("object {}: {e}", batch.object)))?;
        loss += scale * l;
        for (b, g) in batch.bases.iter().zip(&gd) {
            for k in 0..NUM_KNOTS {
                grad[k] += scale * g * b[k];
            }
        }
    }
    let nk = NUM_KNOTS as f64;
    for k in 0..NUM_KNOTS {
        let dw = weights[k] - 1.0;
        loss += config.lambda_regu * dw * dw / nk;
        grad[k] += 2.0 * config.lambda_regu * dw / nk;
    }
    Ok((loss, grad))
}
