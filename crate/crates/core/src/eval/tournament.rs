use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::annotations::{Annotation, AnnotationSet};
use crate::{Error, Result};

/// Swiss-system scoring: round 1 pairs a seeded shuffle, later rounds
/// stable-sort by running score (descending) and pair neighbors. `judge(a,
/// b)` returns the winner, which must be `a` or `b`. Each item's score is
/// its win count.
pub fn swiss_tournament(
    items: usize,
    rounds: usize,
    seed: u64,
    mut judge: impl FnMut(usize, usize) -> usize,
) -> Result<Vec<u32>> {
    if items % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "swiss tournament needs an even item count, got {items}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..items).collect();
    order.shuffle(&mut rng);
    let mut scores = vec![0u32; items];
    for round in 0..rounds {
        if round > 0 {
            order.sort_by_key(|&i| std::cmp::Reverse(scores[i]));
        }
        for pair in order.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            let w = judge(a, b);
            if w != a && w != b {
                return Err(Error::InvalidArgument(format!(
                    "judge returned {w} for the pair ({a}, {b})"
                )));
            }
            scores[w] += 1;
        }
    }
    Ok(scores)
}

/// Simulated annotators for [`simulate_study`].
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub subjects: usize,
    pub materials: Vec<String>,
    pub rounds: usize,
    /// Std of the Gaussian perception noise added to each quality in every
    /// comparison.
    pub judge_noise: f64,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            subjects: 10,
            materials: vec!["clay".into()],
            rounds: 6,
            judge_noise: 0.0,
            seed: 0,
        }
    }
}

/// Distorted items of one object with their latent quality (higher is
/// closer to the ground truth).
#[derive(Debug, Clone)]
pub struct StudyObject {
    pub object: String,
    pub items: Vec<(String, f64)>,
}

/// Runs one Swiss tournament per (object, material, subject) with a noisy
/// judge that prefers the higher latent quality.
pub fn simulate_study(objects: &[StudyObject], config: &StudyConfig) -> Result<AnnotationSet> {
    if !(config.judge_noise >= 0.0) {
        return Err(Error::InvalidArgument("judge noise must be >= 0".into()));
    }
    let noise = Normal::new(0.0, config.judge_noise).expect("validated std");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    for obj in objects {
        for material in &config.materials {
            for subject in 0..config.subjects {
                let pairing_seed = rng.random();
                let mut perception = ChaCha8Rng::seed_from_u64(rng.random());
                let q = &obj.items;
                let scores = swiss_tournament(q.len(), config.rounds, pairing_seed, |a, b| {
                    let qa = q[a].1 + noise.sample(&mut perception);
                    let qb = q[b].1 + noise.sample(&mut perception);
                    if qa >= qb {
                        a
                    } else {
                        b
                    }
                })?;
                for (i, s) in scores.into_iter().enumerate() {
                    records.push(Annotation {
                        object: obj.object.clone(),
                        distortion: q[i].0.clone(),
                        material: material.clone(),
                        subject: format!("subject{subject}"),
                        score: u8::try_from(s).map_err(|_| {
                            Error::InvalidArgument("too many rounds for 0..=6 scores".into())
                        })?,
                    });
                }
            }
        }
    }
    AnnotationSet::new(records)
}
