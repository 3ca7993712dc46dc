//! Inputs shared by the benchmarks.

use saucd::distortion::white_noise;
use saucd::fixtures;
use saucd::Mesh;

/// A ground-truth icosphere-based blob at subdivision `level` and a
/// white-noise copy of it.
pub fn noisy_pair(level: usize) -> (Mesh, Mesh) {
    let gt = fixtures::bumpy_sphere(level, 7);
    let test = white_noise(&gt, 0.3, 11).expect("closed fixture");
    (test, gt)
}
