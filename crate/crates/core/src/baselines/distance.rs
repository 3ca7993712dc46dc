use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bvh::TriangleBvh;
use super::kdtree::KdTree;
use super::sample::sample_surface;
use crate::mesh::vec3::{add, cross, dot, norm, normalize, scale, triangle_normal, Vec3};
use crate::{Error, Mesh, Result};

/// Surface samples drawn from each mesh by [`fscore`].
pub const FSCORE_SAMPLES: usize = 10_000;
/// Default F-score threshold as a fraction of the ground-truth scale.
pub const FSCORE_THRESHOLD_FRACTION: f64 = 0.01;

fn non_empty(m: &Mesh) -> Result<()> {
    if m.num_vertices() == 0 {
        return Err(Error::InvalidMesh("mesh has no vertices".into()));
    }
    Ok(())
}

/// Distance from every point to its nearest point of `target`, in input
/// order.
fn nearest_distances(points: &[Vec3], target: &[Vec3]) -> Vec<f64> {
    let tree = KdTree::new(target);
    points
        .par_iter()
        .map(|&p| tree.nearest(p).expect("non-empty target").1.sqrt())
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Symmetric vertex Chamfer distance: the average of the mean
/// nearest-vertex distance from A to B and from B to A.
pub fn chamfer_distance(a: &Mesh, b: &Mesh) -> Result<f64> {
    non_empty(a)?;
    non_empty(b)?;
    let ab = nearest_distances(a.vertices(), b.vertices());
    let ba = nearest_distances(b.vertices(), a.vertices());
    Ok(0.5 * (mean(&ab) + mean(&ba)))
}

/// Unidirectional Hausdorff distance from the vertices of A to those of B.
pub fn uhd(a: &Mesh, b: &Mesh) -> Result<f64> {
    non_empty(a)?;
    non_empty(b)?;
    Ok(nearest_distances(a.vertices(), b.vertices())
        .into_iter()
        .fold(0.0, f64::max))
}

/// Mean exact distance from the vertices of A to the surface of B.
pub fn point_to_surface(a: &Mesh, b: &Mesh) -> Result<f64> {
    non_empty(a)?;
    if b.num_faces() == 0 {
        return Err(Error::InvalidMesh("target mesh has no faces".into()));
    }
    let bvh = TriangleBvh::new(b);
    let d: Vec<f64> = a
        .vertices()
        .par_iter()
        .map(|&p| bvh.distance(p).expect("faces present"))
        .collect();
    Ok(mean(&d))
}

fn unit_normals(m: &Mesh) -> Result<Vec<Vec3>> {
    (0..m.num_faces())
        .map(|f| {
            let [a, b, c] = m.face_positions(f);
            normalize(triangle_normal(a, b, c)).ok_or(Error::DegenerateFace { face: f })
        })
        .collect()
}

fn centroids(m: &Mesh) -> Vec<Vec3> {
    (0..m.num_faces())
        .map(|f| {
            let [a, b, c] = m.face_positions(f);
            scale(add(add(a, b), c), 1.0 / 3.0)
        })
        .collect()
}

/// Mean angle in radians between each face normal of A and the normal of
/// the face of B with the nearest centroid.
pub fn normal_difference(a: &Mesh, b: &Mesh) -> Result<f64> {
    if a.num_faces() == 0 || b.num_faces() == 0 {
        return Err(Error::InvalidMesh("mesh has no faces".into()));
    }
    let na = unit_normals(a)?;
    let nb = unit_normals(b)?;
    let tree = KdTree::new(&centroids(b));
    let angles: Vec<f64> = centroids(a)
        .par_iter()
        .zip(&na)
        .map(|(&c, &n)| {
            let (j, _) = tree.nearest(c).expect("faces present");
            norm(cross(n, nb[j])).atan2(dot(n, nb[j]))
        })
        .collect();
    Ok(mean(&angles))
}

/// Default threshold for [`fscore`] against ground truth `gt`.
pub fn default_fscore_threshold(gt: &Mesh) -> Result<f64> {
    Ok(FSCORE_THRESHOLD_FRACTION * gt.scale()?)
}

fn fraction_within(points: &[Vec3], target: &Mesh, threshold: f64) -> f64 {
    let bvh = TriangleBvh::new(target);
    let hits = points
        .par_iter()
        .filter(|&&p| bvh.distance(p).expect("faces present") <= threshold)
        .count();
    hits as f64 / points.len() as f64
}

/// Harmonic mean of precision (samples of A within `threshold` of the
/// surface of B) and recall (the converse), from [`FSCORE_SAMPLES`] seeded
/// samples per mesh.
pub fn fscore(a: &Mesh, b: &Mesh, threshold: f64, seed: u64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "F-score threshold must be positive, got {threshold}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sa = sample_surface(a, FSCORE_SAMPLES, rng.random())?;
    let sb = sample_surface(b, FSCORE_SAMPLES, rng.random())?;
    let precision = fraction_within(&sa.points, b, threshold);
    let recall = fraction_within(&sb.points, a, threshold);
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}
