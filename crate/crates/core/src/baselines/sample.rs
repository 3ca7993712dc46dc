use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::vec3::{add, normalize, scale, sub, triangle_area, triangle_normal, Vec3};
use crate::{Error, Mesh, Result};

/// Points drawn uniformly by area from a mesh surface, with the unit
/// normal of the face each came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    pub points: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
    pub faces: Vec<usize>,
}

impl PointSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn sample_surface(mesh: &Mesh, count: usize, seed: u64) -> Result<PointSample> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut cdf = Vec::with_capacity(mesh.num_faces());
    let mut total = 0.0;
    for f in 0..mesh.num_faces() {
        let [a, b, c] = mesh.face_positions(f);
        total += triangle_area(a, b, c);
        cdf.push(total);
    }
    if !(total > 0.0) {
        return Err(Error::InvalidMesh("mesh has no surface area".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut faces = Vec::with_capacity(count);
    let mut normals = Vec::with_capacity(count);
    for _ in 0..count {
        let t = rng.random::<f64>() * total;
        let f = cdf.partition_point(|&c| c <= t).min(cdf.len() - 1);
        let [a, b, c] = mesh.face_positions(f);
        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
        let s = r1.sqrt();
        let p = add(
            a,
            add(scale(sub(b, a), s * (1.0 - r2)), scale(sub(c, a), s * r2)),
        );
        points.push(p);
        faces.push(f);
        normals.push(normalize(triangle_normal(a, b, c)).unwrap_or([0.0; 3]));
    }
    Ok(PointSample {
        points,
        normals: Some(normals),
        faces,
    })
}
