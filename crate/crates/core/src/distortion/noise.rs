use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::fixtures::icosphere;
use crate::mesh::vec3::add;
use crate::{Error, Mesh, Result};

/// Subdivision level of the floating spheres (42 vertices each).
pub const OUTLIER_SPHERE_LEVEL: usize = 1;

fn check_percent(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be >= 0, got {v}")))
    }
}

fn gaussian(std: f64) -> Normal<f64> {
    Normal::new(0.0, std).expect("finite non-negative std")
}

/// Perturbs `floor(r% N)` distinct vertices by zero-mean Gaussian noise
/// with per-axis std `sigma%` of the mesh scale.
pub fn impulse_noise(mesh: &Mesh, r_percent: f64, sigma_percent: f64, seed: u64) -> Result<Mesh> {
    check_percent("r", r_percent)?;
    check_percent("sigma", sigma_percent)?;
    let n = mesh.num_vertices();
    let count = ((r_percent / 100.0 * n as f64).floor() as usize).min(n);
    if count == 0 || sigma_percent == 0.0 {
        return Ok(mesh.clone());
    }
    let noise = gaussian(sigma_percent / 100.0 * mesh.scale()?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = rand::seq::index::sample(&mut rng, n, count).into_vec();
    chosen.sort_unstable();
    let mut v = mesh.vertices().to_vec();
    for i in chosen {
        for x in &mut v[i] {
            *x += noise.sample(&mut rng);
        }
    }
    mesh.with_vertices(v)
}

/// Gaussian noise with per-axis std `sigma%` of the mesh scale on every
/// vertex.
pub fn white_noise(mesh: &Mesh, sigma_percent: f64, seed: u64) -> Result<Mesh> {
    check_percent("sigma", sigma_percent)?;
    if sigma_percent == 0.0 {
        return Ok(mesh.clone());
    }
    let noise = gaussian(sigma_percent / 100.0 * mesh.scale()?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    mesh.map_vertices(|p| p.map(|x| x + noise.sample(&mut rng)))
}

/// `x *= sx / 100`, `z *= sz / 100`.
pub fn unproportional_scale(mesh: &Mesh, sx_percent: f64, sz_percent: f64) -> Result<Mesh> {
    for (name, v) in [("sx", sx_percent), ("sz", sz_percent)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} must be > 0, got {v}")));
        }
    }
    let (sx, sz) = (sx_percent / 100.0, sz_percent / 100.0);
    mesh.map_vertices(|[x, y, z]| [x * sx, y, z * sz])
}

/// Appends `n` icospheres of radius `r A` (`A` the mesh scale) centered
/// uniformly at random in the cube of edge `(1 + 6 r) A` around the
/// centroid.
pub fn outlying_spheres(mesh: &Mesh, n: usize, r_fraction: f64, seed: u64) -> Result<Mesh> {
    check_percent("r", r_fraction)?;
    if n == 0 {
        return Ok(mesh.clone());
    }
    let (centers, radius) = sphere_centers(mesh, n, r_fraction, seed)?;
    let unit = icosphere(OUTLIER_SPHERE_LEVEL);
    let mut out = mesh.clone();
    for c in centers {
        let s = unit.map_vertices(|p| add(c, p.map(|x| x * radius)))?;
        out = out.append(&s);
    }
    Ok(out)
}

/// Sphere centers and radius used by [`outlying_spheres`].
pub fn sphere_centers(
    mesh: &Mesh,
    n: usize,
    r_fraction: f64,
    seed: u64,
) -> Result<(Vec<[f64; 3]>, f64)> {
    let a = mesh.scale()?;
    let half = (1.0 + 6.0 * r_fraction) * a / 2.0;
    let c = mesh.centroid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = (0..n)
        .map(|_| std::array::from_fn(|k| c[k] + rng.random_range(-half..=half)))
        .collect();
    Ok((centers, r_fraction * a))
}
