use crate::{Error, Mesh, MeshAdjacency, Result};

pub const TAUBIN_LAMBDA: f64 = 0.5;
pub const TAUBIN_MU: f64 = -0.53;

/// `iterations` rounds of a `lambda` shrink step followed by a `mu`
/// inflate step, each `v += f * (mean(neighbors) - v)`.
pub fn taubin_smooth(mesh: &Mesh, iterations: usize, lambda: f64, mu: f64) -> Result<Mesh> {
    if iterations == 0 {
        return Ok(mesh.clone());
    }
    let adj = MeshAdjacency::new(mesh);
    if let Some(i) = (0..mesh.num_vertices()).find(|&i| adj.degree(i) == 0) {
        return Err(Error::UnreferencedVertex { vertex: i });
    }
    let mut v = mesh.vertices().to_vec();
    let mut next = v.clone();
    for _ in 0..iterations {
        for f in [lambda, mu] {
            for (i, out) in next.iter_mut().enumerate() {
                let nb = adj.neighbors(i);
                let mut avg = [0.0; 3];
                for &j in nb {
                    for k in 0..3 {
                        avg[k] += v[j][k];
                    }
                }
                for k in 0..3 {
                    out[k] = v[i][k] + f * (avg[k] / nb.len() as f64 - v[i][k]);
                }
            }
            std::mem::swap(&mut v, &mut next);
        }
    }
    mesh.with_vertices(v)
}
