use crate::mesh::validate;
use crate::mesh::vec3::Vec3;
use crate::{Error, Mesh, Result};

pub const DEFAULT_IOU_RESOLUTION: usize = 64;

/// Ray offsets in cell units, so rays through cell centers miss mesh edges
/// that sit on the grid lines.
const RAY_JITTER: [f64; 2] = [1.234_567e-6, 7.654_321e-7];

struct Grid {
    lo: Vec3,
    step: Vec3,
    n: usize,
}

impl Grid {
    fn center(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + (i as f64 + 0.5) * self.step[axis]
    }
}

fn require_closed(m: &Mesh) -> Result<()> {
    let r = validate(m);
    if !r.is_closed() || m.num_faces() == 0 {
        return Err(Error::OpenMesh {
            boundary_edges: r.boundary_edges,
            non_manifold_edges: r.non_manifold_edges,
        });
    }
    Ok(())
}

/// x coordinate where the line `{(x, y, z)}` crosses the triangle, if it
/// does.
fn crossing(tri: &[Vec3; 3], y: f64, z: f64) -> Option<f64> {
    let [a, b, c] = *tri;
    let d = (b[1] - a[1]) * (c[2] - a[2]) - (c[1] - a[1]) * (b[2] - a[2]);
    if d == 0.0 {
        return None;
    }
    let u = ((y - a[1]) * (c[2] - a[2]) - (c[1] - a[1]) * (z - a[2])) / d;
    let v = ((b[1] - a[1]) * (z - a[2]) - (y - a[1]) * (b[2] - a[2])) / d;
    if u < 0.0 || v < 0.0 || u + v > 1.0 {
        return None;
    }
    Some(a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]))
}

/// Occupancy bitmap indexed `(k * n + j) * n + i` by parity of the +x ray
/// crossings.
fn occupancy(m: &Mesh, grid: &Grid) -> Vec<bool> {
    let n = grid.n;
    let tris: Vec<[Vec3; 3]> = (0..m.num_faces()).map(|f| m.face_positions(f)).collect();
    let mut occ = vec![false; n * n * n];
    let mut xs = Vec::new();
    for k in 0..n {
        let z = grid.center(2, k) + RAY_JITTER[1] * grid.step[2];
        for j in 0..n {
            let y = grid.center(1, j) + RAY_JITTER[0] * grid.step[1];
            xs.clear();
            xs.extend(tris.iter().filter_map(|t| crossing(t, y, z)));
            if xs.is_empty() {
                continue;
            }
            xs.sort_by(f64::total_cmp);
            let row = (k * n + j) * n;
            let mut c = 0;
            for i in 0..n {
                let x = grid.center(0, i);
                while c < xs.len() && xs[c] < x {
                    c += 1;
                }
                occ[row + i] = c % 2 == 1;
            }
        }
    }
    occ
}

/// Intersection over union of the voxelized solids on a `resolution`³
/// grid spanning the joint bounding box.
pub fn voxel_iou(a: &Mesh, b: &Mesh, resolution: usize) -> Result<f64> {
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!(
            "voxel resolution must be at least 8, got {resolution}"
        )));
    }
    require_closed(a)?;
    require_closed(b)?;
    let (la, ha) = a.bounding_box().expect("closed mesh has vertices");
    let (lb, hb) = b.bounding_box().expect("closed mesh has vertices");
    let lo: Vec3 = std::array::from_fn(|k| la[k].min(lb[k]));
    let hi: Vec3 = std::array::from_fn(|k| ha[k].max(hb[k]));
    if (0..3).any(|k| !(hi[k] > lo[k])) {
        return Err(Error::ZeroExtent);
    }
    let grid = Grid {
        lo,
        step: std::array::from_fn(|k| (hi[k] - lo[k]) / resolution as f64),
        n: resolution,
    };
    let (oa, ob) = rayon::join(|| occupancy(a, &grid), || occupancy(b, &grid));
    let inter = oa.iter().zip(&ob).filter(|(x, y)| **x && **y).count();
    let union = oa.iter().zip(&ob).filter(|(x, y)| **x || **y).count();
    if union == 0 {
        return Err(Error::InvalidArgument(
            "no voxel centers inside either mesh; raise the resolution".into(),
        ));
    }
    Ok(inter as f64 / union as f64)
}
