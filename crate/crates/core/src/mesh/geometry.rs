use super::vec3::{self, Vec3};
use super::{Mesh, MeshAdjacency};
use crate::{Error, Result};

/// Cotangent edge weight `c_ij = cot(alpha_ij) + cot(beta_ij)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeight {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

fn is_degenerate(a: Vec3, b: Vec3, c: Vec3) -> bool {
    let longest = vec3::dist2(a, b)
        .max(vec3::dist2(b, c))
        .max(vec3::dist2(c, a));
    let doubled = vec3::norm(vec3::triangle_normal(a, b, c));
    longest == 0.0 || doubled <= 1e-14 * longest
}

/// Cotangent of the angle at `apex` spanned by `a` and `b`.
#[inline]
fn cot_at(apex: Vec3, a: Vec3, b: Vec3) -> f64 {
    let u = vec3::sub(a, apex);
    let v = vec3::sub(b, apex);
    vec3::dot(u, v) / vec3::norm(vec3::cross(u, v))
}

/// Per-vertex mixed Voronoi areas.
///
/// Non-obtuse triangles contribute their circumcentric (Voronoi) region to
/// each corner; an obtuse triangle gives half its area to the obtuse corner
/// and a quarter to each of the others. The areas partition the surface.
pub fn mixed_voronoi_areas(mesh: &Mesh, adjacency: &MeshAdjacency) -> Result<Vec<f64>> {
    let mut areas = vec![0.0; mesh.num_vertices()];
    for (fi, f) in mesh.faces().iter().enumerate() {
        let p = mesh.face_positions(fi);
        if is_degenerate(p[0], p[1], p[2]) {
            return Err(Error::DegenerateFace { face: fi });
        }
        let area = vec3::triangle_area(p[0], p[1], p[2]);
        let obtuse = (0..3).find(|&k| {
            let a = vec3::sub(p[(k + 1) % 3], p[k]);
            let b = vec3::sub(p[(k + 2) % 3], p[k]);
            vec3::dot(a, b) < 0.0
        });
        match obtuse {
            Some(k) => {
                for m in 0..3 {
                    areas[f[m]] += if m == k { area / 2.0 } else { area / 4.0 };
                }
            }
            None => {
                for k in 0..3 {
                    let (pi, pj, pk) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                    // edge i-j is opposite corner k, edge i-k opposite corner j
                    let cot_k = cot_at(pk, pi, pj);
                    let cot_j = cot_at(pj, pi, pk);
                    areas[f[k]] +=
                        (vec3::dist2(pi, pj) * cot_k + vec3::dist2(pi, pk) * cot_j) / 8.0;
                }
            }
        }
    }
    if let Some(vertex) = (0..mesh.num_vertices()).find(|&i| adjacency.vertex_faces(i).is_empty()) {
        return Err(Error::UnreferencedVertex { vertex });
    }
    Ok(areas)
}

/// Per-edge cotangent weights, aligned with [`MeshAdjacency::edges`].
///
/// Boundary edges carry the single available opposite-angle cotangent.
pub fn cotangent_weights(mesh: &Mesh, adjacency: &MeshAdjacency) -> Result<Vec<EdgeWeight>> {
    let v = mesh.vertices();
    adjacency
        .edges()
        .iter()
        .map(|e| {
            let mut weight = 0.0;
            for &(face, opp) in &e.incident {
                let (a, b, c) = (v[e.i], v[e.j], v[opp]);
                if is_degenerate(a, b, c) {
                    return Err(Error::DegenerateFace { face });
                }
                weight += cot_at(c, a, b);
            }
            Ok(EdgeWeight {
                i: e.i,
                j: e.j,
                weight,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::laplacian::appendix_c_mesh;

    fn equilateral_pair() -> Mesh {
        let h = 3f64.sqrt() / 2.0;
        Mesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.5, h, 0.0],
                [0.5, -h, 0.0],
            ],
            vec![[0, 1, 2], [1, 0, 3]],
        )
        .unwrap()
    }

    #[test]
    fn equilateral_triangle_thirds() {
        let h = 3f64.sqrt() / 2.0;
        let m = Mesh::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [0.5, h, 0.0]],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let a = mixed_voronoi_areas(&m, &MeshAdjacency::new(&m)).unwrap();
        for x in a {
            assert!((x - 3f64.sqrt() / 12.0).abs() < 1e-15);
        }
    }

    #[test]
    fn counterexample_mesh_areas() {
        let m = appendix_c_mesh();
        let a = mixed_voronoi_areas(&m, &MeshAdjacency::new(&m)).unwrap();
        let a0 = (4.0 - 3f64.sqrt()) / 8.0;
        let a3 = (3.0 * 3f64.sqrt() - 2.0) / 8.0;
        for (got, want) in a.iter().zip([a0, a3, a0, a3]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn cotangent_examples() {
        let m = equilateral_pair();
        let w = cotangent_weights(&m, &MeshAdjacency::new(&m)).unwrap();
        let shared = w.iter().find(|e| (e.i, e.j) == (0, 1)).unwrap();
        assert!((shared.weight - 2.0 / 3f64.sqrt()).abs() < 1e-14);

        // right isosceles pair sharing the hypotenuse
        let m = Mesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 1.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
            ],
            vec![[0, 2, 1], [0, 1, 3]],
        )
        .unwrap();
        let w = cotangent_weights(&m, &MeshAdjacency::new(&m)).unwrap();
        let hyp = w.iter().find(|e| (e.i, e.j) == (0, 1)).unwrap();
        assert!(hyp.weight.abs() < 1e-15);

        // boundary edge with an obtuse 120 degree opposite angle
        let m = Mesh::new(
            vec![
                [-(3f64.sqrt()) / 2.0, 0.0, 0.0],
                [3f64.sqrt() / 2.0, 0.0, 0.0],
                [0.0, 0.5, 0.0],
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let w = cotangent_weights(&m, &MeshAdjacency::new(&m)).unwrap();
        let base = w.iter().find(|e| (e.i, e.j) == (0, 1)).unwrap();
        assert!((base.weight + 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_face_is_named() {
        let m = Mesh::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 3], [0, 2, 1]],
        )
        .unwrap();
        let adj = MeshAdjacency::new(&m);
        assert!(matches!(
            cotangent_weights(&m, &adj),
            Err(Error::DegenerateFace { face: 1 })
        ));
        assert!(matches!(
            mixed_voronoi_areas(&m, &adj),
            Err(Error::DegenerateFace { face: 1 })
        ));
    }

    #[test]
    fn unreferenced_vertex_is_rejected() {
        let mut v = fixtures::tetrahedron().vertices().to_vec();
        v.push([5.0, 5.0, 5.0]);
        let m = Mesh::new(v, fixtures::tetrahedron().faces().to_vec()).unwrap();
        let adj = MeshAdjacency::new(&m);
        assert!(matches!(
            mixed_voronoi_areas(&m, &adj),
            Err(Error::UnreferencedVertex { vertex: 4 })
        ));
    }
}
