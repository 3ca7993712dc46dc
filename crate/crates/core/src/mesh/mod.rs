//! Triangle meshes: representation, I/O, validation, adjacency and the
//! per-vertex / per-edge geometry consumed by the Laplacian builders.

mod adjacency;
mod geometry;
pub mod io;
pub mod vec3;

pub use adjacency::{validate, EdgeFaces, MeshAdjacency, ValidationReport};
pub use geometry::{cotangent_weights, mixed_voronoi_areas, EdgeWeight};
pub use io::{load_mesh, save_mesh, MeshFormat};

use crate::{Error, Result};
use vec3::Vec3;

/// Vertex coordinates plus a counter-clockwise triangle index list.
///
/// Construction through [`Mesh::new`] guarantees that every index is in
/// range, the corners of each face are pairwise distinct and every
/// coordinate is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        for (vi, v) in vertices.iter().enumerate() {
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidMesh(format!(
                    "vertex {vi} has a non-finite coordinate"
                )));
            }
        }
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            for &idx in f {
                if idx >= n {
                    return Err(Error::IndexOutOfRange {
                        face: fi,
                        index: idx as i64,
                        vertex_count: n,
                    });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidMesh(format!(
                    "face {fi} repeats a vertex: {f:?}"
                )));
            }
        }
        Ok(Mesh { vertices, faces })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn into_parts(self) -> (Vec<Vec3>, Vec<[usize; 3]>) {
        (self.vertices, self.faces)
    }

    /// Same topology, new coordinates.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertices.len(),
                actual: vertices.len(),
            });
        }
        if let Some(vi) = vertices
            .iter()
            .position(|v| v.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::InvalidMesh(format!(
                "vertex {vi} has a non-finite coordinate"
            )));
        }
        Ok(Mesh {
            vertices,
            faces: self.faces.clone(),
        })
    }

    pub fn map_vertices(&self, mut f: impl FnMut(Vec3) -> Vec3) -> Result<Self> {
        self.with_vertices(self.vertices.iter().map(|&v| f(v)).collect())
    }

    pub fn face_positions(&self, face: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn bounding_box(&self) -> Option<(Vec3, Vec3)> {
        let first = *self.vertices.first()?;
        let mut lo = first;
        let mut hi = first;
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }

    /// Largest axis-aligned extent, `max_k (max v_k - min v_k)`.
    pub fn scale(&self) -> Result<f64> {
        let (lo, hi) = self
            .bounding_box()
            .ok_or_else(|| Error::InvalidMesh("mesh has no vertices".into()))?;
        let s = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::ZeroExtent)
        }
    }

    pub fn centroid(&self) -> Vec3 {
        if self.vertices.is_empty() {
            return [0.0; 3];
        }
        let mut c = [0.0; 3];
        for v in &self.vertices {
            c = vec3::add(c, *v);
        }
        vec3::scale(c, 1.0 / self.vertices.len() as f64)
    }

    /// Translates the vertex centroid to the origin.
    pub fn centered(&self) -> Mesh {
        let c = self.centroid();
        Mesh {
            vertices: self.vertices.iter().map(|&v| vec3::sub(v, c)).collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len())
            .map(|f| {
                let [a, b, c] = self.face_positions(f);
                vec3::triangle_area(a, b, c)
            })
            .sum()
    }

    /// Signed enclosed volume (positive for outward-oriented closed meshes).
    pub fn signed_volume(&self) -> f64 {
        (0..self.faces.len())
            .map(|f| {
                let [a, b, c] = self.face_positions(f);
                vec3::dot(a, vec3::cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Number of connected components of the face graph, counting
    /// unreferenced vertices as their own components.
    pub fn connected_components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in &self.faces {
            for k in 0..3 {
                let a = find(&mut parent, f[k]);
                let b = find(&mut parent, f[(k + 1) % 3]);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// `V - E + F` over the undirected edge set.
    pub fn euler_characteristic(&self) -> i64 {
        let adjacency = MeshAdjacency::new(self);
        self.vertices.len() as i64 - adjacency.num_edges() as i64 + self.faces.len() as i64
    }

    /// Concatenates `other` as additional components.
    pub fn append(&self, other: &Mesh) -> Mesh {
        let offset = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut faces = self.faces.clone();
        faces.extend(
            other
                .faces
                .iter()
                .map(|f| [f[0] + offset, f[1] + offset, f[2] + offset]),
        );
        Mesh { vertices, faces }
    }

    /// Drops vertices no face references and compacts indices.
    pub fn without_unreferenced_vertices(&self) -> Mesh {
        let mut used = vec![false; self.vertices.len()];
        for f in &self.faces {
            for &i in f {
                used[i] = true;
            }
        }
        let order: Vec<usize> = (0..self.vertices.len()).filter(|&i| used[i]).collect();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let vertices: Vec<Vec3> = order
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                remap[old] = new;
                self.vertices[old]
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| [remap[f[0]], remap[f[1]], remap[f[2]]])
            .collect();
        Mesh { vertices, faces }
    }
}

/// Free-function form of [`Mesh::scale`].
pub fn mesh_scale(mesh: &Mesh) -> Result<f64> {
    mesh.scale()
}

/// Free-function form of [`Mesh::centered`].
pub fn center(mesh: &Mesh) -> Mesh {
    mesh.centered()
}
