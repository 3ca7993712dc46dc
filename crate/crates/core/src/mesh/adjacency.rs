use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{vec3, Mesh};

/// Faces incident to one undirected edge `(i, j)` with `i < j`, and the
/// vertex opposite the edge in each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFaces {
    pub i: usize,
    pub j: usize,
    /// `(face index, opposite vertex)` pairs.
    pub incident: Vec<(usize, usize)>,
}

impl EdgeFaces {
    pub fn is_boundary(&self) -> bool {
        self.incident.len() == 1
    }

    pub fn is_non_manifold(&self) -> bool {
        self.incident.len() > 2
    }
}

/// Vertex neighbourhoods and edge-face incidence of a mesh.
#[derive(Debug, Clone)]
pub struct MeshAdjacency {
    neighbors: Vec<Vec<usize>>,
    edges: Vec<EdgeFaces>,
    vertex_faces: Vec<Vec<usize>>,
}

impl MeshAdjacency {
    pub fn new(mesh: &Mesh) -> Self {
        let n = mesh.num_vertices();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<EdgeFaces> = Vec::new();
        let mut vertex_faces = vec![Vec::new(); n];
        for (fi, f) in mesh.faces().iter().enumerate() {
            for k in 0..3 {
                vertex_faces[f[k]].push(fi);
                let (a, b, opp) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
                let key = (a.min(b), a.max(b));
                let slot = *index.entry(key).or_insert_with(|| {
                    edges.push(EdgeFaces {
                        i: key.0,
                        j: key.1,
                        incident: Vec::with_capacity(2),
                    });
                    edges.len() - 1
                });
                edges[slot].incident.push((fi, opp));
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        let mut neighbors = vec![Vec::new(); n];
        for e in &edges {
            neighbors[e.i].push(e.j);
            neighbors[e.j].push(e.i);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        MeshAdjacency {
            neighbors,
            edges,
            vertex_faces,
        }
    }

    /// Sorted neighbour set `N(i)`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Undirected edges sorted by `(i, j)`.
    pub fn edges(&self) -> &[EdgeFaces] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_faces(&self, i: usize) -> &[usize] {
        &self.vertex_faces[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.neighbors.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub faces: usize,
    pub degenerate_faces: usize,
    pub unreferenced_vertices: usize,
    pub non_manifold_edges: usize,
    pub boundary_edges: usize,
    pub spectral_ready: bool,
}

impl ValidationReport {
    pub fn is_closed(&self) -> bool {
        self.boundary_edges == 0 && self.non_manifold_edges == 0
    }
}

/// Faces whose doubled area is below this fraction of the squared longest
/// edge count as degenerate.
const DEGENERATE_RELATIVE_AREA: f64 = 1e-14;

/// Structural report; never fails.
pub fn validate(mesh: &Mesh) -> ValidationReport {
    let adjacency = MeshAdjacency::new(mesh);
    let degenerate_faces = (0..mesh.num_faces())
        .filter(|&f| {
            let [a, b, c] = mesh.face_positions(f);
            let longest = vec3::dist2(a, b)
                .max(vec3::dist2(b, c))
                .max(vec3::dist2(c, a));
            let doubled = vec3::norm(vec3::triangle_normal(a, b, c));
            longest == 0.0 || doubled <= DEGENERATE_RELATIVE_AREA * longest
        })
        .count();
    let unreferenced_vertices = (0..mesh.num_vertices())
        .filter(|&i| adjacency.vertex_faces(i).is_empty())
        .count();
    let non_manifold_edges = adjacency
        .edges()
        .iter()
        .filter(|e| e.is_non_manifold())
        .count();
    let boundary_edges = adjacency.edges().iter().filter(|e| e.is_boundary()).count();
    ValidationReport {
        vertices: mesh.num_vertices(),
        faces: mesh.num_faces(),
        degenerate_faces,
        unreferenced_vertices,
        non_manifold_edges,
        boundary_edges,
        spectral_ready: degenerate_faces == 0
            && non_manifold_edges == 0
            && mesh.num_vertices() >= 4,
    }
}
