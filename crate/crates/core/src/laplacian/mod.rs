//! Discrete Laplace-Beltrami operators on triangle meshes.
//!
//! Three variants are provided:
//!
//! - the combinatorial graph Laplacian `L = D - A`;
//! - the classical Cotan operator, row-normalized by the mixed Voronoi area
//!   of vertex `i` (asymmetric when areas differ);
//! - the revised Cotan operator, normalized by `sqrt(A_i A_j)` with absolute
//!   cotangent weights. It is a weighted graph Laplacian, hence symmetric
//!   positive semidefinite with every eigenvalue in `[0, 2 max_i L_ii]`.

mod matrix;

pub use matrix::{SparseMatrix, SparseSymMatrix};

use std::str::FromStr;

use faer::Side;
use serde::{Deserialize, Serialize};

use crate::mesh::{cotangent_weights, mixed_voronoi_areas, EdgeWeight, Mesh, MeshAdjacency};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    Topology,
    /// Classical Cotan operator, symmetrized as `(L + L^T) / 2`.
    Cotan,
    #[default]
    Revised,
}

impl FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topology" => Ok(LaplacianKind::Topology),
            "cotan" => Ok(LaplacianKind::Cotan),
            "revised" | "revised-cotan" => Ok(LaplacianKind::Revised),
            other => Err(Error::InvalidArgument(format!(
                "unknown laplacian {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LaplacianKind::Topology => "topology",
            LaplacianKind::Cotan => "cotan",
            LaplacianKind::Revised => "revised",
        })
    }
}

/// `L_ii = deg(i)`, `L_ij = -1` for neighbours.
pub fn build_topology_laplacian(adjacency: &MeshAdjacency) -> SparseSymMatrix {
    let n = adjacency.num_vertices();
    let diag = (0..n).map(|i| adjacency.degree(i) as f64).collect();
    let upper = adjacency.edges().iter().map(|e| (e.i, e.j, -1.0)).collect();
    SparseSymMatrix::from_parts(diag, upper).expect("edges are in range")
}

fn check_areas(areas: &[f64]) -> Result<()> {
    match areas.iter().position(|&a| !(a > 0.0)) {
        Some(vertex) => Err(Error::UnreferencedVertex { vertex }),
        None => Ok(()),
    }
}

/// Classical Cotan operator with rows normalized by `2 A_i`.
///
/// With `symmetrize` the result is `(L + L^T) / 2`; otherwise it is
/// returned as is and is generally asymmetric.
pub fn build_cotan_laplacian(
    weights: &[EdgeWeight],
    areas: &[f64],
    symmetrize: bool,
) -> Result<SparseMatrix> {
    check_areas(areas)?;
    let n = areas.len();
    let mut diag = vec![0.0; n];
    let mut entries = Vec::with_capacity(2 * weights.len() + n);
    for e in weights {
        let (wi, wj) = (e.weight / (2.0 * areas[e.i]), e.weight / (2.0 * areas[e.j]));
        entries.push((e.i, e.j, -wi));
        entries.push((e.j, e.i, -wj));
        diag[e.i] += wi;
        diag[e.j] += wj;
    }
    entries.extend(diag.into_iter().enumerate().map(|(i, d)| (i, i, d)));
    let l = SparseMatrix::from_triplets(n, entries);
    Ok(if symmetrize {
        let s = l.symmetric_part();
        let upper = s.off_diagonal().to_vec();
        SparseMatrix::from_triplets(
            n,
            s.diagonal()
                .iter()
                .enumerate()
                .map(|(i, &d)| (i, i, d))
                .chain(upper.iter().flat_map(|&(i, j, v)| [(i, j, v), (j, i, v)]))
                .collect(),
        )
    } else {
        l
    })
}

/// Revised Cotan operator: `L_ij = -|c_ij| / (2 sqrt(A_i A_j))` and the
/// diagonal equal to the negated sum of its row's off-diagonal entries.
pub fn build_revised_cotan_laplacian(
    weights: &[EdgeWeight],
    areas: &[f64],
) -> Result<SparseSymMatrix> {
    check_areas(areas)?;
    let mut diag = vec![0.0; areas.len()];
    let mut upper = Vec::with_capacity(weights.len());
    for e in weights {
        let w = e.weight.abs() / (2.0 * (areas[e.i] * areas[e.j]).sqrt());
        upper.push((e.i, e.j, -w));
        diag[e.i] += w;
        diag[e.j] += w;
    }
    SparseSymMatrix::from_parts(diag, upper)
}

/// Builds the requested operator for `mesh`; the Cotan variant is
/// symmetrized.
pub fn build_laplacian(mesh: &Mesh, kind: LaplacianKind) -> Result<SparseSymMatrix> {
    let adjacency = MeshAdjacency::new(mesh);
    match kind {
        LaplacianKind::Topology => Ok(build_topology_laplacian(&adjacency)),
        LaplacianKind::Cotan => {
            let areas = mixed_voronoi_areas(mesh, &adjacency)?;
            let weights = cotangent_weights(mesh, &adjacency)?;
            Ok(build_cotan_laplacian(&weights, &areas, false)?.symmetric_part())
        }
        LaplacianKind::Revised => {
            let areas = mixed_voronoi_areas(mesh, &adjacency)?;
            let weights = cotangent_weights(mesh, &adjacency)?;
            build_revised_cotan_laplacian(&weights, &areas)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `2 max_i L_ii`.
    pub gershgorin_bound: f64,
    pub tolerance: f64,
    /// `min_eigenvalue >= -tolerance * gershgorin_bound`.
    pub passed: bool,
}

/// Full symmetric eigensolve; passes when the smallest eigenvalue is not
/// below `-tol` times the Gershgorin bound.
pub fn check_psd(l: &SparseSymMatrix, tol: f64) -> Result<PsdReport> {
    let eig = l
        .to_dense()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenNonConvergence)?;
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let max_eigenvalue = eig.last().copied().unwrap_or(0.0);
    let gershgorin_bound = 2.0 * l.max_diagonal().max(0.0);
    Ok(PsdReport {
        min_eigenvalue,
        max_eigenvalue,
        gershgorin_bound,
        tolerance: tol,
        passed: min_eigenvalue >= -tol * gershgorin_bound,
    })
}

/// Four-vertex closed mesh on which the symmetrized classical Cotan operator
/// has a negative eigenvalue.
///
/// Faces `(v1 v2 v0)` and `(v3 v0 v2)` are congruent isosceles triangles
/// with equal sides 1 and a 120 degree apex at `v1` / `v3`. The hinge angle
/// along `v0 v2` is chosen so that the other two faces are isosceles with a
/// 30 degree apex at `v0` / `v2`. Mixed Voronoi areas are
/// `A0 = A2 = (4 - sqrt 3) / 8` and `A1 = A3 = (3 sqrt 3 - 2) / 8`.
pub fn appendix_c_mesh() -> Mesh {
    let half_base = 3f64.sqrt() / 2.0;
    // v1 and v3 lie on the circle of radius 1/2 around the v0-v2 axis;
    // |v1 v3| = 2 sin(pi/12) makes the top apex angle pi/6.
    let phi = (2.0 * (std::f64::consts::PI / 12.0).sin()).asin();
    let (s, c) = phi.sin_cos();
    Mesh::new(
        vec![
            [-half_base, 0.0, 0.0],
            [0.0, 0.5 * c, 0.5 * s],
            [half_base, 0.0, 0.0],
            [0.0, 0.5 * c, -0.5 * s],
        ],
        vec![[2, 1, 0], [0, 3, 2], [3, 0, 1], [1, 2, 3]],
    )
    .expect("valid fixture")
}

/// Closed-form eigenvalues of the symmetrized Cotan operator on
/// [`appendix_c_mesh`], ascending.
pub fn appendix_c_eigenvalues() -> [f64; 4] {
    let r3 = 3f64.sqrt();
    let a0 = (4.0 - r3) / 8.0;
    let a3 = (3.0 * r3 - 2.0) / 8.0;
    let root = (2.0 * (a0 * a0 + a3 * a3)).sqrt();
    let mut ev = [
        (2.0 - 2.0 * r3 / 3.0) / a0,
        (2.0 + 2.0 * r3) / a3,
        (a0 + a3 - root) / (a0 * a3),
        (a0 + a3 + root) / (a0 * a3),
    ];
    ev.sort_by(f64::total_cmp);
    ev
}
