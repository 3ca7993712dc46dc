//! Spectrum AUC Difference (SAUCD) for triangle meshes.
//!
//! The crate computes a shape-similarity distance between a test mesh and a
//! ground-truth mesh by comparing their mesh Fourier spectra: the vertex
//! coordinates are projected onto the eigenvectors of a positive
//! semidefinite discrete Laplace-Beltrami operator, the per-frequency
//! amplitudes form a curve, and the distance is the area between the two
//! (pruned, AUC-normalized) curves. A learnable 20-knot frequency weight
//! yields the human-adjusted variant.
//!
//! Module map:
//!
//! - [`mesh`]: mesh type, OBJ/PLY I/O, validation, adjacency, mixed Voronoi
//!   areas and cotangent weights.
//! - [`laplacian`]: topology, Cotan and revised-Cotan operators, PSD checks.
//! - [`spectral`]: eigendecomposition, spectra, band-pass reconstruction,
//!   pruning and AUC normalization.
//! - [`metric`]: SAUCD and weighted SAUCD.
//! - [`training`]: learning the frequency weights from human scores.
//! - [`eval`]: correlation statistics, annotation aggregation, reports and
//!   the Swiss-tournament simulator.
//! - [`distortion`]: the synthetic distortion suite.
//! - [`baselines`]: Chamfer, Hausdorff, point-to-surface, normal, F-score
//!   and voxel IoU comparison metrics.
//! - [`fixtures`]: procedural meshes used by tests, benches and the CLI.

pub mod baselines;
pub mod distortion;
mod error;
pub mod eval;
pub mod fixtures;
pub mod laplacian;
pub mod mesh;
pub mod metric;
pub mod spectral;
pub mod training;

pub use error::{Error, Result};
pub use laplacian::{LaplacianKind, SparseSymMatrix};
pub use mesh::{Mesh, MeshAdjacency, ValidationReport};
pub use metric::{saucd, weighted_saucd, DifferenceMode, MetricOptions, SpectrumWeights};
pub use spectral::{FourierBasis, Spectrum};
