use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "face {face} has {count} vertices; pass the triangulate flag to fan-triangulate polygons"
    )]
    NonTriangleFace { face: usize, count: usize },

    #[error("face {face} references vertex {index}, but the mesh has {vertex_count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: i64,
        vertex_count: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("face {face} has zero area")]
    DegenerateFace { face: usize },

    #[error("vertex {vertex} is not referenced by any face")]
    UnreferencedVertex { vertex: usize },

    #[error("mesh has zero extent")]
    ZeroExtent,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("negative frequency {value} below tolerance {tolerance}")]
    NegativeFrequency { value: f64, tolerance: f64 },

    #[error("matrix is not symmetric: |L[{i}][{j}] - L[{j}][{i}]| = {diff}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("empty frequency band [{lo}, {hi}]")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("spectrum too short: need {needed} entries, have {actual}")]
    SpectrumTooShort { needed: usize, actual: usize },

    #[error("area under the spectrum curve is zero")]
    ZeroAuc,

    #[error("statistic undefined: {0}")]
    Statistic(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decimation stuck at {faces} faces (target {target})")]
    DecimationStuck { faces: usize, target: usize },

    #[error("mesh is not closed: {boundary_edges} boundary edges, {non_manifold_edges} non-manifold edges")]
    OpenMesh {
        boundary_edges: usize,
        non_manifold_edges: usize,
    },

    #[error("missing mesh file {0}")]
    MissingMesh(PathBuf),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
