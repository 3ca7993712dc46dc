//! Evaluation harness: correlation statistics, human-score aggregation,
//! Table-style correlation reports, mesh-directory datasets and a
//! Swiss-tournament study simulator.

mod annotations;
mod dataset;
mod report;
pub mod stats;
mod tournament;

pub use annotations::{mos_of_scores, Annotation, AnnotationSet, MosRow, MosTable, MAX_SCORE};
pub use dataset::{MeshDirectory, GROUND_TRUTH};
pub use report::{
    correlation_report, write_table_csv, Coefficient, CorrelationReport, Correlations,
    MetricScores, ObjectCorrelation,
};
pub use stats::{confidence_interval, iqr_filter, krocc, plcc, ranks, srocc};
pub use tournament::{simulate_study, swiss_tournament, StudyConfig, StudyObject};
