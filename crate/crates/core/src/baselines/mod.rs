//! Comparison metrics: vertex Chamfer and one-sided Hausdorff distances,
//! point-to-surface distance, normal difference, F-score and voxel IoU,
//! all behind the [`Metric`] interface shared with SAUCD.

mod bvh;
mod distance;
mod kdtree;
mod registry;
mod sample;
mod voxel;

pub use bvh::{closest_point_on_triangle, point_triangle_distance2, TriangleBvh};
pub use distance::{
    chamfer_distance, default_fscore_threshold, fscore, normal_difference, point_to_surface, uhd,
    FSCORE_SAMPLES, FSCORE_THRESHOLD_FRACTION,
};
pub use kdtree::{nearest_brute_force, KdTree};
pub use registry::{baseline, FScore, Metric, Saucd, VoxelIou, WeightedSaucd, BASELINE_NAMES};
pub use sample::{sample_surface, PointSample};
pub use voxel::{voxel_iou, DEFAULT_IOU_RESOLUTION};
