use super::distance::{
    chamfer_distance, fscore, normal_difference, point_to_surface, uhd, FSCORE_THRESHOLD_FRACTION,
};
use super::voxel::{voxel_iou, DEFAULT_IOU_RESOLUTION};
use crate::metric::{saucd, weighted_saucd};
use crate::{Error, Mesh, MetricOptions, Result, SpectrumWeights};

/// A pairwise mesh metric as listed in correlation reports.
pub trait Metric: Send + Sync {
    fn name(&self) -> &str;
    /// Whether a smaller score means a closer match.
    fn lower_is_better(&self) -> bool;
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64>;
}

/// Names accepted by [`baseline`], in report order.
pub const BASELINE_NAMES: [&str; 6] = [
    "chamfer",
    "uhd",
    "point-to-surface",
    "normal-difference",
    "fscore",
    "iou",
];

pub struct Saucd(pub MetricOptions);

impl Metric for Saucd {
    fn name(&self) -> &str {
        "saucd"
    }
    fn lower_is_better(&self) -> bool {
        true
    }
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64> {
        saucd(test, gt, &self.0)
    }
}

pub struct WeightedSaucd {
    pub weights: SpectrumWeights,
    pub options: MetricOptions,
}

impl Metric for WeightedSaucd {
    fn name(&self) -> &str {
        "weighted-saucd"
    }
    fn lower_is_better(&self) -> bool {
        true
    }
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64> {
        weighted_saucd(test, gt, &self.weights, &self.options)
    }
}

struct Distance {
    name: &'static str,
    f: fn(&Mesh, &Mesh) -> Result<f64>,
}

impl Metric for Distance {
    fn name(&self) -> &str {
        self.name
    }
    fn lower_is_better(&self) -> bool {
        true
    }
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64> {
        (self.f)(test, gt)
    }
}

/// F-score with the threshold a fixed fraction of the ground-truth scale.
pub struct FScore {
    pub threshold_fraction: f64,
    pub seed: u64,
}

impl Metric for FScore {
    fn name(&self) -> &str {
        "fscore"
    }
    fn lower_is_better(&self) -> bool {
        false
    }
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64> {
        fscore(test, gt, self.threshold_fraction * gt.scale()?, self.seed)
    }
}

pub struct VoxelIou {
    pub resolution: usize,
}

impl Metric for VoxelIou {
    fn name(&self) -> &str {
        "iou"
    }
    fn lower_is_better(&self) -> bool {
        false
    }
    fn score(&self, test: &Mesh, gt: &Mesh) -> Result<f64> {
        voxel_iou(test, gt, self.resolution)
    }
}

/// Baseline metric by name with default settings; `seed` drives F-score
/// sampling.
pub fn baseline(name: &str, seed: u64) -> Result<Box<dyn Metric>> {
    let distance = |name, f| -> Box<dyn Metric> { Box::new(Distance { name, f }) };
    Ok(match name {
        "chamfer" => distance("chamfer", chamfer_distance),
        "uhd" => distance("uhd", uhd),
        "point-to-surface" => distance("point-to-surface", point_to_surface),
        "normal-difference" => distance("normal-difference", normal_difference),
        "fscore" => Box::new(FScore {
            threshold_fraction: FSCORE_THRESHOLD_FRACTION,
            seed,
        }),
        "iou" => Box::new(VoxelIou {
            resolution: DEFAULT_IOU_RESOLUTION,
        }),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown baseline {name:?}; expected one of {}",
                BASELINE_NAMES.join(", ")
            )))
        }
    })
}
