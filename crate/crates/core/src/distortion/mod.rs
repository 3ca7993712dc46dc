//! Synthetic distortions at four severity levels per type.

mod decimate;
mod noise;
mod smooth;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use decimate::decimate_edge_collapse;
pub use noise::{
    impulse_noise, outlying_spheres, sphere_centers, unproportional_scale, white_noise,
    OUTLIER_SPHERE_LEVEL,
};
pub use smooth::{taubin_smooth, TAUBIN_LAMBDA, TAUBIN_MU};

use crate::mesh::{save_mesh, validate, MeshFormat};
use crate::{Error, Mesh, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistortionType {
    Impulse,
    WhiteNoise,
    Smoothing,
    UnproportionalScale,
    LowResolution,
    Outlying,
    /// Label for externally reconstructed meshes; not generated here.
    PoissonReconstruction,
}

impl DistortionType {
    /// Types [`DistortionSpec::apply`] can generate, in suite order.
    pub const GENERATED: [DistortionType; 6] = [
        DistortionType::Impulse,
        DistortionType::WhiteNoise,
        DistortionType::Smoothing,
        DistortionType::UnproportionalScale,
        DistortionType::LowResolution,
        DistortionType::Outlying,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistortionType::Impulse => "impulse",
            DistortionType::WhiteNoise => "white-noise",
            DistortionType::Smoothing => "smoothing",
            DistortionType::UnproportionalScale => "unproportional-scale",
            DistortionType::LowResolution => "low-resolution",
            DistortionType::Outlying => "outlying",
            DistortionType::PoissonReconstruction => "poisson-reconstruction",
        }
    }
}

impl fmt::Display for DistortionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistortionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            DistortionType::Impulse,
            DistortionType::WhiteNoise,
            DistortionType::Smoothing,
            DistortionType::UnproportionalScale,
            DistortionType::LowResolution,
            DistortionType::Outlying,
            DistortionType::PoissonReconstruction,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown distortion type {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistortionParams {
    Impulse { r_percent: f64, sigma_percent: f64 },
    WhiteNoise { sigma_percent: f64 },
    Smoothing { iterations: usize, lambda: f64, mu: f64 },
    UnproportionalScale { sx_percent: f64, sz_percent: f64 },
    LowResolution { target_faces: usize },
    Outlying { n: usize, r_fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    #[serde(rename = "type")]
    pub kind: DistortionType,
    pub level: u8,
    pub params: DistortionParams,
    pub seed: u64,
}

impl DistortionSpec {
    /// Parameters of the standard table for `kind` at `level` (1 to 4).
    pub fn standard(kind: DistortionType, level: u8, seed: u64) -> Result<Self> {
        if !(1..=4).contains(&level) {
            return Err(Error::InvalidArgument(format!(
                "distortion level must be 1..=4, got {level}"
            )));
        }
        let i = (level - 1) as usize;
        let params = match kind {
            DistortionType::Impulse => {
                let (r, s) = [(1.0, 0.5), (5.0, 2.0), (8.0, 3.0), (1.0, 5.0)][i];
                DistortionParams::Impulse {
                    r_percent: r,
                    sigma_percent: s,
                }
            }
            DistortionType::WhiteNoise => DistortionParams::WhiteNoise {
                sigma_percent: [0.1, 0.2, 0.3, 0.5][i],
            },
            DistortionType::Smoothing => DistortionParams::Smoothing {
                iterations: [5, 20, 50, 200][i],
                lambda: TAUBIN_LAMBDA,
                mu: TAUBIN_MU,
            },
            DistortionType::UnproportionalScale => {
                let (x, z) = [(98.0, 102.0), (95.0, 105.0), (90.0, 110.0), (80.0, 120.0)][i];
                DistortionParams::UnproportionalScale {
                    sx_percent: x,
                    sz_percent: z,
                }
            }
            DistortionType::LowResolution => DistortionParams::LowResolution {
                target_faces: [5000, 2000, 1000, 500][i],
            },
            DistortionType::Outlying => {
                let (n, r) = [(20, 0.002), (30, 0.004), (40, 0.006), (80, 0.008)][i];
                DistortionParams::Outlying { n, r_fraction: r }
            }
            DistortionType::PoissonReconstruction => {
                return Err(Error::InvalidArgument(
                    "poisson-reconstruction meshes are supplied externally".into(),
                ))
            }
        };
        Ok(DistortionSpec {
            kind,
            level,
            params,
            seed,
        })
    }

    /// `<type>-<level>`, used as the file stem.
    pub fn label(&self) -> String {
        format!("{}-{}", self.kind, self.level)
    }

    pub fn apply(&self, mesh: &Mesh) -> Result<Mesh> {
        match self.params {
            DistortionParams::Impulse {
                r_percent,
                sigma_percent,
            } => impulse_noise(mesh, r_percent, sigma_percent, self.seed),
            DistortionParams::WhiteNoise { sigma_percent } => {
                white_noise(mesh, sigma_percent, self.seed)
            }
            DistortionParams::Smoothing {
                iterations,
                lambda,
                mu,
            } => taubin_smooth(mesh, iterations, lambda, mu),
            DistortionParams::UnproportionalScale {
                sx_percent,
                sz_percent,
            } => unproportional_scale(mesh, sx_percent, sz_percent),
            DistortionParams::LowResolution { target_faces } => {
                decimate_edge_collapse(mesh, target_faces)
            }
            DistortionParams::Outlying { n, r_fraction } => {
                outlying_spheres(mesh, n, r_fraction, self.seed)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DistortedMesh {
    pub spec: DistortionSpec,
    pub mesh: Mesh,
}

/// The 24 standard distortions (6 types x 4 levels); per-spec seeds are
/// drawn from `seed`.
pub fn suite_specs(seed: u64) -> Vec<DistortionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::with_capacity(24);
    for kind in DistortionType::GENERATED {
        for level in 1..=4 {
            let s = rng.random();
            specs.push(DistortionSpec::standard(kind, level, s).expect("standard table"));
        }
    }
    specs
}

pub fn distortion_suite(mesh: &Mesh, seed: u64) -> Result<Vec<DistortedMesh>> {
    let report = validate(mesh);
    if !report.spectral_ready {
        return Err(Error::InvalidMesh("distortion input is not spectral-ready".into()));
    }
    suite_specs(seed)
        .into_par_iter()
        .map(|spec| {
            Ok(DistortedMesh {
                mesh: spec.apply(mesh)?,
                spec,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    #[serde(flatten)]
    pub spec: DistortionSpec,
}

/// Writes each mesh as `<label>.<ext>` under `dir` plus `manifest.json`,
/// and returns the written paths (manifest last).
pub fn write_suite(dir: &Path, suite: &[DistortedMesh], format: MeshFormat) -> Result<Vec<PathBuf>> {
    let ext = match format {
        MeshFormat::PlyAscii => "ply",
        _ => "obj",
    };
    let format = if format == MeshFormat::Auto {
        MeshFormat::Obj
    } else {
        format
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut manifest = Vec::new();
    for d in suite {
        let file = format!("{}.{ext}", d.spec.label());
        let path = dir.join(&file);
        save_mesh(&d.mesh, &path, format)?;
        written.push(path);
        manifest.push(ManifestEntry { file, spec: d.spec });
    }
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn standard_table() {
        let s = DistortionSpec::standard(DistortionType::Impulse, 4, 0).unwrap();
        assert_eq!(
            s.params,
            DistortionParams::Impulse {
                r_percent: 1.0,
                sigma_percent: 5.0
            }
        );
        assert_eq!(s.label(), "impulse-4");
        assert!(DistortionSpec::standard(DistortionType::Smoothing, 5, 0).is_err());
        assert!(DistortionSpec::standard(DistortionType::PoissonReconstruction, 1, 0).is_err());
        assert_eq!(
            "white-noise".parse::<DistortionType>().unwrap(),
            DistortionType::WhiteNoise
        );
        assert!("blur".parse::<DistortionType>().is_err());
    }

    #[test]
    fn suite_is_deterministic_and_complete() {
        let m = fixtures::bumpy_sphere(4, 1);
        let a = distortion_suite(&m, 42).unwrap();
        assert_eq!(a.len(), 24);
        let b = distortion_suite(&m, 42).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.mesh, y.mesh);
            assert_eq!(x.spec, y.spec);
        }
        for d in &a {
            assert_ne!(d.mesh, m, "{}", d.spec.label());
        }
        let c = distortion_suite(&m, 43).unwrap();
        assert_ne!(a[4].mesh, c[4].mesh);
    }

    #[test]
    fn topology_preserving_types_keep_faces() {
        let m = fixtures::icosphere(2);
        for kind in [
            DistortionType::Impulse,
            DistortionType::WhiteNoise,
            DistortionType::Smoothing,
            DistortionType::UnproportionalScale,
        ] {
            for level in 1..=4 {
                let d = DistortionSpec::standard(kind, level, 9).unwrap().apply(&m).unwrap();
                assert_eq!(d.faces(), m.faces());
            }
        }
    }

    #[test]
    fn manifest_round_trip() {
        let m = fixtures::icosphere(2);
        let suite = distortion_suite(&m, 1).unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let paths = write_suite(tmp.path(), &suite, MeshFormat::Obj).unwrap();
        assert_eq!(paths.len(), 25);
        let text = std::fs::read_to_string(tmp.path().join("manifest.json")).unwrap();
        let entries: Vec<ManifestEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(entries.len(), 24);
        assert_eq!(entries[0].file, "impulse-1.obj");
        assert_eq!(entries[0].spec, suite[0].spec);
        assert!(text.contains("\"type\": \"impulse\""));
    }
}
