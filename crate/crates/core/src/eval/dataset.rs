use std::path::{Path, PathBuf};

use crate::mesh::{load_mesh, MeshFormat};
use crate::{Error, Mesh, Result};

pub const GROUND_TRUTH: &str = "gt";
const EXTENSIONS: [&str; 2] = ["obj", "ply"];

/// Meshes laid out as `<root>/<object>/gt.{obj,ply}` plus
/// `<root>/<object>/<distortion>.{obj,ply}`.
#[derive(Debug, Clone)]
pub struct MeshDirectory {
    root: PathBuf,
    triangulate: bool,
}

impl MeshDirectory {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        MeshDirectory {
            root: root.into(),
            triangulate: false,
        }
    }

    pub fn triangulate(mut self, yes: bool) -> Self {
        self.triangulate = yes;
        self
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Existing file for `(object, stem)`; the error names the `.obj`
    /// path that was expected.
    pub fn path(&self, object: &str, stem: &str) -> Result<PathBuf> {
        let dir = self.root.join(object);
        EXTENSIONS
            .iter()
            .map(|ext| dir.join(format!("{stem}.{ext}")))
            .find(|p| p.is_file())
            .ok_or_else(|| Error::MissingMesh(dir.join(format!("{stem}.obj"))))
    }

    pub fn ground_truth_path(&self, object: &str) -> Result<PathBuf> {
        self.path(object, GROUND_TRUTH)
    }

    pub fn load(&self, object: &str, stem: &str) -> Result<Mesh> {
        load_mesh(self.path(object, stem)?, MeshFormat::Auto, self.triangulate)
    }

    pub fn ground_truth(&self, object: &str) -> Result<Mesh> {
        self.load(object, GROUND_TRUTH)
    }

    pub fn distorted(&self, object: &str, distortion: &str) -> Result<Mesh> {
        self.load(object, distortion)
    }

    /// Object subdirectories holding a ground-truth mesh, sorted.
    pub fn objects(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(&self.root).map_err(|e| Error::io(&self.root, e))? {
            let entry = entry.map_err(|e| Error::io(&self.root, e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if entry.path().is_dir() && self.ground_truth_path(&name).is_ok() {
                out.push(name);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Stems of the distorted meshes of `object`, sorted and deduplicated
    /// across extensions.
    pub fn distortions(&self, object: &str) -> Result<Vec<String>> {
        let dir = self.root.join(object);
        let mut out = Vec::new();
        for entry in std::fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            if path.is_file() && EXTENSIONS.contains(&ext) && stem != GROUND_TRUTH {
                out.push(stem.to_string());
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}
