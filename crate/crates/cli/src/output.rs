use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Files and directories created by one invocation; removed again unless
/// [`Outputs::commit`] is reached.
#[derive(Default)]
pub struct Outputs {
    files: Vec<PathBuf>,
    dirs: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Creates `dir` and any missing parents, remembering the outermost
    /// one created.
    pub fn create_dir(&mut self, dir: &Path) -> Result<()> {
        let mut missing = dir;
        let mut outermost = None;
        while !missing.exists() {
            outermost = Some(missing.to_path_buf());
            match missing.parent() {
                Some(p) if !p.as_os_str().is_empty() => missing = p,
                _ => break,
            }
        }
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        self.dirs.extend(outermost);
        Ok(())
    }

    /// Registers a path about to be written by someone else.
    pub fn track(&mut self, path: &Path) {
        self.files.push(path.to_path_buf());
    }

    /// Writes `bytes` to `path`, or to stdout when `path` is `None`.
    pub fn write(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match path {
            Some(p) => {
                self.track(p);
                std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }

    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.files {
            let _ = std::fs::remove_file(f);
        }
        for d in &self.dirs {
            let _ = std::fs::remove_dir_all(d);
        }
    }
}
