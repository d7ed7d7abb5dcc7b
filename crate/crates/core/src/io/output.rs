//! All-or-nothing file output.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Files staged in memory and committed together.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        self.files.push((name.into(), contents.into()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    /// Writes every file to a temporary name in `dir`, then renames them
    /// into place. On failure the temporaries are removed and no final file
    /// is created.
    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(self.files.len());
        for (name, contents) in &self.files {
            let tmp = dir.join(format!(".{name}.tmp"));
            if let Err(e) = fs::write(&tmp, contents) {
                let _ = fs::remove_file(&tmp);
                cleanup(&staged);
                return Err(e.into());
            }
            staged.push((tmp, dir.join(name)));
        }
        for (tmp, target) in &staged {
            if let Err(e) = fs::rename(tmp, target) {
                cleanup(&staged);
                return Err(e.into());
            }
        }
        Ok(staged.into_iter().map(|(_, target)| target).collect())
    }
}

fn cleanup(staged: &[(PathBuf, PathBuf)]) {
    for (tmp, _) in staged {
        let _ = fs::remove_file(tmp);
    }
}
