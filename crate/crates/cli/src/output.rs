//! Outputs are staged in memory and written in one pass once every worker
//! has finished, so file content never depends on scheduling and a failed
//! run leaves nothing behind.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::info;

#[derive(Debug, Default)]
pub struct Staged {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Staged {
    pub fn add(&mut self, relative: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) {
        self.files.push((relative.into(), bytes.into()));
    }

    /// Writes everything under `out`. Refuses to replace existing files
    /// unless `force`; on any failure the files and directories created so
    /// far are removed again.
    pub fn commit(self, out: &Path, force: bool) -> Result<()> {
        if !force {
            let existing: Vec<String> = self
                .files
                .iter()
                .map(|(rel, _)| out.join(rel))
                .filter(|p| p.exists())
                .map(|p| p.display().to_string())
                .collect();
            if !existing.is_empty() {
                bail!(
                    "refusing to overwrite {} existing file(s) without --force: {}",
                    existing.len(),
                    existing.join(", ")
                );
            }
        }
        let mut created_dirs = Vec::new();
        let mut written = Vec::new();
        let result = self.write_all(out, &mut created_dirs, &mut written);
        if result.is_err() {
            for p in written.iter().rev() {
                let _ = fs::remove_file(p);
            }
            for d in created_dirs.iter().rev() {
                let _ = fs::remove_dir(d);
            }
        }
        result
    }

    fn write_all(
        &self,
        out: &Path,
        created_dirs: &mut Vec<PathBuf>,
        written: &mut Vec<PathBuf>,
    ) -> Result<()> {
        for (rel, bytes) in &self.files {
            let path = out.join(rel);
            if let Some(parent) = path.parent() {
                create_dirs(parent, created_dirs)?;
            }
            let tmp = path.with_extension("partial");
            fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
            written.push(tmp.clone());
            fs::rename(&tmp, &path).with_context(|| format!("cannot write {}", path.display()))?;
            written.pop();
            written.push(path);
        }
        info!("wrote {} file(s) under {}", self.files.len(), out.display());
        Ok(())
    }
}

fn create_dirs(dir: &Path, created: &mut Vec<PathBuf>) -> Result<()> {
    let mut missing = Vec::new();
    let mut cur = Some(dir);
    while let Some(d) = cur {
        if d.as_os_str().is_empty() || d.exists() {
            break;
        }
        missing.push(d.to_path_buf());
        cur = d.parent();
    }
    for d in missing.into_iter().rev() {
        fs::create_dir(&d).with_context(|| format!("cannot create {}", d.display()))?;
        created.push(d);
    }
    Ok(())
}

/// Keeps trial ids usable as file names.
pub fn file_stem_for(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_overwrite_and_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("a/b");
        let mut s = Staged::default();
        s.add("x.csv", "1");
        s.add("sub/y.csv", "2");
        s.commit(&out, false).unwrap();
        assert_eq!(fs::read_to_string(out.join("sub/y.csv")).unwrap(), "2");

        let mut again = Staged::default();
        again.add("x.csv", "3");
        assert!(again.commit(&out, false).is_err());
        assert_eq!(fs::read_to_string(out.join("x.csv")).unwrap(), "1");

        let mut forced = Staged::default();
        forced.add("x.csv", "3");
        forced.commit(&out, true).unwrap();
        assert_eq!(fs::read_to_string(out.join("x.csv")).unwrap(), "3");
    }

    #[test]
    fn failed_write_removes_new_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("fresh");
        fs::create_dir_all(out.join("blocked")).unwrap();
        let mut s = Staged::default();
        s.add("new/ok.csv", "1");
        // a directory stands where the file should go
        s.add("blocked", "2");
        assert!(s.commit(&out, true).is_err());
        assert!(!out.join("new").exists());
    }

    #[test]
    fn ids_become_safe_names() {
        assert_eq!(file_stem_for("a/b c:1"), "a_b_c_1");
    }
}
