//! Output directory with atomic writes and a checksummed run manifest.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub command: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    /// Relative path → artifact.
    pub artifacts: BTreeMap<String, Artifact>,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(Manifest::default());
        }
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Artifacts written by one command.
pub struct OutputDir {
    root: PathBuf,
    command: String,
    written: Vec<(String, Artifact)>,
}

impl OutputDir {
    pub fn create(root: &Path, command: &str) -> Result<Self, CliError> {
        std::fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            command: command.to_string(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        write_atomic(&path, bytes)?;
        self.written.push((
            name.to_string(),
            Artifact {
                command: self.command.clone(),
                bytes: bytes.len() as u64,
                sha256: sha256_hex(bytes),
            },
        ));
        Ok(path)
    }

    /// Serialize with `f` into memory, then write atomically.
    pub fn write_with<F>(&mut self, name: &str, f: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<(), CliError>,
    {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, &buf)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.write(name, &buf)
    }

    pub fn written(&self) -> impl Iterator<Item = &str> {
        self.written.iter().map(|(n, _)| n.as_str())
    }

    /// Merge this command's artifacts into the manifest.
    pub fn finish(self) -> Result<Manifest, CliError> {
        let mut m = Manifest::read(&self.root)?;
        m.version = env!("CARGO_PKG_VERSION").to_string();
        m.artifacts.retain(|_, a| a.command != self.command);
        for (name, a) in self.written {
            m.artifacts.insert(name, a);
        }
        let mut buf = serde_json::to_vec_pretty(&m)?;
        buf.push(b'\n');
        write_atomic(&self.root.join(MANIFEST), &buf)?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_merges_commands() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = OutputDir::create(dir.path(), "one").unwrap();
        a.write("x.txt", b"x").unwrap();
        a.finish().unwrap();
        let mut b = OutputDir::create(dir.path(), "two").unwrap();
        b.write("y.txt", b"yy").unwrap();
        let m = b.finish().unwrap();
        assert_eq!(m.artifacts.len(), 2);
        assert_eq!(m.artifacts["y.txt"].bytes, 2);
        assert_eq!(std::fs::read(dir.path().join("x.txt")).unwrap(), b"x");
        let mut c = OutputDir::create(dir.path(), "one").unwrap();
        c.write("z.txt", b"z").unwrap();
        let m = c.finish().unwrap();
        assert!(!m.artifacts.contains_key("x.txt"));
        assert!(m.artifacts.contains_key("z.txt"));
    }
}
