use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// A file written by a run, identified by its SHA-256 digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

impl Artifact {
    pub fn of(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Ok(Self { path: path.to_path_buf(), sha256: sha256_file(path)?, bytes: std::fs::metadata(path)?.len() })
    }
}

pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// Writes `rows` with a header line.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<Artifact> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    drop(w);
    Artifact::of(path)
}

pub fn read_csv<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

/// Plain whitespace-separated two-column file for plotting tools.
pub fn write_columns(path: impl AsRef<Path>, header: &str, rows: &[(f64, f64)]) -> Result<Artifact> {
    let path = path.as_ref();
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "# {header}")?;
    for (x, y) in rows {
        writeln!(f, "{x:e} {y:e}")?;
    }
    f.flush()?;
    drop(f);
    Artifact::of(path)
}

/// Record of one command invocation: the resolved configuration, the seed
/// and every artifact produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub workers: usize,
    pub config: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, workers: usize, config: &impl Serialize) -> Result<Self> {
        Ok(Self {
            tool: "scmnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            workers,
            config: serde_json::to_value(config)?,
            artifacts: Vec::new(),
        })
    }

    /// Writes `manifest.json` into `dir`. Artifact paths are stored
    /// relative to `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        let mut m = self.clone();
        for a in &mut m.artifacts {
            if let Ok(rel) = a.path.strip_prefix(dir) {
                a.path = rel.to_path_buf();
            }
        }
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(&m)? + "\n")?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Row {
        name: String,
        x: f64,
        t: Option<f64>,
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = vec![
            Row { name: "a, \"quoted\"".into(), x: 0.1 + 0.2, t: Some(1.0 / 3.0) },
            Row { name: "b".into(), x: 1e-300, t: None },
        ];
        let a = write_csv(&path, &rows).unwrap();
        assert_eq!(read_csv::<Row>(&path).unwrap(), rows);
        assert_eq!(a.sha256.len(), 64);
        assert_eq!(a, Artifact::of(&path).unwrap());

        let mut m = RunManifest::new("test", 1, 2, &serde_json::json!({"k": 1})).unwrap();
        m.artifacts.push(a);
        let mp = m.write(dir.path()).unwrap();
        let back: RunManifest = serde_json::from_str(&std::fs::read_to_string(mp).unwrap()).unwrap();
        assert_eq!(back.artifacts[0].path, PathBuf::from("rows.csv"));
    }
}
