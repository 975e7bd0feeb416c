//! Artifact directory: every file goes through [`Artifacts`], which records
//! its hash for the manifest. Writing happens on the main thread only.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct Entry {
    path: String,
    bytes: u64,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    scenario: &'a str,
    seed: u64,
    config_sha256: String,
    artifacts: Vec<Entry>,
}

pub struct Artifacts {
    dir: PathBuf,
    entries: Vec<Entry>,
    plots: bool,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

impl Artifacts {
    pub fn create(dir: &Path, plots: bool) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            entries: Vec::new(),
            plots,
        })
    }

    pub fn plots(&self) -> bool {
        self.plots
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `name` from a closure that fills a buffer.
    pub fn write_with<F>(&mut self, name: &str, fill: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<()>,
    {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        self.write_bytes(name, &buf)
    }

    pub fn write_bytes(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::File::create(&path)
            .and_then(|mut f| f.write_all(data))
            .with_context(|| format!("writing {}", path.display()))?;
        self.record(name, data);
        eprintln!("  wrote {name}");
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// Registers a file produced by someone else (plot backends).
    pub fn register(&mut self, name: &str) -> Result<()> {
        let data = fs::read(self.dir.join(name))?;
        self.record(name, &data);
        eprintln!("  wrote {name}");
        Ok(())
    }

    fn record(&mut self, name: &str, data: &[u8]) {
        self.entries.retain(|e| e.path != name);
        self.entries.push(Entry {
            path: name.to_string(),
            bytes: data.len() as u64,
            sha256: sha256_hex(data),
        });
    }

    /// Writes `manifest.json` listing every artifact, sorted by path.
    pub fn finish(mut self, scenario: &str, seed: u64, config_text: &str) -> Result<PathBuf> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            tool: "usc",
            version: env!("CARGO_PKG_VERSION"),
            scenario,
            seed,
            config_sha256: sha256_hex(config_text.as_bytes()),
            artifacts: self.entries,
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
