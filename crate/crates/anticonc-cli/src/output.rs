use anyhow::{Context, Result};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Fixed 17-significant-digit formatting, so equal values give equal bytes.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))?;
    Ok(())
}

/// CSV table: a `#manifest` comment line, a header row and rows of cells.
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, manifest_line: &str) -> Result<Vec<u8>> {
        let mut out = format!("#manifest {manifest_line}\n").into_bytes();
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        drop(w);
        Ok(out)
    }
}

/// Collects the files of one run and writes them together with a manifest.
pub struct Run {
    pub out_dir: PathBuf,
    /// Deterministic part of the manifest, embedded in every CSV.
    identity: serde_json::Value,
    written: Vec<String>,
    started: std::time::Instant,
}

impl Run {
    pub fn new(out_dir: PathBuf, command: &str, seed: u64, config: serde_json::Value) -> Self {
        let identity = serde_json::json!({
            "tool": "anticonc",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": seed,
            "config": config,
        });
        Self { out_dir, identity, written: Vec::new(), started: std::time::Instant::now() }
    }

    pub fn csv(&mut self, name: &str, csv: &Csv) -> Result<()> {
        let line = serde_json::to_string(&self.identity)?;
        self.file(name, &csv.render(&line)?)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.file(name, text.as_bytes())
    }

    fn file(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.out_dir.join(name), bytes)?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes `manifest.json` with wall time and thread count; returns the file list.
    pub fn finish(mut self, threads: usize) -> Result<Vec<String>> {
        let mut manifest = self.identity.clone();
        manifest["threads"] = threads.into();
        manifest["wall_time_s"] = self.started.elapsed().as_secs_f64().into();
        manifest["outputs"] = self.written.clone().into();
        self.json("manifest.json", &manifest)?;
        Ok(self.written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0).parse::<f64>().unwrap(), 1.0);
        let v = std::f64::consts::PI;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/a.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        let leftovers: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    #[test]
    fn csv_starts_with_manifest_comment() {
        let mut csv = Csv::new(&["k", "value"]);
        csv.push(vec!["1".into(), fmt_f64(1.0)]);
        let text = String::from_utf8(csv.render("{}").unwrap()).unwrap();
        assert!(text.starts_with("#manifest {}\nk,value\n1,"));
    }
}
