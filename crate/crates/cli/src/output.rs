//! Output files. Every CSV starts with a `#` provenance line and every JSON
//! document carries a `provenance` object, so any file can be traced back to
//! the config and seed that produced it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

pub const TOOL: &str = "belief-axes";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(config_sha256: impl Into<String>, seed: u64) -> Self {
        Provenance {
            tool: TOOL,
            version: VERSION,
            config_sha256: config_sha256.into(),
            seed,
        }
    }

    fn comment_line(&self) -> String {
        format!(
            "# tool={} version={} config_sha256={} seed={}\n",
            self.tool, self.version, self.config_sha256, self.seed
        )
    }
}

/// Non-fatal condition recorded in the warnings sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub kind: &'static str,
    pub context: String,
    pub message: String,
}

impl Warning {
    pub fn new(kind: &'static str, context: impl Into<String>, message: impl Into<String>) -> Self {
        let w = Warning {
            kind,
            context: context.into(),
            message: message.into(),
        };
        log::warn!("{}: {}", w.context, w.message);
        w
    }
}

pub struct OutputDir {
    root: PathBuf,
    provenance: Provenance,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, provenance: Provenance) -> Result<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Output {
            path: root.to_owned(),
            source,
        })?;
        Ok(OutputDir {
            root: root.to_owned(),
            provenance,
            written: Vec::new(),
        })
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Paths written so far, relative to the output root.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, relative: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(relative);
        let io_err = |source| CliError::Output {
            path: path.clone(),
            source,
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
        let mut file = fs::File::create(&path).map_err(io_err)?;
        file.write_all(bytes).map_err(io_err)?;
        self.written.push(PathBuf::from(relative));
        Ok(())
    }

    pub fn write_csv<I>(&mut self, relative: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut buf = self.provenance.comment_line().into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            w.flush().map_err(|source| CliError::Output {
                path: self.root.join(relative),
                source,
            })?;
        }
        self.write(relative, &buf)
    }

    /// Writes `value` (which must serialize to an object) with the
    /// provenance block added.
    pub fn write_json<T: Serialize>(&mut self, relative: &str, value: &T) -> Result<()> {
        let mut doc = serde_json::to_value(value)?;
        if let Some(obj) = doc.as_object_mut() {
            obj.insert("provenance".into(), serde_json::to_value(&self.provenance)?);
        }
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        self.write(relative, text.as_bytes())
    }

    pub fn write_warnings(&mut self, command: &str, warnings: &[Warning]) -> Result<()> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            command: &'a str,
            warnings: &'a [Warning],
        }
        self.write_json("warnings.json", &Sidecar { command, warnings })
    }
}

/// File-name-safe form of a label.
pub fn file_stem(parts: &[&str]) -> String {
    parts
        .iter()
        .map(|p| {
            p.chars()
                .map(|c| if c.is_ascii_alphanumeric() || "+-.".contains(c) { c } else { '_' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("__")
}

/// Shortest round-trip representation, so values re-read bit-exactly.
pub fn num(v: f64) -> String {
    v.to_string()
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_carries_provenance_line() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), Provenance::new("abc", 7)).unwrap();
        out.write_csv("t.csv", &["a", "b"], vec![vec!["1".into(), "x,y".into()]]).unwrap();
        let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(
            text,
            format!("# tool=belief-axes version={VERSION} config_sha256=abc seed=7\na,b\n1,\"x,y\"\n")
        );
        out.write_json("s/x.json", &serde_json::json!({"k": 1})).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s/x.json")).unwrap()).unwrap();
        assert_eq!(doc["provenance"]["seed"], 7);
        assert_eq!(out.written().len(), 2);
    }

    #[test]
    fn stems_are_file_safe() {
        assert_eq!(file_stem(&["glove 6B", "hispanic-vs-white", "ethayarajh+garg"]), "glove_6B__hispanic-vs-white__ethayarajh+garg");
    }
}
