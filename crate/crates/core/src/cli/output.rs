//! CSV/JSON artifacts and the manifest written next to them.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One output file, held in memory until the run finishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub body: Vec<u8>,
}

impl Artifact {
    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Self {
        let mut body = serde_json::to_vec_pretty(value).expect("serializable output");
        body.push(b'\n');
        Artifact { name: name.into(), body }
    }
}

/// Sidecar describing one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: String,
    pub runtime_seconds: f64,
    pub validity_flags: Vec<String>,
    pub notes: Vec<String>,
    /// Points that could not be computed; their rows are left incomplete.
    pub failures: Vec<String>,
    pub outputs: Vec<String>,
}

/// Result of a command before it is written out.
#[derive(Debug, Clone)]
pub struct Run {
    pub command: String,
    pub parameters: Value,
    pub artifacts: Vec<Artifact>,
    pub validity_flags: Vec<String>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    /// Wall time of this run alone, when it is part of a larger invocation.
    pub runtime: Option<Duration>,
}

impl Run {
    pub fn new(command: impl Into<String>, parameters: Value) -> Self {
        Run {
            command: command.into(),
            parameters,
            artifacts: Vec::new(),
            validity_flags: Vec::new(),
            notes: Vec::new(),
            failures: Vec::new(),
            runtime: None,
        }
    }

    pub fn manifest(&self, runtime: Duration) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            runtime_seconds: self.runtime.unwrap_or(runtime).as_secs_f64(),
            validity_flags: self.validity_flags.clone(),
            notes: self.notes.clone(),
            failures: self.failures.clone(),
            outputs: self.artifacts.iter().map(|a| a.name.clone()).collect(),
        }
    }

    /// Writes the artifacts and `<command>.manifest.json` into `dir`.
    pub fn write(&self, dir: &Path, runtime: Duration) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.body)?;
        }
        let path = dir.join(format!("{}.manifest.json", self.command));
        std::fs::write(&path, Artifact::json("", &self.manifest(runtime)).body)?;
        Ok(path)
    }

    /// Prints every artifact to `out`, each preceded by a `# <name>` line.
    pub fn print(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for a in &self.artifacts {
            writeln!(out, "# {}", a.name)?;
            out.write_all(&a.body)?;
        }
        Ok(())
    }
}

/// Shortest round-trip text; exponent form outside `[1e-3, 1e6)`.
pub fn fmt(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-3..1e6).contains(&a) {
        format!("{x}")
    } else if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// CSV table with a header row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Table { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self, name: impl Into<String>) -> Artifact {
        Artifact {
            name: name.into(),
            body: self.writer.into_inner().expect("in-memory flush"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt(0.0), "0");
        assert_eq!(fmt(0.07), "0.07");
        assert_eq!(fmt(1.5e-5), "1.5e-5");
        assert_eq!(fmt(2.0e7), "2e7");
        assert_eq!(fmt(f64::NAN), "");
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["a", "b"]);
        t.row(["1", "x, y"]);
        let a = t.finish("t.csv");
        assert_eq!(String::from_utf8(a.body).unwrap(), "a,b\n1,\"x, y\"\n");
    }
}
