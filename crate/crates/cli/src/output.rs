//! CSV fields and JSON reports.
//!
//! Numbers are written with `{:.16e}` (17 significant digits), so a rerun of
//! the same config reproduces the files byte for byte.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use transmute_core::{ComplexI, ComplexSampled1D, ComplexSampled2D};

use crate::error::CliResult;

/// Git-style object hash: SHA-256 of `"blob <len>\0" + content`.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub hash: String,
}

/// Collects written files under one output directory.
pub struct Sink {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
}

impl Sink {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        fs::write(self.dir.join(name), bytes)?;
        self.artifacts.push(Artifact {
            path: name.to_string(),
            hash: content_hash(bytes),
        });
        Ok(())
    }

    /// Header plus one line per row, all cells already formatted.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> CliResult<()> {
        let mut buf = BufWriter::new(Vec::new());
        writeln!(buf, "{}", header.join(","))?;
        for row in rows {
            writeln!(buf, "{}", row.join(","))?;
        }
        let bytes = buf.into_inner().map_err(|e| e.into_error())?;
        self.write_bytes(name, &bytes)
    }

    pub fn field_1d(&mut self, name: &str, u: &ComplexSampled1D) -> CliResult<()> {
        let g = *u.grid();
        self.csv(
            name,
            &["x", "re", "im"],
            (0..g.len()).map(|i| row(&[g.node(i)], u.value(i))),
        )
    }

    /// Nodes `(x, y)` accepted by `keep`, x fastest.
    pub fn field_2d(
        &mut self,
        name: &str,
        u: &ComplexSampled2D,
        keep: impl Fn(f64, f64) -> bool,
    ) -> CliResult<()> {
        let (gx, gy) = (*u.grid_x(), *u.grid_y());
        let rows = (0..gy.len()).flat_map(move |iy| {
            (0..gx.len()).map(move |ix| (ix, iy, gx.node(ix), gy.node(iy)))
        });
        self.csv(
            name,
            &["x", "y", "re", "im"],
            rows.filter(|&(_, _, x, y)| keep(x, y))
                .map(|(ix, iy, x, y)| row(&[x, y], u.get(ix, iy))),
        )
    }

    /// Writes `report.json` with the config echo, its hash and the
    /// artifact list, and returns the full report.
    pub fn finish(mut self, config: &Value, results: Value) -> CliResult<Value> {
        let config_bytes = serde_json::to_vec(config).expect("config serializes");
        let artifacts = std::mem::take(&mut self.artifacts);
        let report = json!({
            "config": config,
            "config_hash": content_hash(&config_bytes),
            "results": results,
            "artifacts": artifacts,
        });
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(self.dir.join("report.json"), format!("{text}\n"))?;
        Ok(report)
    }
}

pub fn row(coords: &[f64], v: ComplexI) -> Vec<String> {
    coords.iter().copied().chain([v.re, v.im]).map(num).collect()
}

pub fn complex_json(v: ComplexI) -> Value {
    json!([v.re, v.im])
}
