use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_num(*x),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

/// Nine significant digits in scientific notation.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.8e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&'static str]) -> Self {
        Self { name: name.to_string(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Everything a scenario produces.
pub enum Artifact {
    Csv(Table),
    Json(String, Value),
}

impl Artifact {
    pub fn file_name(&self) -> String {
        match self {
            Artifact::Csv(t) => format!("{}.csv", t.name),
            Artifact::Json(n, _) => format!("{n}.json"),
        }
    }
}

#[derive(Serialize)]
pub struct RunManifest<'a, P: Serialize> {
    pub scenario: &'a str,
    pub version: &'a str,
    pub parameters: &'a P,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for a in artifacts {
        let path = dir.join(a.file_name());
        let bytes = match a {
            Artifact::Csv(t) => t.to_csv().map_err(std::io::Error::other)?,
            Artifact::Json(_, v) => {
                let mut s = serde_json::to_vec_pretty(v).map_err(std::io::Error::other)?;
                s.push(b'\n');
                s
            }
        };
        fs::write(&path, bytes)?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_manifest<P: Serialize>(dir: &Path, manifest: &RunManifest<P>) -> std::io::Result<PathBuf> {
    let path = dir.join(format!("{}.manifest.json", manifest.scenario));
    let mut s = serde_json::to_vec_pretty(manifest).map_err(std::io::Error::other)?;
    s.push(b'\n');
    fs::write(&path, s)?;
    Ok(path)
}
