//! Series files, manifests and the CSV tables produced by a cohort run.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::AnalysisRecord;
use crate::series::TimeSeries;

pub const RECORDS_HEADER: [&str; 6] = ["subject_id", "group", "method", "analysis", "tau", "value"];
pub const SUMMARY_HEADER: [&str; 7] = ["group", "method", "analysis", "tau", "n", "mean", "se"];
pub const COMPARISON_HEADER: [&str; 4] = ["measure", "covariate_or_pair", "statistic", "value"];
pub const MANIFEST_HEADER: [&str; 8] = [
    "subject_id",
    "path",
    "group",
    "age",
    "height",
    "weight",
    "leg_length",
    "speed",
];

/// Parses series text: one value per line, or `time value` pairs (the second
/// column is used). Blank lines and lines starting with `#` are skipped.
pub fn parse_series(id: &str, path: &Path, text: &str) -> Result<TimeSeries> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        let field = if fields.len() >= 2 {
            fields[1]
        } else {
            fields[0]
        };
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let v: f64 = field
            .parse()
            .map_err(|_| parse_err(format!("not a number: `{field}`")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("non-finite value `{field}`")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    TimeSeries::new(id, values)
}

/// Reads a series file; the id is the file stem.
pub fn load_series(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_series(&id, path, &text)
}

/// Writes one value per line using the shortest round-trip representation.
pub fn write_series(path: impl AsRef<Path>, x: &TimeSeries) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(x.len() * 22);
    for v in x.values() {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub subject_id: String,
    /// Resolved against the manifest's directory when relative.
    pub path: PathBuf,
    pub group: String,
    /// Covariates in header order; `None` where the cell is empty.
    pub covariates: Vec<(String, Option<f64>)>,
}

impl ManifestEntry {
    pub fn covariate(&self, name: &str) -> Option<f64> {
        self.covariates
            .iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CohortManifest {
    pub covariate_names: Vec<String>,
    pub entries: Vec<ManifestEntry>,
}

impl CohortManifest {
    /// Loads and validates a manifest. Every referenced series file must exist.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let manifest = Self::parse(&text, base)?;
        for e in &manifest.entries {
            if !e.path.is_file() {
                return Err(Error::Manifest(format!(
                    "subject {}: series file {} does not exist",
                    e.subject_id,
                    e.path.display()
                )));
            }
        }
        Ok(manifest)
    }

    /// Parses manifest text without touching the filesystem.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Manifest(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if header.len() < 3 || header[..3] != MANIFEST_HEADER[..3] {
            return Err(Error::Manifest(format!(
                "header must start with subject_id,path,group; got {}",
                header.join(",")
            )));
        }
        let covariate_names = header[3..].to_vec();
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let line = row + 2;
            let rec = rec.map_err(|e| Error::Manifest(format!("line {line}: {e}")))?;
            let subject_id = rec.get(0).unwrap_or_default().to_string();
            let file = rec.get(1).unwrap_or_default();
            let group = rec.get(2).unwrap_or_default().to_string();
            if subject_id.is_empty() || file.is_empty() {
                return Err(Error::Manifest(format!(
                    "line {line}: empty subject_id or path"
                )));
            }
            if group.is_empty() {
                return Err(Error::Manifest(format!("line {line}: empty group label")));
            }
            if !seen.insert(subject_id.clone()) {
                return Err(Error::Manifest(format!(
                    "line {line}: duplicate subject_id {subject_id}"
                )));
            }
            let mut covariates = Vec::with_capacity(covariate_names.len());
            for (k, name) in covariate_names.iter().enumerate() {
                let cell = rec.get(k + 3).unwrap_or_default();
                let v = if cell.is_empty() {
                    None
                } else {
                    Some(cell.parse::<f64>().map_err(|_| {
                        Error::Manifest(format!(
                            "line {line}: covariate {name}: not a number `{cell}`"
                        ))
                    })?)
                };
                covariates.push((name.clone(), v));
            }
            entries.push(ManifestEntry {
                subject_id,
                path: base.join(file),
                group,
                covariates,
            });
        }
        Ok(CohortManifest {
            covariate_names,
            entries,
        })
    }

    /// Group labels in order of first appearance.
    pub fn groups(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.group) {
                out.push(e.group.clone());
            }
        }
        out
    }
}

/// Writes a manifest with the standard header. Paths are written as given.
pub fn write_manifest(path: impl AsRef<Path>, rows: &[(String, String, String)]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(MANIFEST_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for (id, file, group) in rows {
        w.write_record([
            id.as_str(),
            file.as_str(),
            group.as_str(),
            "",
            "",
            "",
            "",
            "",
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub method: String,
    pub analysis: String,
    /// A scale factor, or `dynamic` for per-subject scale factors.
    pub tau: String,
    pub n: usize,
    pub mean: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub measure: String,
    pub covariate_or_pair: String,
    pub statistic: String,
    pub value: Option<f64>,
}

pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, header: &[&str], rows: &[T]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(file, header, rows).map_err(|e| match e {
        Error::Csv { source, .. } => Error::csv(path, source),
        other => other,
    })
}

/// Writes rows to any sink. The header is written even when `rows` is empty.
pub fn write_csv_to<W: Write, T: Serialize>(sink: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    let wrap = |e: csv::Error| Error::csv("<output>", e);
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.serialize(r).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

/// Reads a CSV table, checking the header exactly.
pub fn read_csv<T: DeserializeOwned>(path: impl AsRef<Path>, header: &[&str]) -> Result<Vec<T>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let got: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::csv(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if got != header {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            message: format!(
                "expected header `{}`, got `{}`",
                header.join(","),
                got.join(",")
            ),
        });
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Schema {
                path: path.to_path_buf(),
                message: format!("row {}: {e}", i + 2),
            })
        })
        .collect()
}

pub fn write_records(path: impl AsRef<Path>, rows: &[AnalysisRecord]) -> Result<()> {
    write_csv(path, &RECORDS_HEADER, rows)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<AnalysisRecord>> {
    read_csv(path, &RECORDS_HEADER)
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    read_csv(path, &SUMMARY_HEADER)
}
