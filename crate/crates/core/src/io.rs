//! Result tables: comma-separated data plus a `key = value` metadata sidecar.
//!
//! Every real is written with 10 significant digits and is rounded to that
//! precision when it enters a table, so reading a written file back yields an
//! identical table.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::constellation::balanced_delta_sq;
use crate::error::{Error, Result};
use crate::harness::{GapReport, RatePoint, SerCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Ser,
    Rate,
    Gap,
    Table1,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Ser => "ser",
            ExperimentKind::Rate => "rate",
            ExperimentKind::Gap => "gap",
            ExperimentKind::Table1 => "table1",
        }
    }

    pub fn columns(&self) -> &'static [(&'static str, ColumnType)] {
        use ColumnType::*;
        match self {
            ExperimentKind::Ser => &[
                ("snr_db", Real),
                ("dimension", Int),
                ("detector", Text),
                ("mode", Text),
                ("errors", Int),
                ("trials", Int),
                ("ser", Real),
                ("ci_low", Real),
                ("ci_high", Real),
                ("delta_sq", Real),
            ],
            ExperimentKind::Rate => &[
                ("snr_db", Real),
                ("rate_bits", Real),
                ("stderr", Real),
                ("samples", Int),
                ("delta_sq", Real),
                ("converged", Int),
            ],
            ExperimentKind::Gap => &[
                ("delta_sq", Real),
                ("dimension", Int),
                ("baseline", Text),
                ("candidate", Text),
                ("mode", Text),
                ("target_ser", Real),
                ("baseline_snr_db", Real),
                ("candidate_snr_db", Real),
                ("gap_db", Real),
            ],
            ExperimentKind::Table1 => &[("n_r", Int), ("n_p", Int), ("delta_sq_bl", Real)],
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ser" => Ok(ExperimentKind::Ser),
            "rate" => Ok(ExperimentKind::Rate),
            "gap" => Ok(ExperimentKind::Gap),
            "table1" => Ok(ExperimentKind::Table1),
            _ => Err(Error::Parse(format!("unknown experiment kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Int,
    Real,
    Text,
}

/// A table cell. `Real(NaN)` is written as `nan` and marks a missing value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    /// A real rounded to the written precision.
    pub fn real(x: f64) -> Cell {
        Cell::Real(round_sig(x))
    }

    fn matches(&self, ty: ColumnType) -> bool {
        matches!(
            (self, ty),
            (Cell::Int(_), ColumnType::Int)
                | (Cell::Real(_), ColumnType::Real)
                | (Cell::Text(_), ColumnType::Text)
        )
    }

    fn parse(text: &str, ty: ColumnType) -> Result<Cell> {
        let bad = || Error::Parse(format!("cannot parse `{text}` as {ty:?}"));
        Ok(match ty {
            ColumnType::Int => Cell::Int(text.parse().map_err(|_| bad())?),
            ColumnType::Real => Cell::Real(text.parse().map_err(|_| bad())?),
            ColumnType::Text => Cell::Text(text.to_string()),
        })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) if v.is_nan() => write!(f, "nan"),
            Cell::Real(v) => write!(f, "{v:.9e}"),
            Cell::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Rounds to 10 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub kind: ExperimentKind,
    pub rows: Vec<Vec<Cell>>,
    /// Ordered `key = value` pairs; keys and values must not contain newlines.
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            rows: Vec::new(),
            metadata: vec![
                ("kind".into(), kind.name().into()),
                ("code_version".into(), env!("CARGO_PKG_VERSION").into()),
            ],
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.set_meta(key, value);
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        let cols = self.kind.columns();
        if row.len() != cols.len() {
            return Err(Error::Parse(format!(
                "{} row has {} cells, schema has {}",
                self.kind.name(),
                row.len(),
                cols.len()
            )));
        }
        if let Some((name, ty)) = cols.iter().zip(&row).find(|((_, ty), c)| !c.matches(*ty)).map(|(c, _)| c) {
            return Err(Error::Parse(format!("column `{name}` expects {ty:?}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_names(&self) -> Vec<&'static str> {
        self.kind.columns().iter().map(|(n, _)| *n).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.column_names().join(",") + "\n";
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out += &cells.join(",");
            out.push('\n');
        }
        out
    }

    pub fn meta_text(&self) -> String {
        self.metadata.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Path of the metadata sidecar of a CSV file.
pub fn meta_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// `<dir>/<experiment>_<config hash>.csv`
pub fn output_path(dir: &Path, kind: ExperimentKind, config_hash: &str) -> PathBuf {
    dir.join(format!("{}_{config_hash}.csv", kind.name()))
}

/// Writes the CSV and its `.meta` sidecar, creating parent directories.
pub fn write_results(table: &ResultTable, csv_path: &Path) -> Result<()> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(csv_path, table.to_csv())?;
    fs::write(meta_path(csv_path), table.meta_text())?;
    Ok(())
}

pub fn read_results(csv_path: &Path) -> Result<ResultTable> {
    let meta = fs::read_to_string(meta_path(csv_path))?;
    let mut metadata = Vec::new();
    for line in meta.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line
            .split_once(" = ")
            .ok_or_else(|| Error::Parse(format!("bad metadata line `{line}`")))?;
        metadata.push((k.to_string(), v.to_string()));
    }
    let kind: ExperimentKind = metadata
        .iter()
        .find(|(k, _)| k == "kind")
        .ok_or_else(|| Error::Parse("metadata lacks `kind`".into()))?
        .1
        .parse()?;
    let csv = fs::read_to_string(csv_path)?;
    let mut lines = csv.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
    let cols = kind.columns();
    let expected: Vec<&str> = cols.iter().map(|(n, _)| *n).collect();
    if header.split(',').collect::<Vec<_>>() != expected {
        return Err(Error::Parse(format!("header `{header}` does not match the {} schema", kind.name())));
    }
    let mut table = ResultTable {
        kind,
        rows: Vec::new(),
        metadata,
    };
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse(format!("row `{line}` has {} fields", fields.len())));
        }
        let row = fields
            .iter()
            .zip(cols)
            .map(|(f, (_, ty))| Cell::parse(f, *ty))
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(table)
}

/// One row per (curve, SNR, dimension); dimensions are numbered 1 to 4.
pub fn ser_table(curves: &[SerCurve]) -> ResultTable {
    let mut t = ResultTable::new(ExperimentKind::Ser);
    for curve in curves {
        for p in &curve.points {
            for d in 0..4 {
                let (lo, hi) = p.interval(d);
                t.rows.push(vec![
                    Cell::real(p.snr_db),
                    Cell::Int(d as i64 + 1),
                    Cell::Text(curve.variant.detector.name().into()),
                    Cell::Text(curve.variant.mode.name().into()),
                    Cell::Int(p.errors[d] as i64),
                    Cell::Int(p.trials as i64),
                    Cell::real(p.ser(d)),
                    Cell::real(lo),
                    Cell::real(hi),
                    Cell::real(curve.delta_sq),
                ]);
            }
        }
    }
    t
}

pub fn rate_table(points: &[RatePoint]) -> ResultTable {
    let mut t = ResultTable::new(ExperimentKind::Rate);
    for p in points {
        t.rows.push(vec![
            Cell::real(p.snr_db),
            Cell::real(p.rate_bits),
            Cell::real(p.stderr),
            Cell::Int(p.samples as i64),
            Cell::real(p.delta_sq),
            Cell::Int(p.converged as i64),
        ]);
    }
    t
}

/// Unbracketed crossings are written as `nan`.
pub fn gap_table(reports: &[GapReport]) -> ResultTable {
    let mut t = ResultTable::new(ExperimentKind::Gap);
    let opt = |x: Option<f64>| Cell::real(x.unwrap_or(f64::NAN));
    for r in reports {
        for d in 0..4 {
            t.rows.push(vec![
                Cell::real(r.delta_sq),
                Cell::Int(d as i64 + 1),
                Cell::Text(r.baseline.detector.name().into()),
                Cell::Text(r.candidate.detector.name().into()),
                Cell::Text(r.baseline.mode.name().into()),
                Cell::real(r.target_ser),
                opt(r.baseline_db[d]),
                opt(r.candidate_db[d]),
                opt(r.gap(d)),
            ]);
        }
    }
    t
}

/// The six `(n_r, n_p)` pairs of the balanced-spacing table.
pub const TABLE1_PAIRS: [(usize, usize); 6] = [(2, 4), (4, 4), (4, 8), (8, 4), (8, 8), (8, 16)];

pub fn table1() -> Result<ResultTable> {
    let mut t = ResultTable::new(ExperimentKind::Table1);
    for (n_r, n_p) in TABLE1_PAIRS {
        t.rows.push(vec![
            Cell::Int(n_r as i64),
            Cell::Int(n_p as i64),
            Cell::real(balanced_delta_sq(n_r, n_p)?),
        ]);
    }
    Ok(t)
}
