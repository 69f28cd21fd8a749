use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::suite::SuiteConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Random,
    Loaded,
    KnownAnswer,
    Counterexample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A counterexample that failed the check, as it should.
    ExpectedFail,
}

/// Cohomology dimensions `h^lo, h^{lo+1}, ...` of one named complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub name: String,
    pub lo: i32,
    pub dims: Vec<usize>,
}

impl DimTable {
    pub fn new(name: &str, lo: i32, dims: Vec<usize>) -> Self {
        DimTable { name: name.into(), lo, dims }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    pub kind: RecordKind,
    pub digest: String,
    pub status: Status,
    pub tables: Vec<DimTable>,
    pub witness: serde_json::Value,
    /// Present on every record that did not pass, for replay.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected_fail: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Summary {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Summary { total: records.len(), passed: count(Status::Pass), failed: count(Status::Fail), expected_fail: count(Status::ExpectedFail) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, records: Vec<Record>) -> Report {
        Report { suite: config.suite.clone(), summary: Summary::of(&records), config, records }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (json, csv, text)")),
        }
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::ExpectedFail => "expected-fail",
    }
}

/// Table names in order of first appearance.
fn table_names(report: &Report) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for t in report.records.iter().flat_map(|r| &r.tables) {
        if !names.contains(&t.name) {
            names.push(t.name.clone());
        }
    }
    names
}

pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => emit_csv(report),
        Format::Text => Ok(emit_text(report).into_bytes()),
    }
}

/// One row per (record, degree); a column per table holds `h^degree`.
fn emit_csv(report: &Report) -> Result<Vec<u8>> {
    let names = table_names(report);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string(), "kind".into(), "digest".into(), "status".into(), "degree".into()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for r in &report.records {
        let lo = r.tables.iter().map(|t| t.lo).min();
        let hi = r.tables.iter().map(|t| t.lo + t.dims.len() as i32).max();
        let (Some(lo), Some(hi)) = (lo, hi) else { continue };
        for q in lo..hi {
            let mut row = vec![
                r.index.to_string(),
                serde_json::to_value(r.kind)?.as_str().unwrap_or_default().to_string(),
                r.digest.clone(),
                status_name(r.status).into(),
                q.to_string(),
            ];
            for n in &names {
                let cell = r
                    .tables
                    .iter()
                    .find(|t| &t.name == n)
                    .and_then(|t| usize::try_from(q - t.lo).ok().and_then(|i| t.dims.get(i)))
                    .map_or(String::new(), |v| v.to_string());
                row.push(cell);
            }
            w.write_record(&row)?;
        }
    }
    Ok(w.into_inner()?)
}

fn emit_text(report: &Report) -> String {
    let mut s = String::new();
    let c = &report.config;
    let _ = writeln!(s, "suite {} field {} d {} dim-max {} seed {} count {}", report.suite, c.field, c.d, c.dim_max, c.seed, c.count);
    for r in &report.records {
        let tables: Vec<String> = r.tables.iter().map(|t| format!("{}@{}={:?}", t.name, t.lo, t.dims)).collect();
        let _ = writeln!(s, "{:>5} {:<14} {:<13} {} {}", r.index, format!("{:?}", r.kind).to_lowercase(), status_name(r.status), &r.digest[..12.min(r.digest.len())], tables.join(" "));
    }
    let m = &report.summary;
    let _ = writeln!(s, "{} records: {} pass, {} fail, {} expected-fail", m.total, m.passed, m.failed, m.expected_fail);
    s
}
