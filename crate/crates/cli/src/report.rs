//! Report records and their CSV and JSON serializations.
//!
//! Every integer and rational is a decimal string ("num/den" for proper
//! fractions); vectors inside CSV cells are space-separated.
//!
//! CSV layouts, one row per manifold in input order:
//! - wrt: `id,a_0,…,a_{K−2},error`
//! - ohtsuki: `id,h1,lambda_cw,lambda_0,…,lambda_N,error`
//! - verify: `id,k,n,n1,target,pass,lhs,rhs,residuals,error`
//! - tables: `id,a_0,…,a_{K−2},lambda_0,…,lambda_N,a_tilde_0,…,a_tilde_{K−2},error`
//!
//! JSON documents are the serde forms of the record types below.

use serde::{Deserialize, Serialize};

use qwrt::verify::{ConvergenceReport, TablesReport};
use qwrt::Error;

/// A machine-readable failure, tied to a manifold id or an input line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub kind: String,
    pub message: String,
}

impl Diagnostic {
    pub fn from_error(id: Option<&str>, e: &Error) -> Self {
        let kind = format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect();
        Diagnostic { id: id.map(str::to_string), line: None, kind, message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrtRecord {
    pub id: String,
    pub k: u64,
    pub a: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OhtsukiRecord {
    pub id: String,
    pub n: usize,
    pub h1: String,
    pub lambda_cw: String,
    pub lambda: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ConvergenceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k: u64,
    pub n: usize,
    pub target: Option<u32>,
    pub entries: Vec<VerifyEntry>,
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("report types serialize") + "\n"
}

fn csv_string(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}_{i}"))
}

/// Pads a vector to `n` cells so failed rows keep the column count.
fn cells(v: &[String], n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| v.get(i).cloned().unwrap_or_default())
}

fn diag_cell(d: &Option<Diagnostic>) -> String {
    d.as_ref().map(|d| format!("{}: {}", d.kind, d.message)).unwrap_or_default()
}

pub fn wrt_csv(k: u64, recs: &[WrtRecord]) -> String {
    let w = k as usize - 1;
    let header = std::iter::once("id".to_string()).chain(indexed("a", w)).chain(["error".into()]).collect();
    let rows = recs.iter().map(|r| std::iter::once(r.id.clone()).chain(cells(&r.a, w)).chain([diag_cell(&r.error)]).collect()).collect();
    csv_string(header, rows)
}

pub fn ohtsuki_csv(n: usize, recs: &[OhtsukiRecord]) -> String {
    let header = ["id", "h1", "lambda_cw"].map(String::from).into_iter().chain(indexed("lambda", n + 1)).chain(["error".into()]).collect();
    let rows = recs
        .iter()
        .map(|r| [r.id.clone(), r.h1.clone(), r.lambda_cw.clone()].into_iter().chain(cells(&r.lambda, n + 1)).chain([diag_cell(&r.error)]).collect())
        .collect();
    csv_string(header, rows)
}

pub fn verify_csv(rep: &VerifyReport) -> String {
    let header = ["id", "k", "n", "n1", "target", "pass", "lhs", "rhs", "residuals", "error"].map(String::from).to_vec();
    let rows = rep
        .entries
        .iter()
        .map(|e| {
            let mut row = vec![e.id.clone(), rep.k.to_string(), rep.n.to_string()];
            match &e.report {
                Some(r) => row.extend([
                    r.n1.to_string(),
                    r.target.map(|t| t.to_string()).unwrap_or_default(),
                    r.pass.to_string(),
                    r.lhs.join(" "),
                    r.rhs.join(" "),
                    r.residuals.join(" "),
                ]),
                None => row.extend(["", "", "false", "", "", ""].map(String::from)),
            }
            row.push(diag_cell(&e.error));
            row
        })
        .collect();
    csv_string(header, rows)
}

pub fn tables_csv(rep: &TablesReport) -> String {
    let w = rep.k as usize - 1;
    let header = std::iter::once("id".to_string())
        .chain(indexed("a", w))
        .chain(indexed("lambda", rep.n + 1))
        .chain(indexed("a_tilde", w))
        .chain(["error".into()])
        .collect();
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            std::iter::once(r.id.clone())
                .chain(cells(&r.a, w))
                .chain(cells(&r.lambda, rep.n + 1))
                .chain(cells(&r.a_tilde, w))
                .chain([r.error.clone().unwrap_or_default()])
                .collect()
        })
        .collect();
    csv_string(header, rows)
}
