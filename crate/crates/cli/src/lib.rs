//! The `compute` command line: parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 a requested target N₁ was not met, 2 invalid
//! input, 3 an internal arithmetic contract was violated. Diagnostics go to
//! stderr as one JSON object per line.

pub mod report;
pub mod spec;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwrt::invariants::{ohtsuki, wrt_exact, Manifold};
use qwrt::numkit::{check_odd_prime, fmt_rat};
use qwrt::verify::{emit_tables, reduced_series_check, reference_manifolds, TableRow, TablesReport};
use qwrt::Error;

use report::{Diagnostic, OhtsukiRecord, VerifyEntry, VerifyReport, WrtRecord};
use spec::{parse_specs, ManifoldSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TARGET: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "compute", about = "Exact quantum invariants of rational homology spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients a_0..a_{K−2} of the normalized SO(3) invariant at a K-th root of unity.
    Wrt {
        #[arg(long = "K")]
        k: u64,
        #[command(flatten)]
        io: Io,
    },
    /// The perturbative series λ_0..λ_N.
    Ohtsuki {
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Compare a_n with the reduced partial sum of order N and report N₁.
    Verify {
        #[arg(long = "K")]
        k: u64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        target: Option<u32>,
        #[command(flatten)]
        io: Io,
    },
    /// The a_n, λ_n and reduced-sum grids for a spec file or the built-in bundle.
    Tables {
        #[arg(long = "K")]
        k: u64,
        #[arg(long = "N")]
        n: usize,
        /// Built-in manifolds to include; all of them when omitted.
        #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
        ids: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        spec: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Io {
    /// Directory for report files; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Line-delimited JSON specs, `-` for stdin.
    pub spec: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Where a command's output goes.
struct Sink<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Sink<'_> {
    fn diag(&mut self, d: &Diagnostic) {
        let _ = writeln!(self.stderr, "{}", serde_json::to_string(d).expect("diagnostic serializes"));
    }
}

/// Severity of an engine error as an exit code.
fn error_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_CONTRACT
    }
}

/// Contract violations dominate input errors, which dominate unmet targets.
fn worst(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        EXIT_CONTRACT => 3,
        EXIT_INPUT => 2,
        EXIT_TARGET => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

struct Failure {
    code: i32,
    diag: Diagnostic,
}

type Outcome<T> = std::result::Result<T, Failure>;

fn input_failure(kind: &str, line: Option<usize>, message: String) -> Failure {
    Failure { code: EXIT_INPUT, diag: Diagnostic { id: None, line, kind: kind.into(), message } }
}

fn engine_failure(e: Error) -> Failure {
    Failure { code: error_code(&e), diag: Diagnostic::from_error(None, &e) }
}

fn load_specs(path: &Path) -> Outcome<(Vec<ManifoldSpec>, Option<PathBuf>)> {
    let (text, base) = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| input_failure("Io", None, e.to_string()))?;
        (s, None)
    } else {
        let s = std::fs::read_to_string(path).map_err(|e| input_failure("Io", None, format!("{}: {e}", path.display())))?;
        (s, path.parent().map(Path::to_path_buf))
    };
    let specs = parse_specs(&text).map_err(|(line, m)| input_failure("MalformedSpec", Some(line), m))?;
    Ok((specs, base))
}

/// Each spec validated to a manifold, in input order.
type Validated = Vec<(String, std::result::Result<Manifold, Error>)>;

fn validate(specs: &[ManifoldSpec], base: Option<&Path>) -> Validated {
    specs.iter().map(|s| (s.id.clone(), s.to_manifold(base))).collect()
}

fn emit(sink: &mut Sink, out: &Option<PathBuf>, name: &str, formats: &[Format], render: &dyn Fn(Format) -> String) -> Outcome<()> {
    match out {
        None => {
            let _ = sink.stdout.write_all(render(formats[0]).as_bytes());
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| input_failure("Io", None, format!("{}: {e}", dir.display())))?;
            for &f in formats {
                let ext = if f == Format::Json { "json" } else { "csv" };
                let path = dir.join(format!("{name}.{ext}"));
                std::fs::write(&path, render(f)).map_err(|e| input_failure("Io", None, format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(())
}

/// The formats to produce: the requested one, or both files under --out.
fn formats(requested: Option<Format>, out: &Option<PathBuf>, default: Format) -> Vec<Format> {
    match (requested, out) {
        (Some(Format::Text), Some(_)) | (None, Some(_)) => vec![Format::Csv, Format::Json],
        (Some(f), _) => vec![f],
        (None, None) => vec![default],
    }
}

fn record_error(sink: &mut Sink, code: &mut i32, id: &str, e: &Error) -> Diagnostic {
    let d = Diagnostic::from_error(Some(id), e);
    sink.diag(&d);
    *code = worst(*code, error_code(e));
    d
}

fn cmd_wrt(sink: &mut Sink, k: u64, io: &Io) -> Outcome<i32> {
    check_odd_prime(k).map_err(engine_failure)?;
    let (specs, base) = load_specs(&io.spec)?;
    let mut code = EXIT_OK;
    let mut recs = Vec::new();
    for (id, m) in validate(&specs, base.as_deref()) {
        match m.and_then(|m| wrt_exact(&m, k)) {
            Ok(z) => recs.push(WrtRecord { id, k, a: z.coeffs().iter().map(|c| c.to_string()).collect(), error: None }),
            Err(e) => {
                let d = record_error(sink, &mut code, &id, &e);
                recs.push(WrtRecord { id, k, a: vec![], error: Some(d) });
            }
        }
    }
    let render = |f: Format| match f {
        Format::Text => recs.iter().filter(|r| r.error.is_none()).map(|r| r.a.join(" ") + "\n").collect(),
        Format::Csv => report::wrt_csv(k, &recs),
        Format::Json => report::to_json(&recs),
    };
    emit(sink, &io.out, "wrt", &formats(io.format, &io.out, Format::Text), &render)?;
    Ok(code)
}

fn cmd_ohtsuki(sink: &mut Sink, n: usize, io: &Io) -> Outcome<i32> {
    let (specs, base) = load_specs(&io.spec)?;
    let mut code = EXIT_OK;
    let mut recs = Vec::new();
    for (id, m) in validate(&specs, base.as_deref()) {
        match m.and_then(|m| ohtsuki(&m, n)) {
            Ok(s) => recs.push(OhtsukiRecord {
                id,
                n,
                h1: s.h1.to_string(),
                lambda_cw: fmt_rat(&s.lambda_cw),
                lambda: s.lambda.iter().map(fmt_rat).collect(),
                error: None,
            }),
            Err(e) => {
                let d = record_error(sink, &mut code, &id, &e);
                recs.push(OhtsukiRecord { id, n, h1: String::new(), lambda_cw: String::new(), lambda: vec![], error: Some(d) });
            }
        }
    }
    let render = |f: Format| match f {
        Format::Text => recs.iter().filter(|r| r.error.is_none()).map(|r| r.lambda.join(" ") + "\n").collect(),
        Format::Csv => report::ohtsuki_csv(n, &recs),
        Format::Json => report::to_json(&recs),
    };
    emit(sink, &io.out, "ohtsuki", &formats(io.format, &io.out, Format::Text), &render)?;
    Ok(code)
}

fn cmd_verify(sink: &mut Sink, k: u64, n: usize, target: Option<u32>, io: &Io) -> Outcome<i32> {
    check_odd_prime(k).map_err(engine_failure)?;
    let (specs, base) = load_specs(&io.spec)?;
    let mut code = EXIT_OK;
    let mut entries = Vec::new();
    for (id, m) in validate(&specs, base.as_deref()) {
        match m.and_then(|m| reduced_series_check(&id, &m, k, n, target)) {
            Ok(r) => {
                if !r.pass {
                    code = worst(code, EXIT_TARGET);
                }
                entries.push(VerifyEntry { id, report: Some(r), error: None });
            }
            Err(e) => {
                let d = record_error(sink, &mut code, &id, &e);
                entries.push(VerifyEntry { id, report: None, error: Some(d) });
            }
        }
    }
    let rep = VerifyReport { k, n, target, entries };
    let render = |f: Format| match f {
        Format::Text => rep
            .entries
            .iter()
            .map(|e| match &e.report {
                Some(r) => format!("{} N1={} {}\n", e.id, r.n1, if r.pass { "pass" } else { "fail" }),
                None => format!("{} error\n", e.id),
            })
            .collect(),
        Format::Csv => report::verify_csv(&rep),
        Format::Json => report::to_json(&rep),
    };
    emit(sink, &io.out, "verify", &formats(io.format, &io.out, Format::Json), &render)?;
    Ok(code)
}

fn cmd_tables(
    sink: &mut Sink,
    k: u64,
    n: usize,
    ids: &Option<Vec<String>>,
    spec: &Option<PathBuf>,
    out: &Option<PathBuf>,
    format: Option<Format>,
) -> Outcome<i32> {
    check_odd_prime(k).map_err(engine_failure)?;
    let items: Validated = match spec {
        Some(p) => {
            let (specs, base) = load_specs(p)?;
            validate(&specs, base.as_deref())
        }
        None => {
            let bundle = reference_manifolds();
            match ids {
                None => bundle.into_iter().map(|(id, m)| (id, Ok(m))).collect(),
                Some(ids) => ids
                    .iter()
                    .map(|id| {
                        let m = bundle.iter().find(|(b, _)| b == id).map(|(_, m)| m.clone());
                        (id.clone(), m.ok_or_else(|| Error::InvalidInput(format!("unknown manifold id {id:?}"))))
                    })
                    .collect(),
            }
        }
    };
    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for (id, m) in items {
        let row = match m {
            Ok(m) => {
                let row = emit_tables(&[(id.clone(), m)], k, n).rows.remove(0);
                // emit_tables keeps only the message, so row failures count as input errors
                if let Some(msg) = &row.error {
                    sink.diag(&Diagnostic { id: Some(id), line: None, kind: "TableRow".into(), message: msg.clone() });
                    code = worst(code, EXIT_INPUT);
                }
                row
            }
            Err(e) => {
                record_error(sink, &mut code, &id, &e);
                TableRow::failed(&id, &e)
            }
        };
        rows.push(row);
    }
    let rep = TablesReport { k, n, rows };
    let render = |f: Format| match f {
        Format::Json => report::to_json(&rep),
        Format::Text | Format::Csv => report::tables_csv(&rep),
    };
    emit(sink, out, "tables", &formats(format, out, Format::Csv), &render)?;
    Ok(code)
}

/// Run a parsed command line, returning the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut sink = Sink { stdout, stderr };
    let r = match &cli.command {
        Command::Wrt { k, io } => cmd_wrt(&mut sink, *k, io),
        Command::Ohtsuki { n, io } => cmd_ohtsuki(&mut sink, *n, io),
        Command::Verify { k, n, target, io } => cmd_verify(&mut sink, *k, *n, *target, io),
        Command::Tables { k, n, ids, out, format, spec } => cmd_tables(&mut sink, *k, *n, ids, spec, out, *format),
    };
    match r {
        Ok(code) => code,
        Err(f) => {
            sink.diag(&f.diag);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_precedence() {
        assert_eq!(worst(EXIT_TARGET, EXIT_INPUT), EXIT_INPUT);
        assert_eq!(worst(EXIT_CONTRACT, EXIT_INPUT), EXIT_CONTRACT);
        assert_eq!(worst(EXIT_OK, EXIT_TARGET), EXIT_TARGET);
        assert_eq!(worst(EXIT_INPUT, EXIT_OK), EXIT_INPUT);
    }

    #[test]
    fn contract_errors_map_to_three() {
        assert_eq!(error_code(&Error::ResidualPhase(1)), EXIT_CONTRACT);
        assert_eq!(error_code(&Error::NotPrime(9)), EXIT_INPUT);
    }

    #[test]
    fn formats_default_to_both_files() {
        let out = Some(PathBuf::from("x"));
        assert_eq!(formats(None, &out, Format::Text), vec![Format::Csv, Format::Json]);
        assert_eq!(formats(Some(Format::Json), &out, Format::Text), vec![Format::Json]);
        assert_eq!(formats(None, &None, Format::Text), vec![Format::Text]);
    }
}
