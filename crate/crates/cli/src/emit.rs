//! Report emission: a JSON envelope with embedded provenance metadata, CSV
//! with a metadata comment line, and the structured failure type behind the
//! process exit codes.
//!
//! Determinism contract: identical recipes produce byte-identical reports.
//! JSON objects are serialized through `serde_json::Value`, whose map type
//! keeps keys sorted; floats print in shortest round-trip form; nothing
//! derives from the clock, the environment, or memory layout.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::recipe::Recipe;

/// One failed run: the process exit code, a stable machine-readable kind, and
/// a human-readable message. Printed to stderr as a single JSON object.
pub struct Failure {
    pub exit: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Failure {
        Failure { exit: 4, kind: "parse", message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Failure {
        Failure { exit: 2, kind: "precondition", message: message.into() }
    }

    pub fn to_stderr_json(&self) -> String {
        let doc = json!({
            "error": {
                "exit": self.exit,
                "kind": self.kind,
                "message": self.message,
            }
        });
        serde_json::to_string(&doc).expect("error document serializes")
    }
}

impl From<conformal4::Error> for Failure {
    fn from(e: conformal4::Error) -> Failure {
        match e {
            conformal4::Error::Parse { .. } => Failure { exit: 4, kind: "parse", message: e.to_string() },
            conformal4::Error::Precondition(_) => {
                Failure { exit: 2, kind: "precondition", message: e.to_string() }
            }
            conformal4::Error::Degenerate { .. } => {
                Failure { exit: 2, kind: "degenerate-metric", message: e.to_string() }
            }
            conformal4::Error::Internal(_) => {
                Failure { exit: 3, kind: "internal", message: e.to_string() }
            }
        }
    }
}

/// Non-convergence keeps exit code 3 but the report is still emitted first.
pub const EXIT_OK: u8 = 0;
pub const EXIT_UNCONVERGED: u8 = 3;

fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure {
            exit: 2,
            kind: "io",
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes).and_then(|_| lock.flush()).map_err(|e| Failure {
                exit: 2,
                kind: "io",
                message: format!("cannot write to stdout: {e}"),
            })
        }
    }
}

/// Wrap a result in the provenance envelope and write it as pretty JSON.
pub fn emit_json(recipe: &Recipe, result: Value, out: Option<&Path>) -> Result<(), Failure> {
    let doc = json!({
        "command": recipe.command,
        "meta": recipe.meta(),
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    write_bytes(out, text.as_bytes())
}

/// Write CSV rows under a fixed header, preceded by one `#` metadata comment
/// line carrying the same provenance as the JSON envelope.
pub fn emit_csv(
    recipe: &Recipe,
    schema: &str,
    header: &[&str],
    rows: &[Vec<String>],
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut buf = Vec::new();
    let meta = format!(
        "# tool=conformal4 version={} recipe={} schema={}\n",
        env!("CARGO_PKG_VERSION"),
        recipe.fingerprint(),
        schema
    );
    buf.extend_from_slice(meta.as_bytes());
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).expect("csv header");
        for row in rows {
            w.write_record(row).expect("csv row");
        }
        w.flush().expect("csv flush");
    }
    write_bytes(out, &buf)
}

/// Plain-text output (the human-readable catalog), still carrying provenance.
pub fn emit_text(recipe: &Recipe, body: &str, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = format!(
        "conformal4 {}  recipe {}\n\n",
        env!("CARGO_PKG_VERSION"),
        recipe.fingerprint()
    );
    text.push_str(body);
    write_bytes(out, text.as_bytes())
}

/// Shortest round-trip text for a float, shared by every CSV writer so the
/// same number always prints the same way.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
