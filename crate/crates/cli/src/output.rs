use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use kmspin_core::exactnum::{Matrix, Scalar};
use kmspin_core::export::{matrix_to_json, ExportScalar};
use kmspin_core::{GaussianRational, Rational};
use serde_json::{json, Value};

use crate::commands::{CliError, Export, Outcome};
use crate::Format;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn named<T: ExportScalar>(name: &str, m: &Matrix<T>) -> Value {
    json!({"name": name, "matrix": matrix_to_json(m).expect("exported matrices are square")})
}

/// Writes matrices if the command produced any, else its table (CSV) or
/// report (JSON).
pub fn write(path: &Path, format: Format, outcome: &Outcome) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let value = if outcome.exports.is_empty() {
                outcome.report.clone()
            } else {
                let matrices: Vec<Value> = outcome
                    .exports
                    .iter()
                    .map(|e| match e {
                        Export::Rational(name, m) => named(name, m),
                        Export::Gaussian(name, m) => named(name, m),
                        Export::Kron(name, a, b) => named(name, &a.kron(b)),
                    })
                    .collect();
                json!({"report": outcome.report, "matrices": matrices})
            };
            let file = File::create(path).map_err(|e| io(path, e))?;
            serde_json::to_writer_pretty(BufWriter::new(file), &value).map_err(|e| io(path, e))
        }
        Format::Csv => {
            let (header, rows) = if !outcome.exports.is_empty() {
                matrix_rows(&outcome.exports)
            } else if let Some((h, r)) = &outcome.table {
                (h.clone(), r.clone())
            } else {
                return Err(CliError::Usage("csv output is only available for roots, halfspin and rep".into()));
            };
            let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
            w.write_record(&header).map_err(|e| io(path, e))?;
            for row in rows {
                w.write_record(&row).map_err(|e| io(path, e))?;
            }
            w.flush().map_err(|e| io(path, e))
        }
    }
}

/// One row per nonzero entry: name, dim, row, col, re, im.
fn matrix_rows(exports: &[Export]) -> (Vec<String>, Vec<Vec<String>>) {
    fn push<T: Scalar>(rows: &mut Vec<Vec<String>>, name: &str, m: &Matrix<T>, split: impl Fn(&T) -> (String, String)) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = &m[(i, j)];
                if !v.is_zero() {
                    let (re, im) = split(v);
                    rows.push(vec![name.to_string(), m.rows().to_string(), i.to_string(), j.to_string(), re, im]);
                }
            }
        }
    }
    let header = ["name", "dim", "row", "col", "re", "im"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for e in exports {
        match e {
            Export::Rational(name, m) => {
                push(&mut rows, name, m, |v: &Rational| (v.to_pq_string(), "0/1".to_string()))
            }
            Export::Kron(name, a, b) => {
                push(&mut rows, name, &a.kron(b), |v: &Rational| (v.to_pq_string(), "0/1".to_string()))
            }
            Export::Gaussian(name, m) => push(&mut rows, name, m, |v: &GaussianRational| {
                (v.re.to_pq_string(), v.im.to_pq_string())
            }),
        }
    }
    (header, rows)
}
