use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Solver, SweepRow};

fn number(v: Option<f64>) -> String {
    // `{:e}` prints the shortest representation that round-trips.
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn header(solvers: &[Solver]) -> Vec<String> {
    let mut h = vec!["swept_value".to_owned()];
    for s in solvers {
        h.push(format!("gamma_c_{}", s.column()));
        h.push(format!("n_f_{}", s.column()));
    }
    h.extend(solvers.iter().map(|s| format!("diag_{}", s.column())));
    h
}

/// Header plus one record per row. Solver columns follow the order of the
/// first row.
pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let Some(first) = rows.first() else {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "no rows to write"));
    };
    let solvers: Vec<Solver> = first.results.iter().map(|r| r.solver).collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&solvers))?;
    for row in rows {
        let mut record = vec![number(Some(row.value))];
        let mut diags = Vec::with_capacity(solvers.len());
        for &s in &solvers {
            match row.result(s) {
                Some(r) => {
                    record.push(number(r.gamma_c));
                    record.push(number(r.n_f));
                    diags.push(r.diagnostic.clone());
                }
                None => {
                    record.extend([String::new(), String::new()]);
                    diags.push("not evaluated".to_owned());
                }
            }
        }
        record.extend(diags);
        w.write_record(&record)?;
    }
    w.flush()
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> std::io::Result<()> {
    let file = BufWriter::new(File::create(path)?);
    emit_csv(rows, file)
}
