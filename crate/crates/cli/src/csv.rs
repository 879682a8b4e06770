//! CSV emission: comma separators, `.` decimal point, 17 significant
//! digits, LF line endings; one `#` comment line recording parameters,
//! then the header row.

use crate::error::CliError;
use moyal_core::{GridField, SimConfig};
use std::io::Write;
use std::path::Path;

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a table with a parameter comment, a header and numeric rows.
pub fn write_table(
    path: &Path,
    comment: &str,
    header: &[&str],
    rows: &[Vec<f64>],
    trailing_comments: &[String],
) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(comment);
    out.push('\n');
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for line in trailing_comments {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Snapshot export: one row per grid node with columns q, p, re, im.
pub fn write_grid(path: &Path, field: &GridField, cfg: &SimConfig) -> Result<(), CliError> {
    let grid = field.grid();
    let mut out = String::new();
    out.push_str(&format!(
        "# moyal-lab v{} grid n_q={} n_p={} q=[{},{}) p=[{},{}) hbar={}\n",
        env!("CARGO_PKG_VERSION"),
        grid.n_q,
        grid.n_p,
        grid.q_min,
        grid.q_max,
        grid.p_min,
        grid.p_max,
        cfg.hbar,
    ));
    out.push_str("q,p,re,im\n");
    for ((i, j), v) in field.values().indexed_iter() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_value(grid.q_at(i)),
            format_value(grid.p_at(j)),
            format_value(v.re),
            format_value(v.im)
        ));
    }
    write_atomic(path, out.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(bytes)?;
    Ok(())
}
