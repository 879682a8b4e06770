//! Library surface of the moyal-lab CLI: scenario configuration, figure
//! regeneration, trace simulation, verification suites and canonical
//! reductions. The binary is a thin clap wrapper over these functions.

pub mod config;
pub mod csv;
pub mod error;
pub mod figures;
pub mod trace;

use error::CliError;
use moyal_core::quadratic::{
    classify, reduce_normal_form, rotate_frame, transformed_coefficients, Branch,
};
use moyal_core::verify::{run_suite, Suite};
use moyal_core::{Regime, SimConfig};
use std::fmt::Write as _;
use std::path::Path;

pub fn cmd_figure(name: &str, out_path: &Path) -> Result<(), CliError> {
    figures::write_figure(name, out_path)
}

pub fn cmd_simulate(
    config_path: &Path,
    out_path: &Path,
    with_oracle: bool,
) -> Result<Vec<String>, CliError> {
    let scenario = config::parse_file(config_path)?;
    let result = trace::simulate(&scenario, with_oracle)?;

    let mut warnings = Vec::new();
    if !result.skipped.is_empty() {
        let windows: Vec<String> = result
            .windows
            .iter()
            .map(|w| format!("({:.6}, {:.6})[n={}]", w.t_lo, w.t_hi, w.window))
            .collect();
        warnings.push(format!(
            "warning: {} of {} samples fall outside the validity windows {} and were clipped",
            result.skipped.len(),
            scenario.time.samples,
            windows.join(", ")
        ));
    }

    let mut header: Vec<&str> = scenario.columns.iter().map(|c| c.name()).collect();
    if with_oracle {
        header.extend(["oracle_mean_Q", "oracle_mean_P", "oracle_var_Q", "oracle_var_P"]);
    }
    let rows: Vec<Vec<f64>> = result
        .rows
        .iter()
        .map(|row| {
            let mut cells: Vec<f64> = scenario
                .columns
                .iter()
                .map(|c| match c {
                    config::Column::T => row.t,
                    config::Column::MeanQ => row.mean_q,
                    config::Column::MeanP => row.mean_p,
                    config::Column::VarQ => row.var_q,
                    config::Column::VarP => row.var_p,
                    config::Column::Product => row.product,
                    config::Column::HeisenbergOk => row.heisenberg_ok as u8 as f64,
                })
                .collect();
            if let Some(oracle) = row.oracle {
                cells.extend(oracle);
            }
            cells
        })
        .collect();

    let comment = format!(
        "moyal-lab v{} simulate config={} engine={} hbar={} samples={} kept={}",
        env!("CARGO_PKG_VERSION"),
        config_path.display(),
        result.engine,
        scenario.hbar,
        scenario.time.samples,
        result.rows.len(),
    );
    let mut trailing = Vec::new();
    if let Some(worst) = result.oracle_max_rel {
        trailing.push(format!("oracle-max-rel-discrepancy = {worst:.3e}"));
        warnings.push(format!(
            "oracle cross-check: max relative discrepancy {worst:.3e}"
        ));
    }
    csv::write_table(out_path, &comment, &header, &rows, &trailing)?;
    Ok(warnings)
}

pub fn parse_suite(name: &str) -> Result<Suite, CliError> {
    match name {
        "all" => Ok(Suite::All),
        "star" => Ok(Suite::Star),
        "quadratic" => Ok(Suite::Quadratic),
        "quartic" => Ok(Suite::Quartic),
        "oracle" => Ok(Suite::Oracle),
        other => Err(CliError::Config {
            line: 0,
            msg: format!(
                "unknown suite `{other}` (expected all, star, quadratic, quartic or oracle)"
            ),
        }),
    }
}

/// Run a verification suite; returns the report lines plus the status.
pub fn cmd_verify(suite: Suite) -> (Vec<String>, Result<(), CliError>) {
    let cfg = SimConfig::default();
    let checks = run_suite(suite, &cfg);
    let mut lines = Vec::new();
    let mut failed = 0usize;
    for check in &checks {
        let verdict = if check.pass() { "pass" } else { "fail" };
        let relation = match check.kind {
            moyal_core::verify::BoundKind::AtMost => "<=",
            moyal_core::verify::BoundKind::AtLeast => ">=",
        };
        lines.push(format!(
            "check {} measured={:.6e} bound{}{:.6e} result={verdict}",
            check.name, check.measured, relation, check.bound
        ));
        if !check.pass() {
            failed += 1;
        }
    }
    lines.push(format!(
        "summary: {} checks, {} failed",
        checks.len(),
        failed
    ));
    let status = if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Verification { failed })
    };
    (lines, status)
}

/// Text report of the canonical structure and a sample normal-form map.
pub fn cmd_reduce(omega: f64, alpha: f64, beta: f64) -> Result<String, CliError> {
    let h = classify(omega, alpha, beta);
    let mut out = String::new();
    writeln!(
        out,
        "H = ½({omega:+.6}{beta:+.6})p² + ½({omega:+.6}-({beta:+.6}))q² + ({alpha:+.6}) qp"
    )
    .ok();
    writeln!(out, "regime: {}", h.regime).ok();
    writeln!(out, "r = {:.12}, theta = {:.12}, R = {:.12}", h.r, h.theta, h.big_r).ok();

    let (rot, hp) = rotate_frame(&h);
    let (op, ap, bp) = transformed_coefficients(&h, &rot);
    writeln!(out, "rotation by theta/2:").ok();
    writeln!(out, "  q' = {:+.12} q {:+.12} p", rot.m11, rot.m12).ok();
    writeln!(out, "  p' = {:+.12} q {:+.12} p", rot.m21, rot.m22).ok();
    writeln!(
        out,
        "  transformed coefficients: omega' = {op:.12}, alpha' = {ap:.12}, beta' = {bp:.2e} (target r = {:.12})",
        hp.r
    )
    .ok();

    if h.regime == Regime::Parabolic {
        writeln!(out, "normal-form reduction: unsupported in the parabolic regime").ok();
        return Ok(out);
    }

    // sample map: a = 1 when admissible, otherwise the largest admissible a
    let a = match h.regime {
        Regime::Elliptic => {
            let a_max = ((h.omega + h.beta).abs() / h.big_r).sqrt();
            if a_max >= 1.0 {
                1.0
            } else {
                a_max
            }
        }
        _ => 1.0,
    };
    let (map, target) = reduce_normal_form(&h, a, Branch::Plus)?;
    let (no, na, nb) = transformed_coefficients(&h, &map);
    writeln!(out, "normal-form map (a = {a}, branch = +):").ok();
    writeln!(out, "  q' = {:+.12} q {:+.12} p", map.m11, map.m12).ok();
    writeln!(out, "  p' = {:+.12} q {:+.12} p", map.m21, map.m22).ok();
    writeln!(out, "  det = {:.12}", map.det()).ok();
    match h.regime {
        Regime::Elliptic => {
            writeln!(out, "  normal form: ½·({:+.12})·(p'² + q'²)", target.omega).ok();
        }
        _ => {
            writeln!(out, "  normal form: ({:+.12})·q'p'", target.alpha).ok();
        }
    }
    writeln!(
        out,
        "  verified coefficients: omega' = {no:.12}, alpha' = {na:.12}, beta' = {nb:.2e}"
    )
    .ok();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_report_elliptic_example() {
        let theta: f64 = std::f64::consts::PI / 3.0;
        let report = cmd_reduce(5.0, 2.0 * theta.cos(), 2.0 * theta.sin()).unwrap();
        assert!(report.contains("regime: elliptic"));
        assert!(report.contains("4.58257569"), "R = sqrt(21): {report}");
    }

    #[test]
    fn reduce_report_ho_identity() {
        let report = cmd_reduce(1.0, 0.0, 0.0).unwrap();
        assert!(report.contains("regime: elliptic"));
        // theta = 0: identity rotation
        assert!(report.contains("q' = +1.000000000000 q +0.000000000000 p"));
    }

    #[test]
    fn reduce_report_hyperbolic() {
        let report = cmd_reduce(0.0, 2.0f64.sqrt(), 2.0f64.sqrt()).unwrap();
        assert!(report.contains("regime: hyperbolic"));
        assert!(report.contains("normal form: (+2.000000000000)·q'p'"));
    }

    #[test]
    fn reduce_report_parabolic() {
        let report = cmd_reduce(5.0, 3.0, 4.0).unwrap();
        assert!(report.contains("regime: parabolic"));
        assert!(report.contains("unsupported"));
    }
}
