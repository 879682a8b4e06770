//! Figure-data regeneration with parameters hard-wired to the published
//! plots: fig1a-fig1d sweep Rt over [0, 2π] for the four quadratic cases,
//! fig2 sweeps the quartic uncertainties across the central validity window.

use crate::csv;
use crate::error::CliError;
use moyal_core::quadratic::{closed_form_uncertainties, ClosedFormCase};
use moyal_core::quartic;
use moyal_core::states::quartic_coherent;
use moyal_core::SimConfig;
use std::f64::consts::PI;
use std::path::Path;

pub const FIGURE_NAMES: [&str; 5] = ["fig1a", "fig1b", "fig1c", "fig1d", "fig2"];

const FIG1_SAMPLES: usize = 400;
const FIG2_HALF_SAMPLES: usize = 200;
/// Guard band at the fig2 validity boundary, where the closed forms
/// overflow double precision.
const FIG2_GUARD: f64 = 1e-3 * PI;

/// The quadratic case behind a fig1 panel, with γ = 1.
pub fn fig1_case(name: &str) -> Option<ClosedFormCase> {
    match name {
        "fig1a" => Some(ClosedFormCase::EllipticCoherent { omega: 5.0, r: 2.0, theta: PI / 3.0 }),
        "fig1b" => Some(ClosedFormCase::Beta0Coherent { omega: 5.0, r: 2.0 }),
        "fig1c" => Some(ClosedFormCase::HyperbolicOmega0Coherent { r: 2.0, theta: PI / 4.0 }),
        "fig1d" => Some(ClosedFormCase::ScalingGeneral { r: 2.0 }),
        _ => None,
    }
}

/// Rows (x, var_Q, var_P, product) for a figure.
pub fn figure_rows(name: &str) -> Result<(String, Vec<Vec<f64>>), CliError> {
    let cfg = SimConfig::default();
    if let Some(case) = fig1_case(name) {
        let h = case.hamiltonian();
        let big_r = h.big_r;
        let mut rows = Vec::with_capacity(FIG1_SAMPLES);
        for i in 0..FIG1_SAMPLES {
            let x = 2.0 * PI * i as f64 / (FIG1_SAMPLES - 1) as f64;
            let t = x / big_r;
            let (vq, vp, product) = closed_form_uncertainties(&case, 1.0, t, &cfg)?;
            rows.push(vec![x, vq, vp, product]);
        }
        let comment = format!(
            "moyal-lab v{} figure={name} hbar=1 gamma=1 omega={} alpha={} beta={} r={} theta={} R={} x=Rt samples={FIG1_SAMPLES}",
            env!("CARGO_PKG_VERSION"),
            h.omega,
            h.alpha,
            h.beta,
            h.r,
            h.theta,
            big_r,
        );
        return Ok((comment, rows));
    }
    if name == "fig2" {
        let lambda = 1.0;
        let state = quartic_coherent(0.01, 1.0, 1.0, &cfg)?;
        let lim = PI / 8.0 - FIG2_GUARD;
        let step = lim / FIG2_HALF_SAMPLES as f64;
        let mut rows = Vec::with_capacity(2 * FIG2_HALF_SAMPLES + 1);
        for i in 0..=(2 * FIG2_HALF_SAMPLES) {
            let t = (i as f64 - FIG2_HALF_SAMPLES as f64) * step;
            let ((vq, vp, product), _) = quartic::uncertainties(&state, lambda, t, &cfg)?;
            rows.push(vec![t, vq, vp, product]);
        }
        let comment = format!(
            "moyal-lab v{} figure=fig2 hbar=1 lambda=1 w=1 q0=0.01 p0=1 x=t window=({},{}) guard={FIG2_GUARD} samples={}",
            env!("CARGO_PKG_VERSION"),
            -lim,
            lim,
            2 * FIG2_HALF_SAMPLES + 1,
        );
        return Ok((comment, rows));
    }
    Err(CliError::Config {
        line: 0,
        msg: format!("unknown figure `{name}` (expected one of {FIGURE_NAMES:?})"),
    })
}

pub fn write_figure(name: &str, path: &Path) -> Result<(), CliError> {
    let (comment, rows) = figure_rows(name)?;
    csv::write_table(path, &comment, &["x", "var_Q", "var_P", "product"], &rows, &[])
}
