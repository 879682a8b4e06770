//! Scenario evaluation: closed-form uncertainty traces with optional
//! oracle cross-checks.

use crate::config::{Scenario, SystemKind};
#[cfg(test)]
use crate::config::StateKind;
use crate::error::CliError;
use moyal_core::oracle::{classical_transport, quadrature_expectation};
use moyal_core::quadratic::{classify, propagate_covariance, ClosedFormCase, CovarianceMatrix};
use moyal_core::quartic::{self, Component, QuarticQuantity, ValidityInterval};
use moyal_core::states::GaussianState;
use moyal_core::{Regime, SimConfig};

const HEISENBERG_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub t: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub product: f64,
    pub heisenberg_ok: bool,
    /// mean_Q, mean_P, var_Q, var_P from the independent oracle.
    pub oracle: Option<[f64; 4]>,
}

#[derive(Debug)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    /// Times dropped because they fall outside every validity window.
    pub skipped: Vec<f64>,
    /// Validity windows overlapping the requested range (quartic only).
    pub windows: Vec<ValidityInterval>,
    /// Engine used for the primary columns.
    pub engine: &'static str,
    /// Worst relative deviation between primary and oracle columns.
    pub oracle_max_rel: Option<f64>,
}

/// Closed-form case matching a quadratic scenario, if the paper provides one.
fn quadratic_case(h: &moyal_core::QuadraticHamiltonian) -> Option<ClosedFormCase> {
    match h.regime {
        Regime::Elliptic => Some(ClosedFormCase::EllipticGeneral {
            omega: h.omega,
            r: h.r,
            theta: h.theta,
        }),
        Regime::Hyperbolic if h.omega == 0.0 && h.r > 0.0 => {
            if h.theta == 0.0 {
                Some(ClosedFormCase::ScalingGeneral { r: h.r })
            } else {
                Some(ClosedFormCase::HyperbolicOmega0General { r: h.r, theta: h.theta })
            }
        }
        Regime::Parabolic => Some(ClosedFormCase::Parabolic {
            omega: h.omega,
            alpha: h.alpha,
            beta: h.beta,
        }),
        _ => None,
    }
}

pub fn simulate(scenario: &Scenario, with_oracle: bool) -> Result<Trace, CliError> {
    let cfg = SimConfig::with_hbar(scenario.hbar)?;
    match scenario.system {
        SystemKind::Quadratic { omega, alpha, beta } => {
            simulate_quadratic(scenario, omega, alpha, beta, with_oracle, &cfg)
        }
        SystemKind::Quartic { lambda } => simulate_quartic(scenario, lambda, with_oracle, &cfg),
    }
}

fn simulate_quadratic(
    scenario: &Scenario,
    omega: f64,
    alpha: f64,
    beta: f64,
    with_oracle: bool,
    cfg: &SimConfig,
) -> Result<Trace, CliError> {
    let h = classify(omega, alpha, beta);
    let (q0, p0, vq0, vp0) = scenario.state_moments(cfg.hbar);
    let gamma = cfg.hbar / (2.0 * vq0);
    let case = quadratic_case(&h);
    let engine = if case.is_some() {
        "closed-form"
    } else {
        "covariance-propagation"
    };
    let sigma0 = CovarianceMatrix::diagonal(vq0, vp0);
    let state = GaussianState::new(q0, p0, vq0, vp0, cfg)?;

    let mut rows = Vec::with_capacity(scenario.time.samples);
    let mut worst = 0.0f64;
    for t in scenario.time.times() {
        let m = h.flow(t);
        let (mean_q, mean_p) = m.apply(q0, p0);
        let (var_q, var_p, product) = match &case {
            Some(case) => moyal_core::quadratic::closed_form_uncertainties(case, gamma, t, cfg)?,
            None => {
                let s = propagate_covariance(&h, &sigma0, t);
                (s.var_q, s.var_p, s.var_q * s.var_p)
            }
        };
        let oracle = if with_oracle {
            let (means, sigma) = classical_transport(&h, &state, t);
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
            worst = worst
                .max(rel(var_q, sigma.var_q))
                .max(rel(var_p, sigma.var_p))
                .max(rel(product, sigma.var_q * sigma.var_p));
            Some([means.0, means.1, sigma.var_q, sigma.var_p])
        } else {
            None
        };
        rows.push(TraceRow {
            t,
            mean_q,
            mean_p,
            var_q,
            var_p,
            product,
            heisenberg_ok: product >= cfg.hbar * cfg.hbar / 4.0 - HEISENBERG_SLACK,
            oracle,
        });
    }
    Ok(Trace {
        rows,
        skipped: Vec::new(),
        windows: Vec::new(),
        engine,
        oracle_max_rel: with_oracle.then_some(worst),
    })
}

fn simulate_quartic(
    scenario: &Scenario,
    lambda: f64,
    with_oracle: bool,
    cfg: &SimConfig,
) -> Result<Trace, CliError> {
    let (q0, p0, vq0, vp0) = scenario.state_moments(cfg.hbar);
    let state = GaussianState::new(q0, p0, vq0, vp0, cfg)?;

    // validity windows overlapping the requested range
    let hl = (cfg.hbar * lambda).abs();
    if hl == 0.0 {
        return Err(CliError::Validity("quartic evolution requires λ ≠ 0".into()));
    }
    let n_lo = (scenario.time.start * hl / std::f64::consts::PI).round() as i64 - 1;
    let n_hi = (scenario.time.end * hl / std::f64::consts::PI).round() as i64 + 1;
    let mut windows = Vec::new();
    for n in n_lo..=n_hi {
        let w = quartic::validity(QuarticQuantity::Uncertainties, lambda, cfg, n)?;
        if w.t_hi > scenario.time.start && w.t_lo < scenario.time.end {
            windows.push(w);
        }
    }

    let mut rows = Vec::with_capacity(scenario.time.samples);
    let mut skipped = Vec::new();
    let mut worst = 0.0f64;
    for t in scenario.time.times() {
        let inside = windows.iter().any(|w| w.contains(t));
        if !inside {
            skipped.push(t);
            continue;
        }
        let ((mean_q, mean_p), _) = quartic::first_moments(&state, lambda, t, cfg)?;
        let ((var_q, var_p, product), _) = quartic::uncertainties(&state, lambda, t, cfg)?;
        let oracle = if with_oracle {
            let flow = quartic::flow_quantum(lambda, t, cfg)?;
            let sq = quartic::star_square(lambda, t, Component::Q, cfg)?;
            let sp = quartic::star_square(lambda, t, Component::P, cfg)?;
            let om_q = quadrature_expectation(|q, p| flow.eval_q(q, p), &state, cfg)?;
            let om_p = quadrature_expectation(|q, p| flow.eval_p(q, p), &state, cfg)?;
            let ov_q = quadrature_expectation(|q, p| sq.eval(q, p), &state, cfg)? - om_q * om_q;
            let ov_p = quadrature_expectation(|q, p| sp.eval(q, p), &state, cfg)? - om_p * om_p;
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
            // means compared with an absolute floor since they can vanish
            let mrel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-6);
            worst = worst
                .max(rel(var_q, ov_q))
                .max(rel(var_p, ov_p))
                .max(mrel(mean_q, om_q))
                .max(mrel(mean_p, om_p));
            Some([om_q, om_p, ov_q, ov_p])
        } else {
            None
        };
        rows.push(TraceRow {
            t,
            mean_q,
            mean_p,
            var_q,
            var_p,
            product,
            heisenberg_ok: product >= cfg.hbar * cfg.hbar / 4.0 - HEISENBERG_SLACK,
            oracle,
        });
    }

    if rows.is_empty() {
        let listing: Vec<String> = windows
            .iter()
            .map(|w| format!("({}, {}) [n = {}]", w.t_lo, w.t_hi, w.window))
            .collect();
        return Err(CliError::Validity(format!(
            "no sample falls inside a validity window; windows overlapping the range: {}",
            if listing.is_empty() {
                "none".to_string()
            } else {
                listing.join(", ")
            }
        )));
    }

    Ok(Trace {
        rows,
        skipped,
        windows,
        engine: "closed-form",
        oracle_max_rel: with_oracle.then_some(worst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Column, TimeGrid};

    fn ho_scenario() -> Scenario {
        Scenario {
            system: SystemKind::Quadratic { omega: 1.0, alpha: 0.0, beta: 0.0 },
            state: StateKind::Coherent { q0: 1.0, p0: 0.0 },
            hbar: 1.0,
            time: TimeGrid { start: 0.0, end: 2.0 * std::f64::consts::PI, samples: 50 },
            columns: Column::ALL.to_vec(),
        }
    }

    #[test]
    fn ho_trace_is_coherent_throughout() {
        let trace = simulate(&ho_scenario(), false).unwrap();
        assert_eq!(trace.rows.len(), 50);
        for row in &trace.rows {
            assert!((row.var_q - 0.5).abs() < 1e-12);
            assert!((row.var_p - 0.5).abs() < 1e-12);
            assert!(row.heisenberg_ok);
        }
    }

    #[test]
    fn quadratic_oracle_discrepancy_is_tiny() {
        let mut sc = ho_scenario();
        sc.system = SystemKind::Quadratic {
            omega: 5.0,
            alpha: 2.0 * (std::f64::consts::PI / 3.0).cos(),
            beta: 2.0 * (std::f64::consts::PI / 3.0).sin(),
        };
        let trace = simulate(&sc, true).unwrap();
        assert!(trace.oracle_max_rel.unwrap() <= 1e-10);
    }

    #[test]
    fn quartic_trace_clips_to_windows() {
        let sc = Scenario {
            system: SystemKind::Quartic { lambda: 1.0 },
            state: StateKind::QuarticCoherent { q0: 0.01, p0: 1.0, w: 1.0 },
            hbar: 1.0,
            time: TimeGrid { start: -1.0, end: 1.0, samples: 101 },
            columns: Column::ALL.to_vec(),
        };
        let trace = simulate(&sc, false).unwrap();
        assert!(!trace.rows.is_empty());
        assert!(!trace.skipped.is_empty());
        for row in &trace.rows {
            assert!(row.t.abs() < std::f64::consts::PI / 8.0);
        }
    }

    #[test]
    fn quartic_fully_outside_is_a_validity_error() {
        let sc = Scenario {
            system: SystemKind::Quartic { lambda: 1.0 },
            state: StateKind::QuarticCoherent { q0: 0.0, p0: 0.0, w: 1.0 },
            hbar: 1.0,
            time: TimeGrid { start: 0.5, end: 1.0, samples: 10 },
            columns: Column::ALL.to_vec(),
        };
        match simulate(&sc, false) {
            Err(CliError::Validity(msg)) => assert!(msg.contains("window")),
            other => panic!("expected validity error, got {other:?}"),
        }
    }
}
