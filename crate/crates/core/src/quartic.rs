//! The purely quantum system H = λq²p²: quantum and classical flows,
//! star-squares, closed-form moments and uncertainties in a coherent state,
//! and the validity intervals outside which those formulas cease to exist.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::states::GaussianState;
use std::f64::consts::PI;

/// Times closer to an excluded point than this fraction of π/(ħλ) are
/// treated as singular; sec² overflows before the exact pole.
const SINGULARITY_GUARD: f64 = 1e-9;

/// H = λ q²p².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticHamiltonian {
    pub lambda: f64,
}

impl QuarticHamiltonian {
    pub fn poly(&self) -> crate::poly::PolyObservable {
        crate::poly::PolyObservable::monomial(2, 2, self.lambda)
    }
}

/// Open time interval on which a quantity is defined, with its window index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityInterval {
    pub t_lo: f64,
    pub t_hi: f64,
    pub window: i64,
}

impl ValidityInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.t_lo < t && t < self.t_hi
    }
}

/// Quantity whose validity window is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticQuantity {
    FirstMoments,
    SecondMoments,
    Uncertainties,
    Flow,
}

fn check_lambda(hl: f64) -> Result<()> {
    if hl == 0.0 || !hl.is_finite() {
        return Err(Error::Domain(format!(
            "evolution requires ħλ ≠ 0, got {hl}"
        )));
    }
    Ok(())
}

/// Validity window n of the given quantity.
///
/// First moments live on ((−¼+n)π/ħλ, (¼+n)π/ħλ), second moments on the
/// half-scale windows ((−¼+n)π/2ħλ, (¼+n)π/2ħλ), uncertainties on
/// ((−⅛+n)π/ħλ, (⅛+n)π/ħλ). For the flow the intervals are the gaps between
/// consecutive excluded points πk/(2ħλ); window 0 is (−π/2ħλ, π/2ħλ)
/// because k = 0 is not excluded.
pub fn validity(
    quantity: QuarticQuantity,
    lambda: f64,
    cfg: &SimConfig,
    n: i64,
) -> Result<ValidityInterval> {
    let hl = (cfg.hbar * lambda).abs();
    check_lambda(hl)?;
    let base = PI / hl;
    let (center, half) = match quantity {
        QuarticQuantity::FirstMoments => (n as f64 * base, base / 4.0),
        QuarticQuantity::SecondMoments => (n as f64 * base / 2.0, base / 8.0),
        QuarticQuantity::Uncertainties => (n as f64 * base, base / 8.0),
        QuarticQuantity::Flow => {
            let half_gap = base / 4.0;
            let center = match n {
                0 => 0.0,
                n if n > 0 => (n as f64 + 0.5) * base / 2.0,
                n => (n as f64 - 0.5) * base / 2.0,
            };
            return Ok(ValidityInterval {
                t_lo: center - if n == 0 { 2.0 * half_gap } else { half_gap },
                t_hi: center + if n == 0 { 2.0 * half_gap } else { half_gap },
                window: n,
            });
        }
    };
    Ok(ValidityInterval {
        t_lo: center - half,
        t_hi: center + half,
        window: n,
    })
}

/// The quantum flow Eq.-of-motion solution at a fixed time:
/// Q = sec²(ħλt) q e^{(2/ħ) tan(ħλt) qp}, P with the opposite exponent sign.
#[derive(Debug, Clone, Copy)]
pub struct QuantumFlow {
    sec2: f64,
    exp_coef: f64,
}

impl QuantumFlow {
    pub fn eval_q(&self, q: f64, p: f64) -> f64 {
        self.sec2 * q * (self.exp_coef * q * p).exp()
    }

    pub fn eval_p(&self, q: f64, p: f64) -> f64 {
        self.sec2 * p * (-self.exp_coef * q * p).exp()
    }
}

/// Quantum flow of H = λq²p² at time t.
///
/// Defined for t outside the excluded set {πn/(2ħλ), n = ±1, ±2, …}.
pub fn flow_quantum(lambda: f64, t: f64, cfg: &SimConfig) -> Result<QuantumFlow> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    let spacing = PI / (2.0 * hl.abs());
    let k = (t / spacing).round();
    if k != 0.0 {
        let nearest = k * spacing;
        if (t - nearest).abs() <= SINGULARITY_GUARD * PI / hl.abs() {
            return Err(Error::FlowSingularity { t, nearest });
        }
    }
    let c = (hl * t).cos();
    Ok(QuantumFlow {
        sec2: 1.0 / (c * c),
        exp_coef: 2.0 / cfg.hbar * (hl * t).tan(),
    })
}

/// Classical flow Q_C = q e^{2λt qp}, P_C = p e^{−2λt qp}; global in t.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalFlow {
    exp_coef: f64,
}

impl ClassicalFlow {
    pub fn eval_q(&self, q: f64, p: f64) -> f64 {
        q * (self.exp_coef * q * p).exp()
    }

    pub fn eval_p(&self, q: f64, p: f64) -> f64 {
        p * (-self.exp_coef * q * p).exp()
    }
}

pub fn flow_classical(lambda: f64, t: f64) -> ClassicalFlow {
    ClassicalFlow {
        exp_coef: 2.0 * lambda * t,
    }
}

/// Which star-square to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Q,
    P,
}

/// Closed-form star-square at time t:
/// (Q ⋆ Q)(q,p,t) = sec³(2ħλt) q² e^{(2/ħ) tan(2ħλt) qp}
/// (and the P analogue with the opposite exponent sign). Note the doubled
/// argument 2ħλt relative to the flow itself, which distinguishes Q ⋆ Q
/// from the pointwise Q².
#[derive(Debug, Clone, Copy)]
pub struct StarSquare {
    which: Component,
    sec3: f64,
    exp_coef: f64,
}

impl StarSquare {
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        match self.which {
            Component::Q => self.sec3 * q * q * (self.exp_coef * q * p).exp(),
            Component::P => self.sec3 * p * p * (-self.exp_coef * q * p).exp(),
        }
    }
}

pub fn star_square(lambda: f64, t: f64, which: Component, cfg: &SimConfig) -> Result<StarSquare> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    // singular where cos(2ħλt) = 0: odd multiples of π/(4ħλ)
    let spacing = PI / (4.0 * hl.abs());
    let u = t / spacing;
    let nearest_odd = 2.0 * ((u - 1.0) / 2.0).round() + 1.0;
    let nearest = nearest_odd * spacing;
    if (t - nearest).abs() <= SINGULARITY_GUARD * PI / hl.abs() {
        return Err(Error::StarSquareSingularity { t, nearest });
    }
    let c = (2.0 * hl * t).cos();
    Ok(StarSquare {
        which,
        sec3: 1.0 / (c * c * c),
        exp_coef: 2.0 / cfg.hbar * (2.0 * hl * t).tan(),
    })
}

/// Width parameter w of a pure Gaussian state (var_q = ħw/2).
fn state_width(state: &GaussianState, cfg: &SimConfig) -> Result<f64> {
    let min = cfg.hbar * cfg.hbar / 4.0;
    if (state.var_q * state.var_p - min).abs() > 1e-9 * min {
        return Err(Error::Domain(format!(
            "quartic moment formulas require a pure Gaussian state; variance product {} != ħ²/4",
            state.var_q * state.var_p
        )));
    }
    Ok(2.0 * state.var_q / cfg.hbar)
}

fn window_index(t: f64, hl: f64) -> i64 {
    (t * hl / PI).round() as i64
}

/// The paper's auxiliary pair
/// a(t) = (cos(ħλt) q₀ + w sin(ħλt) p₀)/√cos(2ħλt),
/// b(t) = (−w⁻¹ sin(ħλt) q₀ + cos(ħλt) p₀)/√cos(2ħλt);
/// defined while cos(2ħλt) > 0.
pub fn ab_coefficients(
    state: &GaussianState,
    lambda: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<(f64, f64)> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    let w = state_width(state, cfg)?;
    let c2 = (2.0 * hl * t).cos();
    if c2 <= 0.0 {
        let interval = validity(QuarticQuantity::FirstMoments, lambda, cfg, window_index(t, hl.abs()))?;
        return Err(Error::OutsideValidity { t, interval });
    }
    let root = c2.sqrt();
    let (s, c) = (hl * t).sin_cos();
    let a = (c * state.q0 + w * s * state.p0) / root;
    let b = (-s / w * state.q0 + c * state.p0) / root;
    Ok((a, b))
}

/// ⟨Q⟩, ⟨P⟩ at time t, with the validity window that contains t.
pub fn first_moments(
    state: &GaussianState,
    lambda: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<((f64, f64), ValidityInterval)> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    let w = state_width(state, cfg)?;
    let c2 = (2.0 * hl * t).cos();
    let n = window_index(t, hl.abs());
    let interval = validity(QuarticQuantity::FirstMoments, lambda, cfg, n)?;
    if c2 <= 0.0 || !interval.contains(t) {
        return Err(Error::OutsideValidity { t, interval });
    }
    let (a, b) = ab_coefficients(state, lambda, t, cfg)?;
    let mean_q = a / c2 * ((a * a - state.q0 * state.q0) / (cfg.hbar * w)).exp();
    let mean_p = b / c2 * (w * (b * b - state.p0 * state.p0) / cfg.hbar).exp();
    Ok(((mean_q, mean_p), interval))
}

/// ⟨Q²⟩, ⟨P²⟩ at time t (star squares under the expectation), with the
/// half-scale validity window that contains t.
pub fn second_moments(
    state: &GaussianState,
    lambda: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<((f64, f64), ValidityInterval)> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    let w = state_width(state, cfg)?;
    let c4 = (4.0 * hl * t).cos();
    let n = (t * 2.0 * hl.abs() / PI).round() as i64;
    let interval = validity(QuarticQuantity::SecondMoments, lambda, cfg, n)?;
    if c4 <= 0.0 || !interval.contains(t) {
        return Err(Error::OutsideValidity { t, interval });
    }
    let (a2, b2) = ab_coefficients(state, lambda, 2.0 * t, cfg)?;
    let amp = c4.powf(-1.5);
    let q2 = amp
        * (0.5 * cfg.hbar * w + a2 * a2)
        * ((a2 * a2 - state.q0 * state.q0) / (cfg.hbar * w)).exp();
    let p2 = amp
        * (0.5 * cfg.hbar / w + b2 * b2)
        * (w * (b2 * b2 - state.p0 * state.p0) / cfg.hbar).exp();
    Ok(((q2, p2), interval))
}

/// (ΔQ)², (ΔP)² and their product at time t, with the validity window
/// ((−⅛+n)π/ħλ, (⅛+n)π/ħλ) that contains t.
pub fn uncertainties(
    state: &GaussianState,
    lambda: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<((f64, f64, f64), ValidityInterval)> {
    let hl = cfg.hbar * lambda;
    check_lambda(hl)?;
    let n = window_index(t, hl.abs());
    let interval = validity(QuarticQuantity::Uncertainties, lambda, cfg, n)?;
    if !interval.contains(t) {
        return Err(Error::OutsideValidity { t, interval });
    }
    let ((mq, mp), _) = first_moments(state, lambda, t, cfg)?;
    let ((q2, p2), _) = second_moments(state, lambda, t, cfg)?;
    let var_q = q2 - mq * mq;
    let var_p = p2 - mp * mp;
    let scale = q2.abs().max(p2.abs()).max(1.0);
    if (var_q.is_finite() && var_q < -1e-9 * scale)
        || (var_p.is_finite() && var_p < -1e-9 * scale)
    {
        // guards transcription bugs; the closed forms never go negative
        return Err(Error::FormulaConsistency(format!(
            "negative variance ({var_q}, {var_p}) at t = {t}"
        )));
    }
    Ok(((var_q, var_p, var_q * var_p), interval))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::quartic_coherent;
    use approx::assert_abs_diff_eq;

    fn cfg() -> SimConfig {
        SimConfig::default()
    }

    #[test]
    fn flow_is_identity_at_t0() {
        let f = flow_quantum(1.0, 0.0, &cfg()).unwrap();
        for (q, p) in [(0.3, -1.2), (2.0, 0.5), (-1.0, -1.0)] {
            assert_abs_diff_eq!(f.eval_q(q, p), q, epsilon = 1e-15);
            assert_abs_diff_eq!(f.eval_p(q, p), p, epsilon = 1e-15);
        }
    }

    #[test]
    fn flow_singular_at_half_pi() {
        let err = flow_quantum(1.0, PI / 2.0, &cfg()).unwrap_err();
        match err {
            Error::FlowSingularity { nearest, .. } => {
                assert_abs_diff_eq!(nearest, PI / 2.0, epsilon = 1e-12)
            }
            other => panic!("unexpected {other}"),
        }
        // all πn/(2ħλ) are excluded, including points where sec² is finite
        assert!(flow_quantum(1.0, PI, &cfg()).is_err());
        assert!(flow_quantum(1.0, -3.0 * PI / 2.0, &cfg()).is_err());
        // t = 0 is fine
        assert!(flow_quantum(1.0, 0.0, &cfg()).is_ok());
    }

    #[test]
    fn flow_product_invariant() {
        // Q·P = sec⁴(ħλt) qp
        let c = cfg();
        let t = 0.37;
        let f = flow_quantum(1.0, t, &c).unwrap();
        let sec4 = 1.0 / t.cos().powi(4);
        for (q, p) in [(0.5, 0.7), (-1.1, 0.4), (1.3, -1.3)] {
            assert_abs_diff_eq!(
                f.eval_q(q, p) * f.eval_p(q, p),
                sec4 * q * p,
                epsilon = 1e-12 * sec4.abs()
            );
        }
    }

    #[test]
    fn classical_flow_values() {
        let f = flow_classical(1.0, 0.5);
        assert_abs_diff_eq!(f.eval_q(1.0, 1.0), 1.0f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(f.eval_p(1.0, 1.0), (-1.0f64).exp(), epsilon = 1e-14);
        // qp is a classical invariant
        for (q, p) in [(0.8, -0.3), (1.5, 0.2)] {
            assert_abs_diff_eq!(f.eval_q(q, p) * f.eval_p(q, p), q * p, epsilon = 1e-13);
        }
        let id = flow_classical(1.0, 0.0);
        assert_abs_diff_eq!(id.eval_q(0.4, 0.9), 0.4);
    }

    #[test]
    fn quantum_flow_approaches_classical_as_hbar_vanishes() {
        let lambda = 1.0;
        let t = 0.3;
        let (q, p) = (0.8, -0.6);
        let classical = flow_classical(lambda, t).eval_q(q, p);
        let mut prev_err = f64::INFINITY;
        for hbar in [1e-1, 1e-2, 1e-3, 1e-4] {
            let c = SimConfig::with_hbar(hbar).unwrap();
            let quantum = flow_quantum(lambda, t, &c).unwrap().eval_q(q, p);
            let err = (quantum - classical).abs();
            assert!(err < prev_err, "error should decrease with ħ");
            prev_err = err;
        }
        // O(ħ) convergence: error at ħ = 1e-4 below 1e-3 relative
        assert!(prev_err / classical.abs() < 1e-3);
    }

    #[test]
    fn star_square_reduces_to_squares_at_t0() {
        let c = cfg();
        let sq = star_square(1.0, 0.0, Component::Q, &c).unwrap();
        let sp = star_square(1.0, 0.0, Component::P, &c).unwrap();
        assert_abs_diff_eq!(sq.eval(1.5, 0.7), 1.5 * 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sp.eval(1.5, 0.7), 0.7 * 0.7, epsilon = 1e-15);
    }

    #[test]
    fn star_square_argument_doubling() {
        // tan/sec arguments are 2ħλt, not ħλt
        let c = cfg();
        let t = 0.13;
        let s = star_square(1.0, t, Component::Q, &c).unwrap();
        let expect = |q: f64, p: f64| {
            (2.0 * t).cos().powi(-3) * q * q * (2.0 * (2.0 * t).tan() * q * p).exp()
        };
        for (q, p) in [(0.9, 0.4), (-1.2, 0.8)] {
            assert_abs_diff_eq!(s.eval(q, p), expect(q, p), epsilon = 1e-12 * expect(q, p).abs());
        }
        // singular at odd multiples of π/(4ħλ)
        assert!(star_square(1.0, PI / 4.0, Component::Q, &c).is_err());
        assert!(star_square(1.0, 3.0 * PI / 4.0, Component::P, &c).is_err());
        assert!(star_square(1.0, PI / 2.0, Component::Q, &c).is_ok());
    }

    #[test]
    fn ab_at_t0_and_example_point() {
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        let (a, b) = ab_coefficients(&state, 1.0, 0.0, &c).unwrap();
        assert_abs_diff_eq!(a, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-15);
        // direct evaluation at t = 0.3
        let (a, b) = ab_coefficients(&state, 1.0, 0.3, &c).unwrap();
        let root = (0.6f64).cos().sqrt();
        assert_abs_diff_eq!(a, (0.01 * 0.3f64.cos() + 0.3f64.sin()) / root, epsilon = 1e-14);
        assert_abs_diff_eq!(b, (-0.01 * 0.3f64.sin() + 0.3f64.cos()) / root, epsilon = 1e-14);
    }

    #[test]
    fn ab_diverges_at_validity_boundary() {
        let c = cfg();
        let state = quartic_coherent(0.3, 0.7, 1.0, &c).unwrap();
        let near = PI / 4.0 * (1.0 - 1e-9);
        let (a, b) = ab_coefficients(&state, 1.0, near, &c).unwrap();
        assert!(a.abs() > 1e3 || b.abs() > 1e3);
        assert!(matches!(
            ab_coefficients(&state, 1.0, PI / 4.0 + 1e-6, &c),
            Err(Error::OutsideValidity { .. })
        ));
    }

    #[test]
    fn first_moments_trivial_points() {
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        let ((mq, mp), interval) = first_moments(&state, 1.0, 0.0, &c).unwrap();
        assert_abs_diff_eq!(mq, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(mp, 1.0, epsilon = 1e-15);
        assert_eq!(interval.window, 0);
        // centered state stays centered
        let origin = quartic_coherent(0.0, 0.0, 2.0, &c).unwrap();
        for t in [0.1, 0.5, -0.6] {
            let ((mq, mp), _) = first_moments(&origin, 1.0, t, &c).unwrap();
            assert_eq!(mq, 0.0);
            assert_eq!(mp, 0.0);
        }
    }

    #[test]
    fn second_moments_at_t0() {
        let c = cfg();
        let state = quartic_coherent(0.5, -0.2, 2.0, &c).unwrap();
        let ((q2, p2), _) = second_moments(&state, 1.0, 0.0, &c).unwrap();
        assert_abs_diff_eq!(q2, 1.0 + 0.25, epsilon = 1e-14); // ħw/2 + q0²
        assert_abs_diff_eq!(p2, 0.25 + 0.04, epsilon = 1e-14); // ħ/(2w) + p0²
    }

    #[test]
    fn validity_windows() {
        let c = cfg();
        let u = validity(QuarticQuantity::Uncertainties, 1.0, &c, 0).unwrap();
        assert_abs_diff_eq!(u.t_lo, -PI / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.t_hi, PI / 8.0, epsilon = 1e-15);
        let f = validity(QuarticQuantity::FirstMoments, 1.0, &c, 0).unwrap();
        assert_abs_diff_eq!(f.t_lo, -PI / 4.0, epsilon = 1e-15);
        let s = validity(QuarticQuantity::SecondMoments, 1.0, &c, 0).unwrap();
        assert_abs_diff_eq!(s.t_hi, PI / 8.0, epsilon = 1e-15);
        // nesting for n = 0
        assert!(u.t_lo >= s.t_lo && u.t_hi <= s.t_hi);
        assert!(s.t_lo >= f.t_lo && s.t_hi <= f.t_hi);
        // second-moment windows repeat at half scale
        let s1 = validity(QuarticQuantity::SecondMoments, 1.0, &c, 1).unwrap();
        assert_abs_diff_eq!(s1.t_lo, PI / 2.0 - PI / 8.0, epsilon = 1e-15);
        // flow window 0 spans two gaps because t = 0 is not excluded
        let fl = validity(QuarticQuantity::Flow, 1.0, &c, 0).unwrap();
        assert_abs_diff_eq!(fl.t_lo, -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fl.t_hi, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn uncertainties_at_t0_and_validity() {
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        let ((vq, vp, prod), _) = uncertainties(&state, 1.0, 0.0, &c).unwrap();
        assert_abs_diff_eq!(vq, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(vp, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(prod, 0.25, epsilon = 1e-14);
        // outside the n = 0 window
        match uncertainties(&state, 1.0, 0.5, &c) {
            Err(Error::OutsideValidity { interval, .. }) => {
                assert_eq!(interval.window, 0);
            }
            other => panic!("expected validity error, got {other:?}"),
        }
    }

    #[test]
    fn coherence_returns_at_period() {
        // product = ħ²/4 at t = πn/(ħλ), evaluated inside the n-th window
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        for n in [1i64, 2, -1] {
            let t = n as f64 * PI;
            let ((vq, vp, prod), interval) = uncertainties(&state, 1.0, t, &c).unwrap();
            assert_eq!(interval.window, n);
            assert!((vq - 0.5).abs() <= 1e-12, "var_q {vq} at n = {n}");
            assert!((vp - 0.5).abs() <= 1e-12, "var_p {vp} at n = {n}");
            assert!((prod - 0.25).abs() <= 1e-12);
        }
    }

    #[test]
    fn no_squeezing_for_centered_states() {
        // exact for q0 = 0: neither variance ever drops below its initial value
        let c = cfg();
        let state = quartic_coherent(0.0, 1.0, 1.0, &c).unwrap();
        let guard = 1e-3 * PI;
        let lim = PI / 8.0 - guard;
        for i in 0..2000 {
            let t = -lim + 2.0 * lim * i as f64 / 1999.0;
            let ((vq, vp, _), _) = uncertainties(&state, 1.0, t, &c).unwrap();
            assert!(vq >= 0.5 - 1e-10, "var_q squeezed at t = {t}: {vq}");
            assert!(vp >= 0.5 - 1e-10, "var_p squeezed at t = {t}: {vp}");
        }
    }

    #[test]
    fn displaced_state_dip_is_tiny_and_bounded() {
        // For the displaced state (q0 = 0.01, p0 = 1) the variances dip a few
        // parts in 1e5 below ħ/2 near t = 0 — a real feature of the closed
        // forms, confirmed independently by Gauss-Hermite integration of the
        // flow fields. Pin its scale so a transcription bug cannot hide in it.
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        let guard = 1e-3 * PI;
        let lim = PI / 8.0 - guard;
        let mut min_var = f64::INFINITY;
        for i in 0..10_000 {
            let t = -lim + 2.0 * lim * i as f64 / 9999.0;
            let ((vq, vp, _), _) = uncertainties(&state, 1.0, t, &c).unwrap();
            min_var = min_var.min(vq).min(vp);
        }
        assert!(min_var < 0.5 - 1e-6, "the dip should be observable: {min_var}");
        assert!(min_var > 0.5 - 5e-5, "the dip must stay tiny: {min_var}");
    }

    #[test]
    fn moments_diverge_toward_boundary() {
        let c = cfg();
        let state = quartic_coherent(0.01, 1.0, 1.0, &c).unwrap();
        let boundary = PI / 8.0;
        let mut prev = 0.0;
        for frac in [0.5, 0.8, 0.9, 0.95, 0.99] {
            let ((vq, _, _), _) = uncertainties(&state, 1.0, frac * boundary, &c).unwrap();
            assert!(vq > prev, "variance must grow toward the boundary");
            prev = vq;
        }
        assert!(prev > 10.0);
    }
}
