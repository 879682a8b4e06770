//! The general quadratic Hamiltonian H = ½(ω+β)p² + ½(ω−β)q² + αqp:
//! regime classification, flow maps, covariance propagation, closed-form
//! uncertainty formulas, minimization times and canonical normal forms.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::poly::PolyObservable;

/// Relative tolerance for the parabolic classification boundary.
const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// ω² > α² + β²: oscillatory flow.
    Elliptic,
    /// ω² < α² + β²: exponential flow.
    Hyperbolic,
    /// ω² = α² + β² within tolerance: linear-in-t flow.
    Parabolic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Elliptic => "elliptic",
            Regime::Hyperbolic => "hyperbolic",
            Regime::Parabolic => "parabolic",
        };
        write!(f, "{s}")
    }
}

/// Quadratic Hamiltonian with derived constants r, θ, R and regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticHamiltonian {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    /// r = |α + iβ|
    pub r: f64,
    /// θ = arg(α + iβ)
    pub theta: f64,
    /// R = √|ω² − α² − β²|
    pub big_r: f64,
    pub regime: Regime,
}

/// Populate the derived constants and regime for (ω, α, β).
pub fn classify(omega: f64, alpha: f64, beta: f64) -> QuadraticHamiltonian {
    let r = alpha.hypot(beta);
    let theta = if r == 0.0 { 0.0 } else { beta.atan2(alpha) };
    let disc = omega * omega - r * r;
    let big_r = disc.abs().sqrt();
    let regime = if disc.abs() <= REGIME_TOL * (omega * omega).max(1.0) {
        Regime::Parabolic
    } else if disc > 0.0 {
        Regime::Elliptic
    } else {
        Regime::Hyperbolic
    };
    QuadraticHamiltonian {
        omega,
        alpha,
        beta,
        r,
        theta,
        big_r,
        regime,
    }
}

impl QuadraticHamiltonian {
    /// The Hamiltonian as a star-algebra element.
    pub fn poly(&self) -> PolyObservable {
        PolyObservable::from_terms([
            ((0, 2), (0.5 * (self.omega + self.beta)).into()),
            ((2, 0), (0.5 * (self.omega - self.beta)).into()),
            ((1, 1), self.alpha.into()),
        ])
    }

    /// Flow map M(t) with (Q, P) = M(t) (q, p).
    pub fn flow(&self, t: f64) -> LinearFlowMap {
        // generator K of the linear Hamilton equations dz/dt = K z
        let k = Mat2 {
            m11: self.alpha,
            m12: self.beta + self.omega,
            m21: self.beta - self.omega,
            m22: -self.alpha,
        };
        let (cos_like, sinc_like) = match self.regime {
            // K² = −R² I
            Regime::Elliptic => {
                let rt = self.big_r * t;
                (rt.cos(), rt.sin() / self.big_r)
            }
            // K² = R² I
            Regime::Hyperbolic => {
                let rt = self.big_r * t;
                (rt.cosh(), rt.sinh() / self.big_r)
            }
            // K² = 0
            Regime::Parabolic => (1.0, t),
        };
        Mat2 {
            m11: cos_like + sinc_like * k.m11,
            m12: sinc_like * k.m12,
            m21: sinc_like * k.m21,
            m22: cos_like + sinc_like * k.m22,
        }
    }
}

/// 2×2 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

/// Flow maps are canonical: det M(t) = 1.
pub type LinearFlowMap = Mat2;

impl Mat2 {
    pub fn identity() -> Self {
        Self {
            m11: 1.0,
            m12: 0.0,
            m21: 0.0,
            m22: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            m11: self.m11 * o.m11 + self.m12 * o.m21,
            m12: self.m11 * o.m12 + self.m12 * o.m22,
            m21: self.m21 * o.m11 + self.m22 * o.m21,
            m22: self.m21 * o.m12 + self.m22 * o.m22,
        }
    }

    pub fn apply(&self, q: f64, p: f64) -> (f64, f64) {
        (self.m11 * q + self.m12 * p, self.m21 * q + self.m22 * p)
    }

    /// Inverse of a unit-determinant map.
    pub fn inverse_unit(&self) -> Self {
        Self {
            m11: self.m22,
            m12: -self.m12,
            m21: -self.m21,
            m22: self.m11,
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.m11 - o.m11)
            .abs()
            .max((self.m12 - o.m12).abs())
            .max((self.m21 - o.m21).abs())
            .max((self.m22 - o.m22).abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    /// |det − 1| normalized by the cancellation scale of the determinant.
    /// Hyperbolic flows reach cosh²(Rt) entry products, where an absolute
    /// det comparison is meaningless in f64.
    pub fn det_defect(&self) -> f64 {
        let scale = (self.m11 * self.m22)
            .abs()
            .max((self.m12 * self.m21).abs())
            .max(1.0);
        (self.det() - 1.0).abs() / scale
    }
}

/// Symmetric second-moment matrix Σ = [[var_q, cov_qp], [cov_qp, var_p]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub var_q: f64,
    pub cov_qp: f64,
    pub var_p: f64,
}

impl CovarianceMatrix {
    pub fn diagonal(var_q: f64, var_p: f64) -> Self {
        Self {
            var_q,
            cov_qp: 0.0,
            var_p,
        }
    }

    pub fn det(&self) -> f64 {
        self.var_q * self.var_p - self.cov_qp * self.cov_qp
    }

    /// Positive definite and Heisenberg-admissible.
    pub fn validate(&self, cfg: &SimConfig) -> Result<()> {
        let min = cfg.hbar * cfg.hbar / 4.0;
        if !(self.var_q > 0.0) || !(self.var_p > 0.0) || self.det() <= 0.0 {
            return Err(Error::Domain(format!("covariance not positive definite: {self:?}")));
        }
        if self.det() < min - cfg.default_tolerance * min.max(1.0) {
            return Err(Error::Domain(format!(
                "covariance determinant {} below the Heisenberg bound {min}",
                self.det()
            )));
        }
        Ok(())
    }
}

/// Σ(t) = M(t) Σ₀ M(t)ᵀ. The symplectic invariance det Σ(t) = det Σ₀ is
/// exact up to round-off because det M = 1.
pub fn propagate_covariance(
    h: &QuadraticHamiltonian,
    sigma0: &CovarianceMatrix,
    t: f64,
) -> CovarianceMatrix {
    let m = h.flow(t);
    let (vq, c, vp) = (sigma0.var_q, sigma0.cov_qp, sigma0.var_p);
    CovarianceMatrix {
        var_q: m.m11 * m.m11 * vq + 2.0 * m.m11 * m.m12 * c + m.m12 * m.m12 * vp,
        cov_qp: m.m11 * m.m21 * vq + (m.m11 * m.m22 + m.m12 * m.m21) * c + m.m12 * m.m22 * vp,
        var_p: m.m21 * m.m21 * vq + 2.0 * m.m21 * m.m22 * c + m.m22 * m.m22 * vp,
    }
}

/// One closed-form uncertainty case from the paper, with its parameters.
///
/// Every case describes an initial ideal squeezed state (variances ħγ⁻¹/2,
/// ħγ/2) evolving under the quadratic Hamiltonian encoded by the parameters;
/// `Coherent` variants are the γ = 1 specializations with their own
/// published formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormCase {
    /// Elliptic regime, arbitrary θ and γ.
    EllipticGeneral { omega: f64, r: f64, theta: f64 },
    /// Elliptic regime, γ = 1.
    EllipticCoherent { omega: f64, r: f64, theta: f64 },
    /// β = 0 (θ = 0), elliptic, arbitrary γ.
    Beta0General { omega: f64, r: f64 },
    /// β = 0, γ = 1.
    Beta0Coherent { omega: f64, r: f64 },
    /// ω = 0 (hyperbolic, R = r), arbitrary γ.
    HyperbolicOmega0General { r: f64, theta: f64 },
    /// ω = 0, γ = 1.
    HyperbolicOmega0Coherent { r: f64, theta: f64 },
    /// ω = β = 0: pure scaling flow, arbitrary γ.
    ScalingGeneral { r: f64 },
    /// ω² = α² + β², arbitrary γ.
    Parabolic { omega: f64, alpha: f64, beta: f64 },
}

impl ClosedFormCase {
    /// The Hamiltonian this case describes.
    pub fn hamiltonian(&self) -> QuadraticHamiltonian {
        match *self {
            Self::EllipticGeneral { omega, r, theta } | Self::EllipticCoherent { omega, r, theta } => {
                classify(omega, r * theta.cos(), r * theta.sin())
            }
            Self::Beta0General { omega, r } | Self::Beta0Coherent { omega, r } => {
                classify(omega, r, 0.0)
            }
            Self::HyperbolicOmega0General { r, theta } | Self::HyperbolicOmega0Coherent { r, theta } => {
                classify(0.0, r * theta.cos(), r * theta.sin())
            }
            Self::ScalingGeneral { r } => classify(0.0, r, 0.0),
            Self::Parabolic { omega, alpha, beta } => classify(omega, alpha, beta),
        }
    }

    fn requires_coherent(&self) -> bool {
        matches!(
            self,
            Self::EllipticCoherent { .. }
                | Self::Beta0Coherent { .. }
                | Self::HyperbolicOmega0Coherent { .. }
        )
    }

    fn check(&self, gamma: f64) -> Result<()> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        if self.requires_coherent() && (gamma - 1.0).abs() > 1e-12 {
            return Err(Error::CaseConstraint(format!(
                "{self:?} is the γ = 1 specialization but γ = {gamma}"
            )));
        }
        let h = self.hamiltonian();
        match self {
            Self::EllipticGeneral { .. }
            | Self::EllipticCoherent { .. }
            | Self::Beta0General { .. }
            | Self::Beta0Coherent { .. } => {
                if h.regime != Regime::Elliptic {
                    return Err(Error::CaseConstraint(format!(
                        "{self:?} requires ω² > α² + β² (got regime {})",
                        h.regime
                    )));
                }
            }
            Self::HyperbolicOmega0General { r, .. }
            | Self::HyperbolicOmega0Coherent { r, .. }
            | Self::ScalingGeneral { r } => {
                if !(*r > 0.0) {
                    return Err(Error::CaseConstraint(format!(
                        "{self:?} requires r > 0"
                    )));
                }
            }
            Self::Parabolic { .. } => {
                if h.regime != Regime::Parabolic {
                    return Err(Error::CaseConstraint(format!(
                        "{self:?} requires ω² = α² + β² (got regime {})",
                        h.regime
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Closed-form (ΔQ)², (ΔP)² and their product at time t for an initial
/// ideal squeezed state with parameter γ.
///
/// The published variance formulas are evaluated verbatim, with one
/// algebraic guard: sin²(Rt)·cot(Rt) is rewritten as sin(Rt)cos(Rt) so the
/// removable singularities at Rt = kπ never produce NaN. Products use the
/// published product formulas where those are available for the case;
/// the general-γ cases return the product of the two variances.
pub fn closed_form_uncertainties(
    case: &ClosedFormCase,
    gamma: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<(f64, f64, f64)> {
    case.check(gamma)?;
    let hb = cfg.hbar;
    let g = gamma;
    Ok(match *case {
        ClosedFormCase::EllipticGeneral { omega, r, theta } => {
            let big_r = (omega * omega - r * r).sqrt();
            let (s, c) = (big_r * t).sin_cos();
            let (s2, sc) = (s * s, s * c);
            let (sin_t, cos_t) = theta.sin_cos();
            let bq = 2.0 * r * r
                + 2.0 * g * g * omega * r * sin_t
                + (g * g - 1.0) * (omega * omega + r * r * sin_t * sin_t);
            let bp = 2.0 * r * r - 2.0 * omega * r * sin_t / (g * g)
                + (1.0 / (g * g) - 1.0) * (omega * omega + r * r * sin_t * sin_t);
            let vq = 0.5 * hb / g
                * (1.0 + s2 * bq / (big_r * big_r) + 2.0 * r * cos_t * sc / big_r);
            let vp = 0.5 * hb * g
                * (1.0 + s2 * bp / (big_r * big_r) - 2.0 * r * cos_t * sc / big_r);
            (vq, vp, vq * vp)
        }
        ClosedFormCase::EllipticCoherent { omega, r, theta } => {
            let big_r = (omega * omega - r * r).sqrt();
            let (s, c) = (big_r * t).sin_cos();
            let (s2, sc) = (s * s, s * c);
            let (sin_t, cos_t) = theta.sin_cos();
            let vq = 0.5
                * hb
                * (1.0
                    + 2.0 * r * (r + omega * sin_t) * s2 / (big_r * big_r)
                    + 2.0 * r * cos_t * sc / big_r);
            let vp = 0.5
                * hb
                * (1.0
                    + 2.0 * r * (r - omega * sin_t) * s2 / (big_r * big_r)
                    - 2.0 * r * cos_t * sc / big_r);
            let bracket = omega / big_r * cos_t * s - sin_t * c;
            let product = 0.25
                * hb
                * hb
                * (1.0 + 4.0 * r * r / (big_r * big_r) * s2 * bracket * bracket);
            (vq, vp, product)
        }
        ClosedFormCase::Beta0General { omega, r } => {
            let big_r = (omega * omega - r * r).sqrt();
            let (s, c) = (big_r * t).sin_cos();
            let (s2, sc) = (s * s, s * c);
            let vq = 0.5 * hb / g
                * (1.0
                    + (2.0 * r * r + (g * g - 1.0) * omega * omega) * s2 / (big_r * big_r)
                    + 2.0 * r * sc / big_r);
            let vp = 0.5 * hb * g
                * (1.0
                    + (2.0 * r * r + (1.0 / (g * g) - 1.0) * omega * omega) * s2
                        / (big_r * big_r)
                    - 2.0 * r * sc / big_r);
            (vq, vp, vq * vp)
        }
        ClosedFormCase::Beta0Coherent { omega, r } => {
            let big_r = (omega * omega - r * r).sqrt();
            let (s, c) = (big_r * t).sin_cos();
            let (s2, sc) = (s * s, s * c);
            let vq = 0.5 * hb * (1.0 + 2.0 * r * r * s2 / (big_r * big_r) + 2.0 * r * sc / big_r);
            let vp = 0.5 * hb * (1.0 + 2.0 * r * r * s2 / (big_r * big_r) - 2.0 * r * sc / big_r);
            let product = 0.25
                * hb
                * hb
                * (1.0 + 4.0 * omega * omega * r * r * s2 * s2 / big_r.powi(4));
            (vq, vp, product)
        }
        ClosedFormCase::HyperbolicOmega0General { r, theta } => {
            let c2 = (2.0 * r * t).cosh();
            let s2 = (2.0 * r * t).sinh();
            let h2 = (r * t).sinh().powi(2);
            let (sin_t, cos_t) = theta.sin_cos();
            let vq = 0.5 * hb / g
                * (c2 + cos_t * s2 + (g * g - 1.0) * sin_t * sin_t * h2);
            let vp = 0.5 * hb * g
                * (c2 - cos_t * s2 + (1.0 / (g * g) - 1.0) * sin_t * sin_t * h2);
            (vq, vp, vq * vp)
        }
        ClosedFormCase::HyperbolicOmega0Coherent { r, theta } => {
            let c2 = (2.0 * r * t).cosh();
            let s2 = (2.0 * r * t).sinh();
            let (sin_t, cos_t) = theta.sin_cos();
            let vq = 0.5 * hb * (c2 + cos_t * s2);
            let vp = 0.5 * hb * (c2 - cos_t * s2);
            let product = 0.25 * hb * hb * (1.0 + sin_t * sin_t * s2 * s2);
            (vq, vp, product)
        }
        ClosedFormCase::ScalingGeneral { r } => {
            let vq = 0.5 * hb / g * (2.0 * r * t).exp();
            let vp = 0.5 * hb * g * (-2.0 * r * t).exp();
            // the product is constant by construction
            (vq, vp, 0.25 * hb * hb)
        }
        ClosedFormCase::Parabolic { omega, alpha, beta } => {
            let vq = 0.5 * hb
                * ((1.0 + alpha * t).powi(2) / g + (beta + omega).powi(2) * t * t * g);
            let vp = 0.5 * hb
                * ((beta - omega).powi(2) * t * t / g + (1.0 - alpha * t).powi(2) * g);
            let a2t2 = alpha * alpha * t * t;
            let product = 0.25
                * hb
                * hb
                * (1.0 - 2.0 * a2t2 + 2.0 * a2t2 * a2t2
                    + (1.0 + alpha * t).powi(2) * (beta - omega).powi(2) * t * t / (g * g)
                    + (1.0 - alpha * t).powi(2) * (beta + omega).powi(2) * t * t * g * g);
            (vq, vp, product)
        }
    })
}

/// Times minimizing the Heisenberg product for the elliptic γ = 1 case:
/// two arithmetic families of period π/R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizationTimes {
    /// Period π/R shared by both families.
    pub period: f64,
    /// Family one: t = k·period.
    pub family_one_offset: f64,
    /// Family two: t = offset + k·period, absent for degenerate parameters
    /// (ω = 0 or θ = ±π/2, where arctan((R/ω) tan θ) is undefined).
    pub family_two_offset: Option<f64>,
    /// Reason family two is missing, when it is.
    pub degenerate: Option<&'static str>,
}

impl MinimizationTimes {
    /// The second family's offset, or the family-two-undefined error.
    pub fn family_two(&self) -> Result<f64> {
        self.family_two_offset.ok_or_else(|| {
            Error::FamilyTwoUndefined(self.degenerate.unwrap_or("degenerate parameters").into())
        })
    }

    /// All minimization times in [0, t_max).
    pub fn times_in(&self, t_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut offsets = vec![self.family_one_offset];
        if let Some(o) = self.family_two_offset {
            if (o - self.family_one_offset).abs() > 1e-14 {
                offsets.push(o);
            }
        }
        for offset in offsets {
            let mut k = 0;
            loop {
                let t = offset + k as f64 * self.period;
                if t >= t_max {
                    break;
                }
                out.push(t);
                k += 1;
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

/// Minimization-time families {kπ/R} and {(arctan((R/ω) tan θ) + kπ)/R}
/// for the elliptic coherent case.
pub fn minimization_times(h: &QuadraticHamiltonian) -> Result<MinimizationTimes> {
    if h.regime != Regime::Elliptic {
        return Err(Error::CaseConstraint(format!(
            "minimization times require the elliptic regime, got {}",
            h.regime
        )));
    }
    let period = std::f64::consts::PI / h.big_r;
    let (family_two_offset, degenerate) = if h.omega == 0.0 {
        (None, Some("family two undefined at ω = 0"))
    } else if h.theta.cos().abs() < 1e-12 {
        (None, Some("family two undefined at θ = ±π/2"))
    } else {
        let raw = (h.big_r / h.omega * h.theta.tan()).atan() / h.big_r;
        (Some(raw.rem_euclid(period)), None)
    };
    Ok(MinimizationTimes {
        period,
        family_one_offset: 0.0,
        family_two_offset,
        degenerate,
    })
}

/// Coefficients (ω', α', β') of H ∘ S⁻¹ for a unit-determinant map z' = S z.
pub fn transformed_coefficients(h: &QuadraticHamiltonian, map: &Mat2) -> (f64, f64, f64) {
    // H(z) = ½ zᵀ G z with G = [[ω−β, α], [α, ω+β]]
    let g11 = h.omega - h.beta;
    let g12 = h.alpha;
    let g22 = h.omega + h.beta;
    let inv = map.inverse_unit();
    // G' = S⁻ᵀ G S⁻¹
    let t11 = inv.m11 * g11 + inv.m21 * g12;
    let t12 = inv.m11 * g12 + inv.m21 * g22;
    let t21 = inv.m12 * g11 + inv.m22 * g12;
    let t22 = inv.m12 * g12 + inv.m22 * g22;
    let gp11 = t11 * inv.m11 + t12 * inv.m21;
    let gp12 = t11 * inv.m12 + t12 * inv.m22;
    let gp22 = t21 * inv.m12 + t22 * inv.m22;
    ((gp11 + gp22) / 2.0, gp12, (gp22 - gp11) / 2.0)
}

/// Rotation by θ/2 that removes the β term: returns the map and the
/// transformed Hamiltonian ½ω(p'² + q'²) + r q'p'.
pub fn rotate_frame(h: &QuadraticHamiltonian) -> (Mat2, QuadraticHamiltonian) {
    let half = h.theta / 2.0;
    let (s, c) = half.sin_cos();
    let map = Mat2 {
        m11: c,
        m12: s,
        m21: -s,
        m22: c,
    };
    (map, classify(h.omega, h.r, 0.0))
}

/// A-branch (elliptic) or target-sign (hyperbolic) selector for the
/// one-parameter reduction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Linear canonical map taking H to its normal form: ±½R(p'² + q'²) in the
/// elliptic regime, ±Rq'p' in the hyperbolic regime.
///
/// `a` parametrizes the one-parameter family. In the elliptic regime
/// `branch` picks the sign of A = ±√(±(ω+β)/R − a²) (the normal-form sign is
/// fixed by the sign of ω); in the hyperbolic regime it picks the
/// normal-form sign directly.
pub fn reduce_normal_form(
    h: &QuadraticHamiltonian,
    a: f64,
    branch: Branch,
) -> Result<(Mat2, QuadraticHamiltonian)> {
    let ob = h.omega + h.beta;
    let big_r = h.big_r;
    match h.regime {
        Regime::Parabolic => Err(Error::UnsupportedRegime(
            "no normal-form reduction exists in the parabolic regime".into(),
        )),
        Regime::Elliptic => {
            // In the elliptic regime |ω| > |β|, so ω+β carries the sign of ω.
            let positive = ob > 0.0;
            let radicand = if positive { ob / big_r } else { -ob / big_r } - a * a;
            if radicand < 0.0 {
                return Err(Error::ParameterDomain(format!(
                    "a² = {} exceeds |ω+β|/R = {}",
                    a * a,
                    (ob / big_r).abs()
                )));
            }
            let a_cap = branch.sign() * radicand.sqrt();
            let map = if positive {
                Mat2 {
                    m11: (big_r * a + h.alpha * a_cap) / ob,
                    m12: a_cap,
                    m21: (h.alpha * a - big_r * a_cap) / ob,
                    m22: a,
                }
            } else {
                Mat2 {
                    m11: -(big_r * a + h.alpha * a_cap) / ob,
                    m12: -a_cap,
                    m21: (h.alpha * a - big_r * a_cap) / ob,
                    m22: a,
                }
            };
            let target = classify(if positive { big_r } else { -big_r }, 0.0, 0.0);
            Ok((map, target))
        }
        Regime::Hyperbolic => {
            if a == 0.0 {
                return Err(Error::ParameterDomain(
                    "hyperbolic reduction requires a ≠ 0".into(),
                ));
            }
            if ob.abs() < 1e-9 * (1.0 + h.omega.abs() + h.beta.abs()) {
                return Err(Error::ParameterDomain(format!(
                    "reduction map undefined for ω + β = {ob} ≈ 0"
                )));
            }
            let map = match branch {
                Branch::Plus => Mat2 {
                    m11: -(big_r + h.alpha) / ob * a,
                    m12: -a,
                    m21: (big_r - h.alpha) / (2.0 * big_r * a),
                    m22: -ob / (2.0 * big_r * a),
                },
                Branch::Minus => Mat2 {
                    m11: (big_r - h.alpha) / ob * a,
                    m12: -a,
                    m21: (big_r + h.alpha) / (2.0 * big_r * a),
                    m22: ob / (2.0 * big_r * a),
                },
            };
            let target = classify(0.0, branch.sign() * big_r, 0.0);
            Ok((map, target))
        }
    }
}
