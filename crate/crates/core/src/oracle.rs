//! Independent verification engine: direct Wigner-function evolution under
//! the Moyal-bracket Liouville equation, exact classical transport for
//! quadratic Hamiltonians, and Gauss-Hermite quadrature for expectation
//! values of closed-form fields.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::{integrate_liouville, GridField};
use crate::poly::PolyObservable;
use crate::quadratic::{propagate_covariance, CovarianceMatrix, QuadraticHamiltonian};
use crate::spectral::{derivative_multiplier, fft2};
use crate::states::GaussianState;
use ndarray::Array2;
use num_complex::Complex64;

/// Normalization drift allowed per run.
const DRIFT_TOL: f64 = 1e-6;
/// Self-conjugation (realness) tolerance per snapshot.
const IMAG_TOL: f64 = 1e-8;
/// Boundary-mass limit before the domain is declared too small.
const BOUNDARY_TOL: f64 = 1e-6;
/// RK4 stability boundary on the imaginary axis is |λ dt| = 2√2; keep the
/// estimate conservative.
const RK4_IMAG_LIMIT: f64 = 2.8;

/// One Wigner-evolution job: initial state, polynomial Hamiltonian and a
/// fixed-step RK4 schedule.
#[derive(Debug, Clone)]
pub struct EvolutionRun {
    pub initial: GridField,
    pub hamiltonian: PolyObservable,
    pub dt: f64,
    pub steps: usize,
    /// A snapshot is recorded every `snapshot_every` steps (plus the final
    /// state). 0 means final state only.
    pub snapshot_every: usize,
    /// Spectral low-pass as a fraction of Nyquist, applied inside the
    /// derivative evaluation. Keeps the fixed-step RK4 inside its stability
    /// region without touching the resolved part of the spectrum.
    pub spectral_cutoff: f64,
    /// Drop the ħ²-order bracket term (Poisson transport only). Exists so
    /// tests can demonstrate the term matters; physical runs keep it.
    pub poisson_only: bool,
    /// Rolloff fraction of the window applied to the coefficient fields.
    /// The flow is distorted inside the band, so the band must carry no
    /// state mass; a narrower band pushes the distortion further out.
    pub coeff_window_rolloff: f64,
}

impl EvolutionRun {
    pub fn new(initial: GridField, hamiltonian: PolyObservable, dt: f64, steps: usize) -> Self {
        Self {
            initial,
            hamiltonian,
            dt,
            steps,
            snapshot_every: 0,
            spectral_cutoff: 0.45,
            poisson_only: false,
            coeff_window_rolloff: 0.05,
        }
    }
}

/// One term of the expanded bracket operator: coeff(q,p) · ∂_q^a ∂_p^b ρ.
struct BracketTerm {
    coeff: Array2<Complex64>,
    mult: Array2<Complex64>,
    max_coeff: f64,
    k_bound: f64,
}

/// The expanded operator plus the band-limit mask for its output.
struct BracketOperator {
    terms: Vec<BracketTerm>,
    mask: Array2<Complex64>,
}

/// Expand ⟦H̃, ·⟧ for a polynomial H of degree ≤ 4 into a fixed linear
/// differential operator, where H̃ = w·H is the Hamiltonian tapered to zero
/// across the periodic wrap by a C⁴ window.
///
/// Tapering H itself (rather than its derivative fields) keeps the modified
/// dynamics exactly Hamiltonian, so it conserves normalization; a raw
/// polynomial H is discontinuous across the wrap and its Gibbs ringing
/// contaminates the whole domain. The taper only alters the flow in the
/// rolloff band, which a well-sized domain keeps free of state mass. All
/// coefficient fields ∂_q^α ∂_p^β (w_q w_p H) are assembled analytically
/// from window-derivative tables and exact polynomial derivatives.
fn bracket_operator(run: &EvolutionRun, cfg: &SimConfig) -> Result<BracketOperator> {
    let h = &run.hamiltonian;
    let deg = h.degree();
    if deg > 4 {
        return Err(Error::UnsupportedHamiltonian { degree: deg });
    }
    let imag = h.terms().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
    if imag > 0.0 {
        return Err(Error::Domain(
            "evolution requires a real Hamiltonian".into(),
        ));
    }
    let grid = run.initial.grid();
    let kq = run.spectral_cutoff * std::f64::consts::PI / grid.dq();
    let kp = run.spectral_cutoff * std::f64::consts::PI / grid.dp();

    let roll = run.coeff_window_rolloff;
    let wq = crate::grid::axis_window_table(grid.q_min, grid.q_max, grid.n_q, roll);
    let wp = crate::grid::axis_window_table(grid.p_min, grid.p_max, grid.n_p, roll);
    // exact polynomial derivatives ∂_q^a ∂_p^b H for a, b ≤ 3
    let dh: Vec<Vec<crate::poly::PolyObservable>> = (0..=3u32)
        .map(|a| (0..=3u32).map(|b| h.derivative(a, b)).collect())
        .collect();
    let binom = |n: u32, k: u32| -> f64 {
        let k = k.min(n - k);
        let mut acc = 1.0;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        acc
    };

    let mut terms = Vec::new();
    let mut n = 1u32;
    while n <= deg {
        if n > 1 && run.poisson_only {
            break;
        }
        // ⟦f,g⟧ = Σ_{n odd} (1/n!)(−1)^{(n−1)/2}(ħ/2)^{n−1} Dₙ(f,g)
        let n_coef = if (n - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 }
            * (cfg.hbar / 2.0).powi(n as i32 - 1)
            / (1..=n).map(|m| m as f64).product::<f64>();
        for k in 0..=n {
            let (alpha, beta) = (n - k, k); // derivative orders on H̃
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let scale = n_coef * sign * binom(n, k);

            // coeff(q,p) = scale · ∂_q^α ∂_p^β (w_q w_p H) by the product rule
            let mut values = Array2::<Complex64>::zeros((grid.n_q, grid.n_p));
            let mut max_coeff = 0.0f64;
            for i in 0..grid.n_q {
                let q = grid.q_at(i);
                for j in 0..grid.n_p {
                    let p = grid.p_at(j);
                    let mut acc = 0.0;
                    for a in 0..=alpha {
                        let wqa = wq[i][a as usize];
                        if wqa == 0.0 {
                            continue;
                        }
                        for b in 0..=beta {
                            let wpb = wp[j][b as usize];
                            if wpb == 0.0 {
                                continue;
                            }
                            let poly = &dh[(alpha - a) as usize][(beta - b) as usize];
                            if poly.is_zero() {
                                continue;
                            }
                            acc += binom(alpha, a)
                                * binom(beta, b)
                                * wqa
                                * wpb
                                * poly.eval(q, p).re;
                        }
                    }
                    let v = scale * acc;
                    max_coeff = max_coeff.max(v.abs());
                    values[[i, j]] = Complex64::new(v, 0.0);
                }
            }
            if max_coeff == 0.0 {
                continue;
            }
            let (a, b) = (k, n - k); // derivative orders applied to ρ
            terms.push(BracketTerm {
                coeff: values,
                mult: derivative_multiplier(grid, a, b, run.spectral_cutoff),
                max_coeff,
                k_bound: kq.powi(a as i32) * kp.powi(b as i32),
            });
        }
        n += 2;
    }
    Ok(BracketOperator {
        terms,
        mask: derivative_multiplier(grid, 0, 0, run.spectral_cutoff),
    })
}

/// Largest stable RK4 step for this run, from the crude spectral-radius
/// bound Σ max|cₖ|·k_cutᵃ·k_cutᵇ over the bracket terms.
pub fn stability_limit(run: &EvolutionRun, cfg: &SimConfig) -> Result<f64> {
    let op = bracket_operator(run, cfg)?;
    let lambda: f64 = op.terms.iter().map(|t| t.max_coeff * t.k_bound).sum();
    if lambda == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(RK4_IMAG_LIMIT / lambda)
}

fn rhs(op: &BracketOperator, rho: &Array2<Complex64>) -> Array2<Complex64> {
    let (nq, np) = rho.dim();
    let hat = fft2(rho, true);
    let norm = 1.0 / (nq * np) as f64;
    let mut acc = Array2::<Complex64>::zeros((nq, np));
    for term in &op.terms {
        let mut spec = &hat * &term.mult;
        spec = fft2(&spec, false);
        // acc += coeff ⊙ IFFT[mult ⊙ ρ̂] / (nq·np)
        acc.zip_mut_with(&(&spec * &term.coeff), |a, v| *a += v * norm);
    }
    // band-limit the assembled right-hand side: the coefficient products
    // scatter content above the cutoff, which would otherwise accumulate in
    // modes the transport itself never touches
    let mut out_hat = fft2(&acc, true);
    out_hat *= &op.mask;
    let mut out = fft2(&out_hat, false);
    out.mapv_inplace(|v| v * norm);
    out
}

/// Integrate ∂ρ/∂t = ⟦H, ρ⟧ with fixed-step RK4 and spectral derivatives.
///
/// Returns the recorded snapshots (final state always included). Every
/// snapshot is checked for normalization drift, realness and boundary mass.
pub fn evolve_wigner(run: &EvolutionRun, cfg: &SimConfig) -> Result<Vec<GridField>> {
    if run.steps < 1 {
        return Err(Error::Domain("step count must be >= 1".into()));
    }
    let norm0 = integrate_liouville(&run.initial, cfg)?;
    if (norm0.re - 1.0).abs() > DRIFT_TOL || norm0.im.abs() > DRIFT_TOL {
        return Err(Error::NotNormalized {
            measured: norm0.re,
            tolerance: DRIFT_TOL,
        });
    }
    let op = bracket_operator(run, cfg)?;
    let limit = {
        let lambda: f64 = op.terms.iter().map(|t| t.max_coeff * t.k_bound).sum();
        if lambda == 0.0 {
            f64::INFINITY
        } else {
            RK4_IMAG_LIMIT / lambda
        }
    };
    if run.dt > limit {
        return Err(Error::StepSize { dt: run.dt, limit });
    }

    let grid = run.initial.grid().clone();
    let mut rho = run.initial.values().clone();
    let mut snapshots = Vec::new();
    let dt = run.dt;

    let check_snapshot = |values: Array2<Complex64>| -> Result<GridField> {
        let field = GridField::new(grid.clone(), values)?;
        let norm = integrate_liouville(&field, cfg)?;
        if (norm.re - 1.0).abs() > DRIFT_TOL {
            return Err(Error::NotNormalized {
                measured: norm.re,
                tolerance: DRIFT_TOL,
            });
        }
        if field.max_abs_imag() > IMAG_TOL {
            return Err(Error::FormulaConsistency(format!(
                "evolved state lost self-conjugation: max |Im ρ| = {}",
                field.max_abs_imag()
            )));
        }
        let mass = field.boundary_mass(2, cfg);
        if mass > BOUNDARY_TOL {
            return Err(Error::DomainTooSmall {
                boundary_mass: mass,
                limit: BOUNDARY_TOL,
            });
        }
        Ok(field)
    };

    for step in 1..=run.steps {
        let k1 = rhs(&op, &rho);
        let mut stage = rho.clone();
        stage.zip_mut_with(&k1, |a, v| *a += v * (dt / 2.0));
        let k2 = rhs(&op, &stage);
        stage.assign(&rho);
        stage.zip_mut_with(&k2, |a, v| *a += v * (dt / 2.0));
        let k3 = rhs(&op, &stage);
        stage.assign(&rho);
        stage.zip_mut_with(&k3, |a, v| *a += v * dt);
        let k4 = rhs(&op, &stage);

        ndarray::Zip::from(&mut rho)
            .and(&k1)
            .and(&k2)
            .and(&k3)
            .and(&k4)
            .for_each(|r, &a, &b, &c, &d| {
                *r += (a + 2.0 * b + 2.0 * c + d) * (dt / 6.0);
            });

        let record = (run.snapshot_every > 0 && step % run.snapshot_every == 0)
            || step == run.steps;
        if record {
            snapshots.push(check_snapshot(rho.clone())?);
        }
    }
    Ok(snapshots)
}

/// Exact transported moments for a quadratic Hamiltonian: the Wigner
/// function rides the classical flow, so means follow M(t)(q₀, p₀) and the
/// covariance is M(t) Σ₀ M(t)ᵀ. No grid discretization involved.
pub fn classical_transport(
    h: &QuadraticHamiltonian,
    rho0: &GaussianState,
    t: f64,
) -> ((f64, f64), CovarianceMatrix) {
    let m = h.flow(t);
    let means = m.apply(rho0.q0, rho0.p0);
    let sigma = propagate_covariance(
        h,
        &CovarianceMatrix::diagonal(rho0.var_q, rho0.var_p),
        t,
    );
    (means, sigma)
}

pub mod gauss_hermite {
    //! Gauss-Hermite nodes and weights by the Golub-Welsch method: the
    //! nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix of
    //! the Hermite recurrence (off-diagonal √(i/2)), the weights come from
    //! the first eigenvector components, scaled by μ₀ = √π.

    /// Nodes and weights of the n-point rule for weight e^{−x²}.
    pub fn nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
        assert!(n >= 1);
        let mut d = vec![0.0f64; n];
        let mut e: Vec<f64> = (1..n).map(|i| (i as f64 / 2.0).sqrt()).collect();
        e.push(0.0);
        // first row of the accumulated rotations
        let mut z = vec![0.0f64; n];
        z[0] = 1.0;

        // implicit QL with Wilkinson shifts (tqli), rotating z along
        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                assert!(iter <= 50, "tqli failed to converge");
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
                let (mut s, mut c) = (1.0f64, 1.0f64);
                let mut p = 0.0f64;
                let mut i = m;
                while i > l {
                    let idx = i - 1;
                    let mut f = s * e[idx];
                    let b = c * e[idx];
                    r = f.hypot(g);
                    e[idx + 1] = r;
                    if r == 0.0 {
                        d[idx + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[idx + 1] - p;
                    let t = (d[idx] - g) * s + 2.0 * c * b;
                    p = s * t;
                    d[idx + 1] = g + p;
                    g = c * t - b;
                    f = z[idx + 1];
                    z[idx + 1] = s * z[idx] + c * f;
                    z[idx] = c * z[idx] - s * f;
                    i -= 1;
                }
                if r == 0.0 && i > l {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        let mu0 = std::f64::consts::PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = d
            .into_iter()
            .zip(z.into_iter().map(|v| mu0 * v * v))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pairs.into_iter().unzip()
    }
}

/// Convergence-certified Gauss-Hermite expectation ∫ field · ρ dl of a
/// closed-form field against an analytic Gaussian state.
///
/// The tensor rule is centered and scaled to the state. Divergence of the
/// underlying integral shows up as non-convergence under order doubling
/// (64 → 128 nodes), which is reported as an error — this is exactly what
/// happens when t leaves a validity interval and the Gaussian no longer
/// dominates the flow's exponential growth.
pub fn quadrature_expectation(
    field: impl Fn(f64, f64) -> f64,
    state: &GaussianState,
    cfg: &SimConfig,
) -> Result<f64> {
    let _ = cfg;
    let sq = (2.0 * state.var_q).sqrt();
    let sp = (2.0 * state.var_p).sqrt();
    let eval = |n: usize| -> (f64, f64) {
        let (x, w) = gauss_hermite::nodes_weights(n);
        let mut acc = 0.0;
        let mut acc_abs = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let q = state.q0 + sq * xi;
            let mut row = 0.0;
            let mut row_abs = 0.0;
            for (j, &xj) in x.iter().enumerate() {
                let v = w[j] * field(q, state.p0 + sp * xj);
                row += v;
                row_abs += v.abs();
            }
            acc += w[i] * row;
            acc_abs += w[i] * row_abs;
        }
        (acc / std::f64::consts::PI, acc_abs / std::f64::consts::PI)
    };
    let (lo, _) = eval(64);
    let (hi, hi_abs) = eval(128);
    let change = (hi - lo).abs();
    let rel = change / hi.abs().max(lo.abs()).max(1e-300);
    // absolute escape for values that vanish by symmetry
    if rel > 1e-6 && change > 1e-14 * hi_abs.max(1e-300) {
        return Err(Error::QuadratureDivergence {
            relative_change: rel,
            order_lo: 64,
            order_hi: 128,
        });
    }
    if !hi.is_finite() {
        return Err(Error::QuadratureDivergence {
            relative_change: f64::INFINITY,
            order_lo: 64,
            order_hi: 128,
        });
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::classify;
    use crate::states::coherent;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn gh_small_rules_match_known_values() {
        let (x, w) = gauss_hermite::nodes_weights(1);
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[0], PI.sqrt(), epsilon = 1e-14);

        // two-point rule: nodes ±1/√2, weights √π/2
        let (x, w) = gauss_hermite::nodes_weights(2);
        assert_abs_diff_eq!(x[0], -(0.5f64).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], (0.5f64).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(w[0], PI.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], PI.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gh_polynomial_exactness_and_weights_sum() {
        for n in [8usize, 32, 64, 128] {
            let (x, w) = gauss_hermite::nodes_weights(n);
            let total: f64 = w.iter().sum();
            assert_abs_diff_eq!(total, PI.sqrt(), epsilon = 1e-12);
            // ∫ x² e^{−x²} = √π/2
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert_abs_diff_eq!(m2, PI.sqrt() / 2.0, epsilon = 1e-11);
            // ∫ x⁴ e^{−x²} = 3√π/4
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            assert_abs_diff_eq!(m4, 0.75 * PI.sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn gh_integrates_exponential() {
        // ∫ e^x e^{−x²} dx = √π e^{1/4}
        let (x, w) = gauss_hermite::nodes_weights(32);
        let val: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert_abs_diff_eq!(val, PI.sqrt() * 0.25f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn gh_converges_exponentially_for_gaussian_integrands() {
        // doubling the order changes a polynomial×Gaussian integral below
        // machine epsilon
        let cfg = SimConfig::default();
        let s = coherent(0.3, -0.2, &cfg);
        let f = |q: f64, p: f64| q * q * p + 0.5 * p;
        let sq = (2.0 * s.var_q).sqrt();
        let sp = (2.0 * s.var_p).sqrt();
        let eval = |n: usize| {
            let (x, w) = gauss_hermite::nodes_weights(n);
            let mut acc = 0.0;
            for (i, &xi) in x.iter().enumerate() {
                for (j, &xj) in x.iter().enumerate() {
                    acc += w[i] * w[j] * f(s.q0 + sq * xi, s.p0 + sp * xj);
                }
            }
            acc / PI
        };
        let a = eval(64);
        let b = eval(128);
        assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn quadrature_mean_position() {
        let cfg = SimConfig::default();
        let s = coherent(1.25, -0.5, &cfg);
        let val = quadrature_expectation(|q, _| q, &s, &cfg).unwrap();
        assert_abs_diff_eq!(val, 1.25, epsilon = 1e-12);
        // symmetric zero case must not trip the divergence detector
        let origin = coherent(0.0, 0.0, &cfg);
        let val = quadrature_expectation(|q, _| q, &origin, &cfg).unwrap();
        assert_abs_diff_eq!(val, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_transport_matches_flow() {
        let h = classify(1.0, 0.0, 0.0);
        let cfg = SimConfig::default();
        let s = coherent(1.0, 0.0, &cfg);
        let t = 0.7;
        let ((mq, mp), sigma) = classical_transport(&h, &s, t);
        // Eq. (22): q(t) = q0 cos + p0 sin, p(t) = p0 cos − q0 sin
        assert_abs_diff_eq!(mq, t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(mp, -t.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(sigma.var_q, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(sigma.var_p, 0.5, epsilon = 1e-13);
        let ((mq, mp), _) = classical_transport(&h, &s, 0.0);
        assert_abs_diff_eq!(mq, 1.0);
        assert_abs_diff_eq!(mp, 0.0);
    }

    #[test]
    fn evolve_constant_hamiltonian_is_identity() {
        let cfg = SimConfig::default();
        let s = coherent(0.5, 0.0, &cfg);
        let grid = s.default_grid(64).unwrap();
        let rho = s.rasterize(&grid, &cfg).unwrap();
        let run = EvolutionRun::new(rho.clone(), PolyObservable::constant(3.0), 0.05, 20);
        let snaps = evolve_wigner(&run, &cfg).unwrap();
        let err = snaps
            .last()
            .unwrap()
            .values()
            .iter()
            .zip(rho.values().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14, "H = const must not move the state, err {err}");
    }

    #[test]
    fn evolve_rejects_unstable_step() {
        let cfg = SimConfig::default();
        let s = coherent(0.0, 0.0, &cfg);
        let grid = s.default_grid(64).unwrap();
        let rho = s.rasterize(&grid, &cfg).unwrap();
        let h = classify(1.0, 0.0, 0.0).poly();
        let run = EvolutionRun::new(rho, h, 1.0, 10);
        assert!(matches!(
            evolve_wigner(&run, &cfg),
            Err(Error::StepSize { .. })
        ));
    }

    #[test]
    fn evolve_rejects_high_degree_and_complex_h() {
        let cfg = SimConfig::default();
        let s = coherent(0.0, 0.0, &cfg);
        let grid = s.default_grid(64).unwrap();
        let rho = s.rasterize(&grid, &cfg).unwrap();
        let h5 = PolyObservable::monomial(3, 2, 1.0);
        assert!(matches!(
            evolve_wigner(&EvolutionRun::new(rho.clone(), h5, 1e-4, 1), &cfg),
            Err(Error::UnsupportedHamiltonian { degree: 5 })
        ));
        let hc = PolyObservable::monomial(2, 0, Complex64::new(0.0, 1.0));
        assert!(evolve_wigner(&EvolutionRun::new(rho, hc, 1e-4, 1), &cfg).is_err());
    }

    #[test]
    fn harmonic_oscillator_quarter_period() {
        // transport moments match the exact classical transport
        let cfg = SimConfig::default();
        let s = coherent(1.0, 0.5, &cfg);
        let grid = std::sync::Arc::new(
            crate::grid::PhaseGrid::new(-9.2, 9.2, -9.2, 9.2, 128, 128).unwrap(),
        );
        let rho = s.rasterize(&grid, &cfg).unwrap();
        let h = classify(1.0, 0.0, 0.0);
        let t_end = PI / 2.0;
        let steps = 300;
        let run = EvolutionRun::new(rho, h.poly(), t_end / steps as f64, steps);
        let snaps = evolve_wigner(&run, &cfg).unwrap();
        let last = snaps.last().unwrap();
        let mq = crate::grid::grid_moment(last, 1, 0, &cfg).unwrap().re;
        let mp = crate::grid::grid_moment(last, 0, 1, &cfg).unwrap().re;
        let ((eq, ep), _) = classical_transport(&h, &s, t_end);
        assert_abs_diff_eq!(mq, eq, epsilon = 1e-4);
        assert_abs_diff_eq!(mp, ep, epsilon = 1e-4);
    }
}
