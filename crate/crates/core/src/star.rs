//! The Moyal product and bracket in two realizations — exact on polynomials,
//! spectral on grid fields — plus expectation values, uncertainties and
//! purity checks.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::{grid_moment, integrate_liouville, GridField};
use crate::poly::PolyObservable;
use crate::spectral::twisted_product;
use crate::states::GaussianState;
use num_complex::Complex64;

/// Normalization gate for expectation values; looser than the default
/// tolerance so drifted (but still usable) evolved states pass.
const NORM_GATE: f64 = 1e-6;

/// Exact Moyal product of two polynomials.
///
/// The bidifferential series terminates at n = min(deg f, deg g):
/// f ⋆ g = Σₙ (1/n!) (iħ/2)ⁿ Σₖ C(n,k) (−1)ᵏ (∂_q^{n−k}∂_p^k f)(∂_p^{n−k}∂_q^k g).
pub fn star_poly(f: &PolyObservable, g: &PolyObservable, cfg: &SimConfig) -> PolyObservable {
    let n_max = f.degree().min(g.degree());
    let mut acc = PolyObservable::zero();
    let mut coef = Complex64::new(1.0, 0.0); // (iħ/2)^n / n!
    for n in 0..=n_max {
        if n > 0 {
            coef *= Complex64::new(0.0, cfg.hbar / 2.0) / n as f64;
        }
        for k in 0..=n {
            let df = f.derivative(n - k, k);
            if df.is_zero() {
                continue;
            }
            let dg = g.derivative(k, n - k);
            if dg.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc.add(&df.mul(&dg).scale(coef * sign * binomial(n, k)));
        }
    }
    acc
}

/// Moyal bracket ⟦f, g⟧ = (f ⋆ g − g ⋆ f)/(iħ) of two polynomials.
///
/// Evaluated through the odd part of the series, whose coefficients are real:
/// ⟦f, g⟧ = Σ_{n odd} (1/n!) (−1)^{(n−1)/2} (ħ/2)^{n−1} Dₙ(f, g).
/// This stays finite at ħ = 0, where it reduces to the Poisson bracket.
pub fn moyal_bracket_poly(
    f: &PolyObservable,
    g: &PolyObservable,
    cfg: &SimConfig,
) -> PolyObservable {
    let n_max = f.degree().min(g.degree());
    let mut acc = PolyObservable::zero();
    let mut n = 1u32;
    while n <= n_max {
        let coef = neg_one_pow((n - 1) / 2) * (cfg.hbar / 2.0).powi(n as i32 - 1) / factorial(n);
        for k in 0..=n {
            let df = f.derivative(n - k, k);
            if df.is_zero() {
                continue;
            }
            let dg = g.derivative(k, n - k);
            if dg.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc.add(&df.mul(&dg).scale(coef * sign * binomial(n, k)));
        }
        n += 2;
    }
    acc
}

/// Poisson bracket {f, g} = ∂_q f ∂_p g − ∂_p f ∂_q g.
pub fn poisson_bracket(f: &PolyObservable, g: &PolyObservable) -> PolyObservable {
    f.derivative(1, 0)
        .mul(&g.derivative(0, 1))
        .sub(&f.derivative(0, 1).mul(&g.derivative(1, 0)))
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|m| m as f64).product()
}

fn neg_one_pow(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Spectral Moyal product of two grid fields.
///
/// Inputs must share the grid and be effectively supported away from the
/// boundary; otherwise the periodic wraparound contaminates the result and
/// the output carries `support_warning`.
pub fn star_grid(f: &GridField, g: &GridField, cfg: &SimConfig) -> Result<GridField> {
    if !f.same_grid(g) {
        return Err(Error::IncompatibleGrids("star product".into()));
    }
    let scale = f.max_abs().max(g.max_abs()).max(1e-300);
    let warn = f.boundary_magnitude(2) > cfg.default_tolerance * scale
        || g.boundary_magnitude(2) > cfg.default_tolerance * scale;
    let values = twisted_product(f, g, cfg.hbar);
    let mut out = GridField::new(f.grid().clone(), values)?;
    out.support_warning = warn || f.support_warning || g.support_warning;
    Ok(out)
}

fn check_normalized(rho: &GridField, cfg: &SimConfig) -> Result<()> {
    let norm = integrate_liouville(rho, cfg)?;
    let gate = NORM_GATE.max(cfg.default_tolerance);
    if (norm.re - 1.0).abs() > gate || norm.im.abs() > gate {
        return Err(Error::NotNormalized {
            measured: norm.re,
            tolerance: gate,
        });
    }
    Ok(())
}

/// ⟨A⟩_ρ = ∫ A ρ dl for grid observables, full complex value.
pub fn expectation_grid_complex(
    a: &GridField,
    rho: &GridField,
    cfg: &SimConfig,
) -> Result<Complex64> {
    if !a.same_grid(rho) {
        return Err(Error::IncompatibleGrids("expectation".into()));
    }
    check_normalized(rho, cfg)?;
    let product = GridField::new(a.grid().clone(), a.values() * rho.values())?;
    integrate_liouville(&product, cfg)
}

/// ⟨A⟩_ρ for a (real) grid observable; fails if the imaginary residue is
/// beyond tolerance.
pub fn expectation_grid(a: &GridField, rho: &GridField, cfg: &SimConfig) -> Result<f64> {
    let val = expectation_grid_complex(a, rho, cfg)?;
    let scale = 1.0f64.max(val.re.abs());
    if val.im.abs() > 1e-8 * scale {
        return Err(Error::FormulaConsistency(format!(
            "expectation of a real observable has imaginary residue {}",
            val.im
        )));
    }
    Ok(val.re)
}

/// ⟨A⟩_ρ for a polynomial observable against a grid state.
pub fn expectation_poly_grid(
    a: &PolyObservable,
    rho: &GridField,
    cfg: &SimConfig,
) -> Result<Complex64> {
    check_normalized(rho, cfg)?;
    let mut acc = Complex64::ZERO;
    for ((i, j), c) in a.terms() {
        acc += c * grid_moment(rho, i, j, cfg)?;
    }
    Ok(acc)
}

/// ⟨A⟩ for a polynomial observable against an analytic Gaussian state, exact.
pub fn expectation_poly_state(a: &PolyObservable, s: &GaussianState) -> Complex64 {
    let deg = a.degree();
    let mq = gaussian_moments(s.q0, s.var_q, deg);
    let mp = gaussian_moments(s.p0, s.var_p, deg);
    let mut acc = Complex64::ZERO;
    for ((i, j), c) in a.terms() {
        acc += c * mq[i as usize] * mp[j as usize];
    }
    acc
}

/// Raw moments E[x^k] of a normal distribution, k = 0..=deg.
fn gaussian_moments(mean: f64, var: f64, deg: u32) -> Vec<f64> {
    let mut m = vec![1.0];
    for k in 1..=deg as usize {
        let prev = m[k - 1];
        let prev2 = if k >= 2 { m[k - 2] } else { 0.0 };
        m.push(mean * prev + (k - 1) as f64 * var * prev2);
    }
    m
}

fn check_variance(var: f64, scale: f64, cfg: &SimConfig) -> Result<f64> {
    let tol = cfg.default_tolerance.max(1e-8) * scale.max(1.0);
    if var < -tol {
        return Err(Error::StarAccuracy {
            residual: var,
            tolerance: tol,
        });
    }
    Ok(var)
}

/// (ΔA)² = ⟨A ⋆ A⟩ − ⟨A⟩² for a polynomial observable and grid state.
pub fn uncertainty_sq_poly_grid(
    a: &PolyObservable,
    rho: &GridField,
    cfg: &SimConfig,
) -> Result<f64> {
    let a2 = star_poly(a, a, cfg);
    let e2 = expectation_poly_grid(&a2, rho, cfg)?;
    let e1 = expectation_poly_grid(a, rho, cfg)?;
    let var = e2.re - e1.re * e1.re;
    check_variance(var, e2.norm(), cfg)
}

/// (ΔA)² for a polynomial observable and analytic Gaussian state.
pub fn uncertainty_sq_poly_state(
    a: &PolyObservable,
    s: &GaussianState,
    cfg: &SimConfig,
) -> Result<f64> {
    let a2 = star_poly(a, a, cfg);
    let e2 = expectation_poly_state(&a2, s);
    let e1 = expectation_poly_state(a, s);
    let var = e2.re - e1.re * e1.re;
    check_variance(var, e2.norm(), cfg)
}

/// (ΔA)² for grid observables; A ⋆ A is computed spectrally.
pub fn uncertainty_sq_grid(a: &GridField, rho: &GridField, cfg: &SimConfig) -> Result<f64> {
    let a2 = star_grid(a, a, cfg)?;
    let e2 = expectation_grid_complex(&a2, rho, cfg)?;
    let e1 = expectation_grid_complex(a, rho, cfg)?;
    let var = e2.re - e1.re * e1.re;
    check_variance(var, e2.norm(), cfg)
}

/// Max-abs interior deviation of ρ ⋆ ρ from ρ. Zero for pure states.
pub fn purity_defect(rho: &GridField, cfg: &SimConfig) -> Result<f64> {
    let rho2 = star_grid(rho, rho, cfg)?;
    Ok(rho2.max_abs_diff_interior(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{rasterize_poly_windowed, PhaseGrid};
    use crate::states::{coherent, squeezed};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn cfg() -> SimConfig {
        SimConfig::default()
    }

    #[test]
    fn star_q_p() {
        // q ⋆ p = qp + iħ/2
        let s = star_poly(&PolyObservable::q(), &PolyObservable::p(), &cfg());
        assert_eq!(s.coeff(1, 1), Complex64::new(1.0, 0.0));
        assert_eq!(s.coeff(0, 0), Complex64::new(0.0, 0.5));
        assert_eq!(s.terms().count(), 2);
    }

    #[test]
    fn star_with_identity() {
        let f = PolyObservable::from_terms([
            ((3, 0), Complex64::new(1.5, 0.0)),
            ((1, 2), Complex64::new(-0.5, 2.0)),
            ((0, 1), Complex64::new(0.0, 1.0)),
        ]);
        let one = PolyObservable::one();
        assert_eq!(star_poly(&f, &one, &cfg()), f);
        assert_eq!(star_poly(&one, &f, &cfg()), f);
    }

    #[test]
    fn star_q2_p2() {
        // q² ⋆ p² = q²p² + 2iħ qp − ħ²/2
        let c = cfg();
        let s = star_poly(
            &PolyObservable::monomial(2, 0, 1.0),
            &PolyObservable::monomial(0, 2, 1.0),
            &c,
        );
        assert_eq!(s.coeff(2, 2), Complex64::new(1.0, 0.0));
        assert_eq!(s.coeff(1, 1), Complex64::new(0.0, 2.0));
        assert_eq!(s.coeff(0, 0), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn bracket_canonical_pair() {
        let b = moyal_bracket_poly(&PolyObservable::q(), &PolyObservable::p(), &cfg());
        assert_eq!(b, PolyObservable::one());
    }

    #[test]
    fn bracket_with_quadratic_is_poisson() {
        // H = ω(p² + q²)/2; ⟦H, f⟧ = {H, f} for every f.
        let omega = 1.7;
        let h = PolyObservable::monomial(2, 0, 0.5 * omega)
            .add(&PolyObservable::monomial(0, 2, 0.5 * omega));
        let f = PolyObservable::from_terms([
            ((4, 0), Complex64::new(0.3, 0.0)),
            ((2, 2), Complex64::new(-1.1, 0.4)),
            ((1, 3), Complex64::new(2.0, 0.0)),
            ((0, 1), Complex64::new(0.0, -0.7)),
        ]);
        let b = moyal_bracket_poly(&h, &f, &cfg());
        let p = poisson_bracket(&h, &f);
        assert!(b.max_coeff_distance(&p) < 1e-14);
    }

    #[test]
    fn bracket_q_with_quartic() {
        // ⟦q, λ q²p²⟧ = 2λ q²p (third derivatives of q vanish)
        let lambda = 0.8;
        let b = moyal_bracket_poly(
            &PolyObservable::q(),
            &PolyObservable::monomial(2, 2, lambda),
            &cfg(),
        );
        let expect = PolyObservable::monomial(2, 1, 2.0 * lambda);
        assert!(b.max_coeff_distance(&expect) < 1e-15);
    }

    #[test]
    fn grid_star_unit_identity() {
        let c = cfg();
        let grid = Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, 256, 256).unwrap());
        let rho = coherent(0.0, 0.0, &c).rasterize(&grid, &c).unwrap();
        let one = crate::grid::rasterize(|_, _| Complex64::new(1.0, 0.0), &grid).unwrap();
        let out = star_grid(&rho, &one, &c).unwrap();
        let err = (out.values() - rho.values())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "f ⋆ 1 deviation {err}");
    }

    #[test]
    fn grid_star_matches_poly_star_on_interior() {
        // windowed q ⋆ windowed p vs qp + iħ/2, compared well inside the
        // window: the star product smears the rolloff inward over a distance
        // of order ħ times the field bandwidth
        let c = cfg();
        let grid = Arc::new(PhaseGrid::new(-12.0, 12.0, -12.0, 12.0, 384, 384).unwrap());
        let fq = rasterize_poly_windowed(&PolyObservable::q(), &grid).unwrap();
        let fp = rasterize_poly_windowed(&PolyObservable::p(), &grid).unwrap();
        let prod = star_grid(&fq, &fp, &c).unwrap();
        let exact = star_poly(&PolyObservable::q(), &PolyObservable::p(), &c);
        let exact_field = crate::grid::rasterize(|q, p| exact.eval(q, p), &grid).unwrap();
        let err = prod.max_abs_diff_central(&exact_field, 0.30);
        assert!(err <= 1e-4, "interior deviation {err}");
        assert!(prod.support_warning);
    }

    #[test]
    fn grid_star_agreement_improves_under_refinement() {
        let c = cfg();
        let mut errs = Vec::new();
        for n in [64usize, 128, 256] {
            let grid = Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, n, n).unwrap());
            let fq = rasterize_poly_windowed(&PolyObservable::q(), &grid).unwrap();
            let fp = rasterize_poly_windowed(&PolyObservable::p(), &grid).unwrap();
            let prod = star_grid(&fq, &fp, &c).unwrap();
            let exact = star_poly(&PolyObservable::q(), &PolyObservable::p(), &c);
            let exact_field = crate::grid::rasterize(|q, p| exact.eval(q, p), &grid).unwrap();
            errs.push(prod.max_abs_diff_central(&exact_field, 0.30));
        }
        assert!(
            errs[2] < 0.5 * errs[0],
            "interior error should shrink under refinement: {errs:?}"
        );
    }

    #[test]
    fn purity_of_coherent_state() {
        let c = cfg();
        let grid = Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, 256, 256).unwrap());
        let rho = coherent(0.0, 0.0, &c).rasterize(&grid, &c).unwrap();
        let defect = purity_defect(&rho, &c).unwrap();
        assert!(defect <= 1e-6, "coherent purity defect {defect}");
    }

    #[test]
    fn purity_of_squeezed_state() {
        let c = cfg();
        let s = squeezed(0.0, 0.0, 2.0, &c).unwrap();
        let grid = s.default_grid(256).unwrap();
        let rho = s.rasterize(&grid, &c).unwrap();
        let defect = purity_defect(&rho, &c).unwrap();
        assert!(defect <= 1e-6, "squeezed purity defect {defect}");
    }

    #[test]
    fn mixture_is_detectably_impure() {
        let c = cfg();
        let grid = Arc::new(PhaseGrid::new(-10.0, 10.0, -10.0, 10.0, 256, 256).unwrap());
        let r1 = coherent(2.0, 0.0, &c).rasterize(&grid, &c).unwrap();
        let r2 = coherent(-2.0, 0.0, &c).rasterize(&grid, &c).unwrap();
        let mix = r1
            .scaled(Complex64::new(0.5, 0.0))
            .added(&r2.scaled(Complex64::new(0.5, 0.0)))
            .unwrap();
        let defect = purity_defect(&mix, &c).unwrap();
        assert!(defect >= 0.1, "mixture purity defect {defect}");
    }

    #[test]
    fn expectation_of_position() {
        let c = cfg();
        let s = coherent(1.5, -0.3, &c);
        let grid = s.default_grid(256).unwrap();
        let rho = s.rasterize(&grid, &c).unwrap();
        let q = crate::grid::rasterize(|q, _| Complex64::new(q, 0.0), &grid).unwrap();
        assert_abs_diff_eq!(expectation_grid(&q, &rho, &c).unwrap(), 1.5, epsilon = 1e-10);
        // A = 1 integrates to the normalization
        let one = crate::grid::rasterize(|_, _| Complex64::new(1.0, 0.0), &grid).unwrap();
        assert_abs_diff_eq!(expectation_grid(&one, &rho, &c).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn expectation_of_q_squared() {
        let c = cfg();
        let s = coherent(0.0, 0.0, &c);
        let grid = s.default_grid(256).unwrap();
        let rho = s.rasterize(&grid, &c).unwrap();
        let val = expectation_poly_grid(&PolyObservable::monomial(2, 0, 1.0), &rho, &c).unwrap();
        assert_abs_diff_eq!(val.re, 0.5, epsilon = 1e-10);
        // analytic route
        let exact = expectation_poly_state(&PolyObservable::monomial(2, 0, 1.0), &s);
        assert_abs_diff_eq!(exact.re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expectation_rejects_unnormalized_state() {
        let c = cfg();
        let s = coherent(0.0, 0.0, &c);
        let grid = s.default_grid(128).unwrap();
        let rho = s.rasterize(&grid, &c).unwrap().scaled(Complex64::new(2.0, 0.0));
        let q = crate::grid::rasterize(|q, _| Complex64::new(q, 0.0), &grid).unwrap();
        match expectation_grid(&q, &rho, &c) {
            Err(Error::NotNormalized { measured, .. }) => {
                assert_abs_diff_eq!(measured, 2.0, epsilon = 1e-8)
            }
            other => panic!("expected normalization error, got {other:?}"),
        }
    }

    #[test]
    fn uncertainty_of_coherent_and_squeezed() {
        let c = cfg();
        let s = coherent(0.0, 0.0, &c);
        let grid = s.default_grid(256).unwrap();
        let rho = s.rasterize(&grid, &c).unwrap();
        let q = PolyObservable::q();
        let p = PolyObservable::p();
        assert_abs_diff_eq!(
            uncertainty_sq_poly_grid(&q, &rho, &c).unwrap(),
            0.5,
            epsilon = 1e-8
        );

        let sq = squeezed(0.0, 0.0, 4.0, &c).unwrap();
        let grid = sq.default_grid(256).unwrap();
        let rho = sq.rasterize(&grid, &c).unwrap();
        let vq = uncertainty_sq_poly_grid(&q, &rho, &c).unwrap();
        let vp = uncertainty_sq_poly_grid(&p, &rho, &c).unwrap();
        assert_abs_diff_eq!(vq, 0.125, epsilon = 1e-8);
        assert_abs_diff_eq!(vp, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(vq * vp, 0.25, epsilon = 1e-8);
    }

    #[test]
    fn heisenberg_for_constructed_states() {
        let c = cfg();
        for s in [
            coherent(0.3, -0.2, &c),
            squeezed(0.0, 0.0, 0.25, &c).unwrap(),
            squeezed(1.0, 1.0, 3.0, &c).unwrap(),
            crate::states::quartic_coherent(0.0, 0.5, 2.0, &c).unwrap(),
        ] {
            let vq = uncertainty_sq_poly_state(&PolyObservable::q(), &s, &c).unwrap();
            let vp = uncertainty_sq_poly_state(&PolyObservable::p(), &s, &c).unwrap();
            assert!(vq * vp >= c.hbar * c.hbar / 4.0 - 1e-12);
        }
    }
}
