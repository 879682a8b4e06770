//! Runnable check suites mirroring each module's invariants, consumed by the
//! CLI `verify` subcommand and the acceptance tests.

use crate::config::SimConfig;
use crate::error::Error;
use crate::grid::{integrate_liouville, rasterize, rasterize_poly_windowed, PhaseGrid};
use crate::oracle::{
    classical_transport, evolve_wigner, gauss_hermite, quadrature_expectation, EvolutionRun,
};
use crate::poly::PolyObservable;
use crate::quadratic::{
    classify, closed_form_uncertainties, minimization_times, propagate_covariance, reduce_normal_form,
    rotate_frame, transformed_coefficients, Branch, ClosedFormCase, CovarianceMatrix, Mat2, Regime,
};
use crate::quartic::{self, Component};
use crate::star::{
    moyal_bracket_poly, poisson_bracket, purity_defect, star_grid, star_poly,
    uncertainty_sq_poly_state,
};
use crate::states::{coherent, quartic_coherent, squeezed};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Direction of a check's bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    AtMost,
    AtLeast,
}

/// One verification check: a measured value against a fixed bound.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub kind: BoundKind,
}

impl Check {
    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            kind: BoundKind::AtMost,
        }
    }

    fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            kind: BoundKind::AtLeast,
        }
    }

    pub fn pass(&self) -> bool {
        self.measured.is_finite()
            && match self.kind {
                BoundKind::AtMost => self.measured <= self.bound,
                BoundKind::AtLeast => self.measured >= self.bound,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Star,
    Quadratic,
    Quartic,
    Oracle,
    All,
}

pub fn run_suite(suite: Suite, cfg: &SimConfig) -> Vec<Check> {
    match suite {
        Suite::Star => suite_star(cfg),
        Suite::Quadratic => suite_quadratic(cfg),
        Suite::Quartic => suite_quartic(cfg),
        Suite::Oracle => suite_oracle(cfg),
        Suite::All => {
            let mut all = suite_star(cfg);
            all.extend(suite_quadratic(cfg));
            all.extend(suite_quartic(cfg));
            all.extend(suite_oracle(cfg));
            all
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32, complex: bool) -> PolyObservable {
    let mut terms = Vec::new();
    for i in 0..=max_degree {
        for j in 0..=(max_degree - i) {
            let re = rng.gen_range(-1.0..1.0);
            let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
            terms.push(((i, j), Complex64::new(re, im)));
        }
    }
    PolyObservable::from_terms(terms)
}

fn rel_poly_distance(a: &PolyObservable, b: &PolyObservable) -> f64 {
    let scale = a.max_coeff_norm().max(b.max_coeff_norm()).max(1e-300);
    a.max_coeff_distance(b) / scale
}

pub fn suite_star(cfg: &SimConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5741_u64);

    // associativity, antisymmetry, Leibniz, classical limit, hermiticity
    let mut assoc = 0.0f64;
    let mut antisym = 0.0f64;
    let mut leibniz = 0.0f64;
    let mut classical = 0.0f64;
    let mut hermitian = 0.0f64;
    let cfg0 = SimConfig {
        hbar: 0.0_f64.max(f64::MIN_POSITIVE),
        ..*cfg
    };
    for _ in 0..100 {
        let f = random_poly(&mut rng, 4, true);
        let g = random_poly(&mut rng, 4, true);
        let h = random_poly(&mut rng, 4, true);

        let lhs = star_poly(&f, &star_poly(&g, &h, cfg), cfg);
        let rhs = star_poly(&star_poly(&f, &g, cfg), &h, cfg);
        assoc = assoc.max(rel_poly_distance(&lhs, &rhs));

        let bfg = moyal_bracket_poly(&f, &g, cfg);
        let bgf = moyal_bracket_poly(&g, &f, cfg);
        antisym = antisym.max(rel_poly_distance(&bfg, &bgf.scale(-1.0)));

        // Leibniz with respect to the star product:
        // ⟦f, g⋆h⟧ = ⟦f,g⟧⋆h + g⋆⟦f,h⟧
        let lhs = moyal_bracket_poly(&f, &star_poly(&g, &h, cfg), cfg);
        let rhs = star_poly(&bfg, &h, cfg).add(&star_poly(
            &g,
            &moyal_bracket_poly(&f, &h, cfg),
            cfg,
        ));
        leibniz = leibniz.max(rel_poly_distance(&lhs, &rhs));

        classical = classical.max(rel_poly_distance(&star_poly(&f, &g, &cfg0), &f.mul(&g)));

        let lhs = star_poly(&f, &g, cfg).conj();
        let rhs = star_poly(&g.conj(), &f.conj(), cfg);
        hermitian = hermitian.max(rel_poly_distance(&lhs, &rhs));
    }
    checks.push(Check::at_most("star.poly.associativity.max_rel", assoc, 1e-12));
    checks.push(Check::at_most("star.poly.bracket_antisymmetry.max_rel", antisym, 1e-12));
    checks.push(Check::at_most("star.poly.bracket_leibniz.max_rel", leibniz, 1e-12));
    checks.push(Check::at_most("star.poly.classical_limit.max_rel", classical, 1e-12));
    checks.push(Check::at_most("star.poly.hermiticity.max_rel", hermitian, 1e-12));

    // quadratic brackets are Poisson, coefficient-exact
    let mut quad_poisson = 0.0f64;
    for _ in 0..20 {
        let h = classify(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
        .poly();
        let f = random_poly(&mut rng, 4, false);
        quad_poisson = quad_poisson.max(rel_poly_distance(
            &moyal_bracket_poly(&h, &f, cfg),
            &poisson_bracket(&h, &f),
        ));
    }
    checks.push(Check::at_most(
        "star.poly.quadratic_bracket_is_poisson.max_rel",
        quad_poisson,
        1e-12,
    ));

    // grid realization against the exact algebra: the comparison region sits
    // well inside the window, since the star product's nonlocality reaches a
    // distance of order ħ times the field bandwidth
    let exact = star_poly(&PolyObservable::q(), &PolyObservable::p(), cfg);
    checks.push(Check::at_most(
        "star.grid.qp_vs_poly.interior_max_abs",
        windowed_qp_deviation(384, 12.0, 0.30, cfg),
        1e-4,
    ));

    let grid = Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, 256, 256).unwrap());
    let rho = coherent(0.0, 0.0, cfg).rasterize(&grid, cfg).unwrap();
    let one = rasterize(|_, _| Complex64::new(1.0, 0.0), &grid).unwrap();
    let unit = star_grid(&rho, &one, cfg).unwrap();
    let unit_err = (unit.values() - rho.values())
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("star.grid.unit_identity.max_abs", unit_err, 1e-10));

    // grid hermiticity on a complex field pair
    let f = rasterize(
        |q, p| Complex64::new((-0.4 * q * q - 0.3 * p * p).exp(), 0.2 * q * (-0.4 * q * q - 0.3 * p * p).exp()),
        &grid,
    )
    .unwrap();
    let g = rasterize(
        |q, p| Complex64::new((-0.5 * (q - 0.5) * (q - 0.5) - 0.4 * p * p).exp(), -0.1 * p * (-0.5 * (q - 0.5) * (q - 0.5) - 0.4 * p * p).exp()),
        &grid,
    )
    .unwrap();
    let lhs = star_grid(&f, &g, cfg).unwrap();
    let f_conj =
        crate::grid::GridField::new(grid.clone(), f.values().mapv(|v| v.conj())).unwrap();
    let g_conj =
        crate::grid::GridField::new(grid.clone(), g.values().mapv(|v| v.conj())).unwrap();
    let rhs = star_grid(&g_conj, &f_conj, cfg).unwrap();
    let herm_err = lhs
        .values()
        .iter()
        .zip(rhs.values().iter())
        .map(|(a, b)| (a.conj() - b).norm())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("star.grid.hermiticity.max_abs", herm_err, 1e-9));

    // refinement: the discretization component of the interior error shrinks
    let _ = &exact;
    let errs = [
        windowed_qp_deviation(64, 8.0, 0.30, cfg),
        windowed_qp_deviation(256, 8.0, 0.30, cfg),
    ];
    checks.push(Check::at_most(
        "star.grid.refinement_error_ratio",
        errs[1] / errs[0].max(1e-300),
        0.5,
    ));

    // purity: pure states idempotent, mixtures detectably not
    checks.push(Check::at_most(
        "star.purity.coherent.defect",
        purity_defect(&rho, cfg).unwrap(),
        1e-6,
    ));
    let sq = squeezed(0.0, 0.0, 2.0, cfg).unwrap();
    let sq_grid = sq.default_grid(256).unwrap();
    let sq_rho = sq.rasterize(&sq_grid, cfg).unwrap();
    checks.push(Check::at_most(
        "star.purity.squeezed.defect",
        purity_defect(&sq_rho, cfg).unwrap(),
        1e-6,
    ));
    let mix_grid = Arc::new(PhaseGrid::new(-10.0, 10.0, -10.0, 10.0, 256, 256).unwrap());
    let r1 = coherent(2.0, 0.0, cfg).rasterize(&mix_grid, cfg).unwrap();
    let r2 = coherent(-2.0, 0.0, cfg).rasterize(&mix_grid, cfg).unwrap();
    let mix = r1
        .scaled(Complex64::new(0.5, 0.0))
        .added(&r2.scaled(Complex64::new(0.5, 0.0)))
        .unwrap();
    checks.push(Check::at_least(
        "star.purity.mixture.defect",
        purity_defect(&mix, cfg).unwrap(),
        0.1,
    ));

    // normalization and linearity of the Liouville integral
    let norm = integrate_liouville(&rho, cfg).unwrap();
    checks.push(Check::at_most(
        "star.integrate.coherent_normalization.abs_err",
        (norm.re - 1.0).abs(),
        1e-10,
    ));

    // Heisenberg across constructed states
    let mut min_product = f64::INFINITY;
    for s in [
        coherent(0.3, -0.2, cfg),
        squeezed(0.0, 0.0, 0.25, cfg).unwrap(),
        squeezed(1.0, 1.0, 4.0, cfg).unwrap(),
        quartic_coherent(0.0, 0.5, 2.0, cfg).unwrap(),
        quartic_coherent(0.2, 0.0, 0.4, cfg).unwrap(),
    ] {
        let vq = uncertainty_sq_poly_state(&PolyObservable::q(), &s, cfg).unwrap();
        let vp = uncertainty_sq_poly_state(&PolyObservable::p(), &s, cfg).unwrap();
        min_product = min_product.min(vq * vp);
    }
    checks.push(Check::at_least(
        "star.heisenberg.min_product",
        min_product,
        cfg.hbar * cfg.hbar / 4.0 - cfg.default_tolerance,
    ));

    checks
}

/// Interior deviation of windowed q ⋆ windowed p from qp + iħ/2.
pub fn windowed_qp_deviation(n: usize, half_width: f64, margin: f64, cfg: &SimConfig) -> f64 {
    let grid = Arc::new(
        PhaseGrid::new(-half_width, half_width, -half_width, half_width, n, n).unwrap(),
    );
    let fq = rasterize_poly_windowed(&PolyObservable::q(), &grid).unwrap();
    let fp = rasterize_poly_windowed(&PolyObservable::p(), &grid).unwrap();
    let prod = star_grid(&fq, &fp, cfg).unwrap();
    let exact = star_poly(&PolyObservable::q(), &PolyObservable::p(), cfg);
    let exact_field = rasterize(|q, p| exact.eval(q, p), &grid).unwrap();
    prod.max_abs_diff_central(&exact_field, margin)
}

/// The closed-form cases exercised by the master oracle, with sampling
/// ranges chosen to stay within f64 range for the hyperbolic growth.
fn oracle_cases() -> Vec<(ClosedFormCase, f64, (f64, f64))> {
    let rt_range = (0.0, 2.0 * PI / 21.0f64.sqrt());
    vec![
        (
            ClosedFormCase::EllipticGeneral { omega: 5.0, r: 2.0, theta: PI / 3.0 },
            2.5,
            rt_range,
        ),
        (
            ClosedFormCase::EllipticCoherent { omega: 5.0, r: 2.0, theta: PI / 3.0 },
            1.0,
            rt_range,
        ),
        (ClosedFormCase::Beta0General { omega: 5.0, r: 2.0 }, 0.5, rt_range),
        (ClosedFormCase::Beta0Coherent { omega: 5.0, r: 2.0 }, 1.0, rt_range),
        (
            ClosedFormCase::HyperbolicOmega0General { r: 2.0, theta: PI / 4.0 },
            3.0,
            (-1.5, 1.5),
        ),
        (
            ClosedFormCase::HyperbolicOmega0Coherent { r: 2.0, theta: PI / 4.0 },
            1.0,
            (-1.5, 1.5),
        ),
        (ClosedFormCase::ScalingGeneral { r: 2.0 }, 0.7, (-2.0, 2.0)),
        (
            ClosedFormCase::Parabolic { omega: 5.0, alpha: 3.0, beta: 4.0 },
            1.8,
            (-2.0, 2.0),
        ),
    ]
}

/// Master oracle: worst relative deviation between a closed-form case and
/// covariance propagation over `samples` times.
pub fn master_oracle_deviation(
    case: &ClosedFormCase,
    gamma: f64,
    t_range: (f64, f64),
    samples: usize,
    cfg: &SimConfig,
) -> f64 {
    let h = case.hamiltonian();
    let s0 = CovarianceMatrix::diagonal(0.5 * cfg.hbar / gamma, 0.5 * cfg.hbar * gamma);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (samples - 1) as f64;
        let (vq, vp, prod) = closed_form_uncertainties(case, gamma, t, cfg).unwrap();
        let sigma = propagate_covariance(&h, &s0, t);
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
        worst = worst
            .max(rel(vq, sigma.var_q))
            .max(rel(vp, sigma.var_p))
            .max(rel(prod, sigma.var_q * sigma.var_p));
    }
    worst
}

pub fn suite_quadratic(cfg: &SimConfig) -> Vec<Check> {
    let mut checks = Vec::new();

    for (case, gamma, range) in oracle_cases() {
        let name = format!("quadratic.master_oracle.{}", case_tag(&case));
        checks.push(Check::at_most(
            &name,
            master_oracle_deviation(&case, gamma, range, 1000, cfg),
            1e-10,
        ));
    }

    // flow group structure over all regimes; determinant and inverse
    // defects measured relative to the entry scale (hyperbolic flows reach
    // cosh²(Rt) products where absolute comparisons are meaningless)
    let mut rng = ChaCha8Rng::seed_from_u64(0x5155_u64);
    let mut det_err = 0.0f64;
    let mut inv_err = 0.0f64;
    for _ in 0..50 {
        let h = classify(
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        for _ in 0..20 {
            let t = rng.gen_range(-10.0..10.0);
            let m = h.flow(t);
            det_err = det_err.max(m.det_defect());
            let inv = h.flow(-t);
            let scale = (m.max_abs() * inv.max_abs()).max(1.0);
            inv_err = inv_err
                .max(m.mul(&inv).max_abs_diff(&Mat2::identity()) / scale);
        }
    }
    checks.push(Check::at_most("quadratic.flow.det_defect.max_rel", det_err, 1e-10));
    checks.push(Check::at_most("quadratic.flow.inverse_identity.max_rel", inv_err, 1e-10));

    // HO coherence: r = 0 keeps variances at ħ/2
    let case = ClosedFormCase::EllipticCoherent { omega: 1.0, r: 0.0, theta: 0.0 };
    let mut ho_err = 0.0f64;
    for i in 0..1000 {
        let t = i as f64 * 2.0 * PI / 999.0;
        let (vq, vp, _) = closed_form_uncertainties(&case, 1.0, t, cfg).unwrap();
        ho_err = ho_err.max((vq - 0.5 * cfg.hbar).abs()).max((vp - 0.5 * cfg.hbar).abs());
    }
    checks.push(Check::at_most("quadratic.ho_coherence.max_abs", ho_err, 1e-12));

    // Eq.-(19) constancy of the scaling-case product
    let case = ClosedFormCase::ScalingGeneral { r: 2.0 };
    let mut const_err = 0.0f64;
    for i in 0..1000 {
        let t = -1.0 + 2.0 * i as f64 / 999.0;
        let (_, _, prod) = closed_form_uncertainties(&case, 1.0, t, cfg).unwrap();
        const_err = const_err.max((prod - 0.25 * cfg.hbar * cfg.hbar).abs());
    }
    checks.push(Check::at_most("quadratic.eq19_constancy.max_abs", const_err, 1e-12));

    // minimization times of the fig-1a parameters
    let h = classify(5.0, 2.0 * (PI / 3.0).cos(), 2.0 * (PI / 3.0).sin());
    let times = minimization_times(&h).unwrap();
    let case = ClosedFormCase::EllipticCoherent { omega: 5.0, r: 2.0, theta: PI / 3.0 };
    let mut min_err = 0.0f64;
    let found = times.times_in(2.0 * PI / h.big_r);
    for &t in &found {
        let (_, _, prod) = closed_form_uncertainties(&case, 1.0, t, cfg).unwrap();
        min_err = min_err.max((prod - 0.25 * cfg.hbar * cfg.hbar).abs());
    }
    checks.push(Check::at_most("quadratic.minimization_times.max_abs", min_err, 1e-12));

    // product bound (Heisenberg) on the elliptic coherent case
    let mut min_excess = f64::INFINITY;
    for i in 0..1000 {
        let t = i as f64 * 2.0 * PI / h.big_r / 999.0;
        let (_, _, prod) = closed_form_uncertainties(&case, 1.0, t, cfg).unwrap();
        min_excess = min_excess.min(prod - 0.25 * cfg.hbar * cfg.hbar);
    }
    checks.push(Check::at_least("quadratic.eq13_product_bound.min_excess", min_excess, -1e-12));

    // parabolic squeezing destruction: last squeezed time is finite
    let case = ClosedFormCase::Parabolic { omega: 5.0, alpha: 3.0, beta: 4.0 };
    let mut last_squeezed = 0.0f64;
    for i in 0..20_000 {
        let t = i as f64 * 1e-3;
        let (vq, vp, _) = closed_form_uncertainties(&case, 0.5, t, cfg).unwrap();
        if vq.min(vp) < 0.5 * cfg.hbar - 1e-12 {
            last_squeezed = t;
        }
    }
    checks.push(Check::at_most("quadratic.parabolic_squeezing_end_time", last_squeezed, 10.0));

    // hyperbolic ω = 0, θ ∉ kπ: squeezing on one initial interval and never
    // again. The scan starts unsqueezed at t = 0, turns squeezed, turns back:
    // exactly two transitions.
    let case = ClosedFormCase::HyperbolicOmega0Coherent { r: 2.0, theta: PI / 4.0 };
    let mut transitions = 0u32;
    let mut prev_squeezed = None;
    for i in 0..=4000 {
        let t = i as f64 * 5e-4;
        let (vq, vp, _) = closed_form_uncertainties(&case, 1.0, t, cfg).unwrap();
        let squeezed_now = vq.min(vp) < 0.5 * cfg.hbar - 1e-12;
        if let Some(prev) = prev_squeezed {
            if prev != squeezed_now {
                transitions += 1;
            }
        }
        prev_squeezed = Some(squeezed_now);
    }
    checks.push(Check::at_most(
        "quadratic.hyperbolic_initial_squeezing.pattern_defect",
        (transitions as f64 - 2.0).abs(),
        0.0,
    ));

    // rotation by θ/2 removes β and preserves R
    let mut rng = ChaCha8Rng::seed_from_u64(0x526f_u64);
    let mut rot_err = 0.0f64;
    for _ in 0..50 {
        let h = classify(
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let (map, _) = rotate_frame(&h);
        let (op, ap, bp) = transformed_coefficients(&h, &map);
        let scale = 1.0 + h.omega.abs() + h.r;
        rot_err = rot_err
            .max((op - h.omega).abs() / scale)
            .max((ap - h.r).abs() / scale)
            .max(bp.abs() / scale);
    }
    checks.push(Check::at_most("quadratic.rotation.coefficient_err", rot_err, 1e-12));

    // canonical reductions: 50 random Hamiltonians per regime, 5 a-values
    let (det_err, coeff_err) = reduction_sweep(cfg);
    checks.push(Check::at_most("quadratic.reduction.det_minus_one.max_abs", det_err, 1e-10));
    checks.push(Check::at_most("quadratic.reduction.normal_form_err.max_abs", coeff_err, 1e-10));

    checks
}

fn case_tag(case: &ClosedFormCase) -> &'static str {
    match case {
        ClosedFormCase::EllipticGeneral { .. } => "elliptic_general",
        ClosedFormCase::EllipticCoherent { .. } => "elliptic_coherent",
        ClosedFormCase::Beta0General { .. } => "beta0_general",
        ClosedFormCase::Beta0Coherent { .. } => "beta0_coherent",
        ClosedFormCase::HyperbolicOmega0General { .. } => "hyperbolic_omega0_general",
        ClosedFormCase::HyperbolicOmega0Coherent { .. } => "hyperbolic_omega0_coherent",
        ClosedFormCase::ScalingGeneral { .. } => "scaling_general",
        ClosedFormCase::Parabolic { .. } => "parabolic",
    }
}

/// Random reduction sweep: returns (max |det−1|, max normal-form coefficient
/// error) over 50 Hamiltonians per supported regime and 5 values of a each.
pub fn reduction_sweep(_cfg: &SimConfig) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7265_u64);
    let mut det_err = 0.0f64;
    let mut coeff_err = 0.0f64;

    let mut check_map = |h: &crate::quadratic::QuadraticHamiltonian, a: f64, branch: Branch| {
        let (map, target) = match reduce_normal_form(h, a, branch) {
            Ok(pair) => pair,
            Err(_) => return,
        };
        det_err = det_err.max((map.det() - 1.0).abs());
        let (op, ap, bp) = transformed_coefficients(h, &map);
        let scale = 1.0 + h.big_r;
        coeff_err = coeff_err
            .max((op - target.omega).abs() / scale)
            .max((ap - target.alpha).abs() / scale)
            .max(bp.abs() / scale);
    };

    // elliptic (both signs of ω)
    let mut count = 0;
    while count < 50 {
        let omega: f64 = rng.gen_range(0.5..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let r = rng.gen_range(0.0..omega.abs() * 0.95);
        let theta = rng.gen_range(-PI..PI);
        let h = classify(omega, r * theta.cos(), r * theta.sin());
        if h.regime != Regime::Elliptic {
            continue;
        }
        count += 1;
        let a_max = ((h.omega + h.beta).abs() / h.big_r).sqrt();
        for frac in [0.0, 0.3, 0.55, 0.8, 0.99] {
            let a = frac * a_max;
            let branch = if frac > 0.5 { Branch::Minus } else { Branch::Plus };
            check_map(&h, a, branch);
        }
    }

    // hyperbolic, keeping ω+β away from zero where the maps exist
    let mut count = 0;
    while count < 50 {
        let omega: f64 = rng.gen_range(-2.0..2.0);
        let r = omega.abs() + rng.gen_range(0.5..4.0);
        let theta = rng.gen_range(-PI..PI);
        let h = classify(omega, r * theta.cos(), r * theta.sin());
        if h.regime != Regime::Hyperbolic
            || (h.omega + h.beta).abs() < 0.2 * (1.0 + h.omega.abs() + h.beta.abs())
        {
            continue;
        }
        count += 1;
        for a in [-2.0, -0.7, 0.4, 1.0, 3.0] {
            let branch = if a > 0.0 { Branch::Plus } else { Branch::Minus };
            check_map(&h, a, branch);
        }
    }

    (det_err, coeff_err)
}

pub fn suite_quartic(cfg: &SimConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let lambda = 1.0;
    let state = quartic_coherent(0.01, 1.0, 1.0, cfg).unwrap();
    let hl = cfg.hbar * lambda;

    // identity at t = 0
    let ((mq, mp), _) = quartic::first_moments(&state, lambda, 0.0, cfg).unwrap();
    let ((vq, vp, prod), _) = quartic::uncertainties(&state, lambda, 0.0, cfg).unwrap();
    let t0_err = (mq - state.q0)
        .abs()
        .max((mp - state.p0).abs())
        .max((vq - 0.5 * cfg.hbar).abs())
        .max((vp - 0.5 * cfg.hbar).abs())
        .max((prod - 0.25 * cfg.hbar * cfg.hbar).abs());
    checks.push(Check::at_most("quartic.t0_identities.max_abs", t0_err, 1e-13));

    // coherence returns at t = πn/(ħλ)
    let mut return_err = 0.0f64;
    for n in [1i64, -1, 2] {
        let t = n as f64 * PI / hl;
        let ((vq, vp, prod), _) = quartic::uncertainties(&state, lambda, t, cfg).unwrap();
        return_err = return_err
            .max((vq - 0.5 * cfg.hbar).abs())
            .max((vp - 0.5 * cfg.hbar).abs())
            .max((prod - 0.25 * cfg.hbar * cfg.hbar).abs());
    }
    checks.push(Check::at_most("quartic.coherence_return.max_abs", return_err, 1e-12));

    // no squeezing across the n = 0 window (dense scan). The claim is exact
    // for a centered state; for the displaced fig-2 state the variances dip
    // below their initial values by a few parts in 1e5 near t = 0 (verified
    // against the quadrature oracle), so that configuration gets a bounded-
    // dip check instead.
    let guard = 1e-3 * PI / hl;
    let lim = PI / (8.0 * hl) - guard;
    let centered = quartic_coherent(0.0, 1.0, 1.0, cfg).unwrap();
    let mut min_centered: f64 = f64::INFINITY;
    let mut min_fig2: f64 = f64::INFINITY;
    for i in 0..10_000 {
        let t = -lim + 2.0 * lim * i as f64 / 9999.0;
        let ((vq, vp, _), _) = quartic::uncertainties(&centered, lambda, t, cfg).unwrap();
        min_centered = min_centered.min(vq).min(vp);
        let ((vq, vp, _), _) = quartic::uncertainties(&state, lambda, t, cfg).unwrap();
        min_fig2 = min_fig2.min(vq).min(vp);
    }
    checks.push(Check::at_least(
        "quartic.no_squeezing_centered.min_var",
        min_centered,
        0.5 * cfg.hbar - 1e-10,
    ));
    checks.push(Check::at_least(
        "quartic.no_squeezing_fig2.min_var",
        min_fig2,
        0.5 * cfg.hbar - 5e-5,
    ));

    // Heisenberg along the window
    let mut min_excess = f64::INFINITY;
    for i in 0..10_000 {
        let t = -lim + 2.0 * lim * i as f64 / 9999.0;
        let ((_, _, prod), _) = quartic::uncertainties(&state, lambda, t, cfg).unwrap();
        min_excess = min_excess.min(prod - 0.25 * cfg.hbar * cfg.hbar);
    }
    checks.push(Check::at_least("quartic.heisenberg.min_excess", min_excess, -1e-10));

    // first moments against the Gauss-Hermite oracle
    let mut fm_err = 0.0f64;
    for i in 0..20 {
        let t = -0.7 + 1.4 * i as f64 / 19.0;
        let ((mq, mp), _) = quartic::first_moments(&state, lambda, t, cfg).unwrap();
        let flow = quartic::flow_quantum(lambda, t, cfg).unwrap();
        let oq = quadrature_expectation(|q, p| flow.eval_q(q, p), &state, cfg).unwrap();
        let op = quadrature_expectation(|q, p| flow.eval_p(q, p), &state, cfg).unwrap();
        fm_err = fm_err
            .max((mq - oq).abs() / oq.abs().max(1e-10))
            .max((mp - op).abs() / op.abs().max(1e-10));
    }
    checks.push(Check::at_most("quartic.first_moments_vs_quadrature.max_rel", fm_err, 1e-6));

    // uncertainties against the oracle inside (−0.35, 0.35)
    let mut un_err = 0.0f64;
    for i in 0..20 {
        let t = -0.35 + 0.7 * i as f64 / 19.0;
        let ((vq, vp, _), _) = quartic::uncertainties(&state, lambda, t, cfg).unwrap();
        let flow = quartic::flow_quantum(lambda, t, cfg).unwrap();
        let sq = quartic::star_square(lambda, t, Component::Q, cfg).unwrap();
        let sp = quartic::star_square(lambda, t, Component::P, cfg).unwrap();
        let q1 = quadrature_expectation(|q, p| flow.eval_q(q, p), &state, cfg).unwrap();
        let p1 = quadrature_expectation(|q, p| flow.eval_p(q, p), &state, cfg).unwrap();
        let q2 = quadrature_expectation(|q, p| sq.eval(q, p), &state, cfg).unwrap();
        let p2 = quadrature_expectation(|q, p| sp.eval(q, p), &state, cfg).unwrap();
        let ovq = q2 - q1 * q1;
        let ovp = p2 - p1 * p1;
        un_err = un_err
            .max((vq - ovq).abs() / ovq.abs().max(1e-10))
            .max((vp - ovp).abs() / ovp.abs().max(1e-10));
    }
    checks.push(Check::at_most("quartic.uncertainties_vs_quadrature.max_rel", un_err, 1e-6));

    // quadrature diverges outside the first-moment window
    let diverges = {
        let flow = quartic::flow_quantum(lambda, 0.8, cfg).unwrap();
        matches!(
            quadrature_expectation(|q, p| flow.eval_q(q, p), &state, cfg),
            Err(Error::QuadratureDivergence { .. })
        )
    };
    checks.push(Check::at_least(
        "quartic.quadrature_divergence_past_boundary",
        diverges as u8 as f64,
        1.0,
    ));

    // validity nesting for n = 0
    let u = quartic::validity(quartic::QuarticQuantity::Uncertainties, lambda, cfg, 0).unwrap();
    let s = quartic::validity(quartic::QuarticQuantity::SecondMoments, lambda, cfg, 0).unwrap();
    let f = quartic::validity(quartic::QuarticQuantity::FirstMoments, lambda, cfg, 0).unwrap();
    let nested = (u.t_lo >= s.t_lo && u.t_hi <= s.t_hi && s.t_lo >= f.t_lo && s.t_hi <= f.t_hi)
        as u8 as f64;
    checks.push(Check::at_least("quartic.validity_nesting", nested, 1.0));

    // ħ → 0: quantum flow converges to the classical flow at first order
    let (q, p, t) = (0.8, -0.6, 0.3);
    let classical = quartic::flow_classical(lambda, t).eval_q(q, p);
    let mut errs = Vec::new();
    for hbar in [1e-2, 1e-3, 1e-4] {
        let c = SimConfig::with_hbar(hbar).unwrap();
        let quantum = quartic::flow_quantum(lambda, t, &c).unwrap().eval_q(q, p);
        errs.push((quantum - classical).abs());
    }
    let slope = (errs[0] / errs[2]).log10() / 2.0;
    checks.push(Check::at_least("quartic.classical_limit.order", slope, 0.9));

    // star-squares: closed form vs the spectral grid star product
    checks.push(Check::at_most(
        "quartic.star_square_grid.max_rel",
        star_square_grid_deviation(512, 0.1, cfg),
        1e-3,
    ));

    // grid Moyal bracket of the flow fields: ⟦Q(t), P(t)⟧ = 1 on the interior
    checks.push(Check::at_most(
        "quartic.flow_bracket_unity.interior_max_abs",
        flow_bracket_deviation(256, 0.1, cfg),
        1e-3,
    ));

    checks
}

/// Relative deviation between the closed-form Q ⋆ Q and the grid star
/// product of the rasterized, windowed flow fields; measured against the
/// peak magnitude over the comparison region.
///
/// The flow fields grow like e^{(2/ħ)tan(ħλt)qp}, so the window must cut
/// them at large values; the comparison region (central 30% of the domain)
/// sits deep enough that the wraparound leakage stays below the bound. A
/// 20% rolloff replaces the default 10% here for the extra spectral decay.
pub fn star_square_grid_deviation(n: usize, t: f64, cfg: &SimConfig) -> f64 {
    let lambda = 1.0;
    let half = 7.0;
    let margin = 0.35;
    let grid = Arc::new(PhaseGrid::new(-half, half, -half, half, n, n).unwrap());
    let flow = quartic::flow_quantum(lambda, t, cfg).unwrap();
    let mut fq = rasterize(|q, p| Complex64::new(flow.eval_q(q, p), 0.0), &grid).unwrap();
    fq.apply_window_with(0.20);
    let num = star_grid(&fq, &fq, cfg).unwrap();
    let closed = quartic::star_square(lambda, t, Component::Q, cfg).unwrap();
    let closed_field = rasterize(|q, p| Complex64::new(closed.eval(q, p), 0.0), &grid).unwrap();

    let lo = (n as f64 * margin) as usize;
    let hi = (n as f64 * (1.0 - margin)) as usize;
    let mut scale = 0.0f64;
    for i in lo..hi {
        for j in lo..hi {
            scale = scale.max(closed_field.values()[[i, j]].norm());
        }
    }
    num.max_abs_diff_central(&closed_field, margin) / scale
}

/// Central-region deviation of the grid star-bracket ⟦Q(t), P(t)⟧ from 1.
pub fn flow_bracket_deviation(n: usize, t: f64, cfg: &SimConfig) -> f64 {
    let lambda = 1.0;
    let half = 8.0;
    let grid = Arc::new(PhaseGrid::new(-half, half, -half, half, n, n).unwrap());
    let flow = quartic::flow_quantum(lambda, t, cfg).unwrap();
    let mut fq = rasterize(|q, p| Complex64::new(flow.eval_q(q, p), 0.0), &grid).unwrap();
    fq.apply_window_with(0.25);
    let mut fp = rasterize(|q, p| Complex64::new(flow.eval_p(q, p), 0.0), &grid).unwrap();
    fp.apply_window_with(0.25);
    let qp = star_grid(&fq, &fp, cfg).unwrap();
    let pq = star_grid(&fp, &fq, cfg).unwrap();
    let scale = Complex64::new(0.0, cfg.hbar).inv();
    let bracket = qp.subbed(&pq).unwrap().scaled(scale);
    let one = rasterize(|_, _| Complex64::new(1.0, 0.0), &grid).unwrap();
    bracket.max_abs_diff_central(&one, 0.42)
}

pub fn suite_oracle(cfg: &SimConfig) -> Vec<Check> {
    let mut checks = Vec::new();

    // harmonic oscillator over one period: the workhorse evolution check
    let (period_err, drift, imag) = ho_period_return(256, 1000, cfg);
    checks.push(Check::at_most("oracle.ho_period_return.interior_max_abs", period_err, 1e-4));
    checks.push(Check::at_most("oracle.normalization_drift.max_abs", drift, 1e-6));
    checks.push(Check::at_most("oracle.self_conjugation.max_imag", imag, 1e-8));

    // RK4 order against the exact transport
    checks.push(Check::at_least("oracle.rk4_convergence.slope", rk4_slope(cfg), 3.5));

    // the ħ² bracket term is measurably significant for the quartic system
    let (hbar2_effect, integration_err) = hbar2_significance(cfg);
    checks.push(Check::at_least(
        "oracle.hbar2_term_significance.ratio",
        hbar2_effect / integration_err.max(1e-300),
        10.0,
    ));

    // quartic grid moments against the closed forms at t = 0.1
    checks.push(Check::at_most(
        "oracle.quartic_grid_vs_closed_forms.max_rel",
        quartic_grid_deviation(cfg),
        1e-3,
    ));

    // Gauss-Hermite machinery
    let (x, w) = gauss_hermite::nodes_weights(128);
    let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
    checks.push(Check::at_most(
        "oracle.gauss_hermite.second_moment_err",
        (m2 - 0.5 * PI.sqrt()).abs(),
        1e-11,
    ));

    checks
}

/// Evolve a coherent state under the harmonic oscillator for one period.
/// Returns (interior return error, worst normalization drift, worst |Im ρ|).
pub fn ho_period_return(n: usize, steps: usize, cfg: &SimConfig) -> (f64, f64, f64) {
    let s = coherent(1.0, 0.5, cfg);
    let half = 9.2 * cfg.hbar.sqrt();
    let grid = Arc::new(PhaseGrid::new(-half, half, -half, half, n, n).unwrap());
    let rho0 = s.rasterize(&grid, cfg).unwrap();
    let h = classify(1.0, 0.0, 0.0);
    let period = 2.0 * PI;
    let mut run = EvolutionRun::new(rho0.clone(), h.poly(), period / steps as f64, steps);
    run.snapshot_every = steps / 4;
    let snaps = evolve_wigner(&run, cfg).unwrap();
    let mut drift = 0.0f64;
    let mut imag = 0.0f64;
    for snap in &snaps {
        let norm = integrate_liouville(snap, cfg).unwrap();
        drift = drift.max((norm.re - 1.0).abs());
        imag = imag.max(snap.max_abs_imag());
    }
    let ret = snaps.last().unwrap().max_abs_diff_interior(&rho0);
    (ret, drift, imag)
}

/// Fitted convergence order of the evolved moments as the step count doubles.
fn rk4_slope(cfg: &SimConfig) -> f64 {
    let s = coherent(1.0, 0.5, cfg);
    let half = 9.2 * cfg.hbar.sqrt();
    let grid = Arc::new(PhaseGrid::new(-half, half, -half, half, 128, 128).unwrap());
    let rho0 = s.rasterize(&grid, cfg).unwrap();
    let h = classify(1.0, 0.0, 0.0);
    let t_end = PI / 2.0;
    let ((eq, ep), _) = classical_transport(&h, &s, t_end);
    let mut errs = Vec::new();
    for steps in [150usize, 300, 600] {
        let run = EvolutionRun::new(rho0.clone(), h.poly(), t_end / steps as f64, steps);
        let snaps = evolve_wigner(&run, cfg).unwrap();
        let last = snaps.last().unwrap();
        let mq = crate::grid::grid_moment(last, 1, 0, cfg).unwrap().re;
        let mp = crate::grid::grid_moment(last, 0, 1, cfg).unwrap().re;
        errs.push(((mq - eq).powi(2) + (mp - ep).powi(2)).sqrt());
    }
    // slope over the two doublings
    ((errs[0] / errs[2]).log2() / 2.0).min((errs[0] / errs[1]).log2())
}

fn quartic_run(cfg: &SimConfig, poisson_only: bool) -> (f64, f64, f64, f64) {
    let state = quartic_coherent(0.01, 1.0, 1.0, cfg).unwrap();
    let grid = Arc::new(
        PhaseGrid::centered(state.q0, state.p0, 6.0, 6.0, 128, 128).unwrap(),
    );
    let rho0 = state.rasterize(&grid, cfg).unwrap();
    let h = PolyObservable::monomial(2, 2, 1.0);
    let t_end = 0.1;
    let mut run = EvolutionRun::new(rho0, h, 0.0, 0);
    run.spectral_cutoff = 0.35;
    run.poisson_only = poisson_only;
    let limit = crate::oracle::stability_limit(&run, cfg).unwrap();
    let steps = (t_end / (0.8 * limit)).ceil() as usize;
    run.dt = t_end / steps as f64;
    run.steps = steps;
    let snaps = evolve_wigner(&run, cfg).unwrap();
    let last = snaps.last().unwrap();
    let mq = crate::grid::grid_moment(last, 1, 0, cfg).unwrap().re;
    let mp = crate::grid::grid_moment(last, 0, 1, cfg).unwrap().re;
    let q2 = crate::grid::grid_moment(last, 2, 0, cfg).unwrap().re;
    let p2 = crate::grid::grid_moment(last, 0, 2, cfg).unwrap().re;
    (mq, mp, q2 - mq * mq, p2 - mp * mp)
}

/// Grid-evolution moments at t = 0.1 against the closed forms (worst
/// relative deviation over means and variances).
pub fn quartic_grid_deviation(cfg: &SimConfig) -> f64 {
    let state = quartic_coherent(0.01, 1.0, 1.0, cfg).unwrap();
    let (mq, mp, vq, vp) = quartic_run(cfg, false);
    let ((emq, emp), _) = quartic::first_moments(&state, 1.0, 0.1, cfg).unwrap();
    let ((evq, evp, _), _) = quartic::uncertainties(&state, 1.0, 0.1, cfg).unwrap();
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-10);
    rel(mq, emq)
        .max(rel(mp, emp))
        .max(rel(vq, evq))
        .max(rel(vp, evp))
}

/// (effect of dropping the ħ² term on the evolved moments, integration error
/// of the full evolution against the closed forms).
fn hbar2_significance(cfg: &SimConfig) -> (f64, f64) {
    let state = quartic_coherent(0.01, 1.0, 1.0, cfg).unwrap();
    let full = quartic_run(cfg, false);
    let poisson = quartic_run(cfg, true);
    let effect = (full.0 - poisson.0)
        .abs()
        .max((full.1 - poisson.1).abs())
        .max((full.2 - poisson.2).abs())
        .max((full.3 - poisson.3).abs());
    let ((emq, emp), _) = quartic::first_moments(&state, 1.0, 0.1, cfg).unwrap();
    let ((evq, evp, _), _) = quartic::uncertainties(&state, 1.0, 0.1, cfg).unwrap();
    let int_err = (full.0 - emq)
        .abs()
        .max((full.1 - emp).abs())
        .max((full.2 - evq).abs())
        .max((full.3 - evp).abs());
    (effect, int_err)
}
