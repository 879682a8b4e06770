//! Rectangular phase-space grid, sampled fields and Liouville-measure
//! integration.
//!
//! The grid is uniform and treated as periodic by the spectral operations
//! downstream, so sample points exclude the upper edge: q_j = q_min + j·Δq
//! for j = 0..n_q.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::poly::PolyObservable;
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Fraction of the domain (per side, per axis) covered by the window rolloff.
pub const WINDOW_ROLLOFF: f64 = 0.10;

/// Uniform rectangular grid over [q_min, q_max) x [p_min, p_max).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
}

impl PhaseGrid {
    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64, n_q: usize, n_p: usize) -> Result<Self> {
        if !(q_max > q_min) || !(p_max > p_min) {
            return Err(Error::Domain(format!(
                "grid bounds must be increasing: q [{q_min}, {q_max}], p [{p_min}, {p_max}]"
            )));
        }
        for (name, n) in [("n_q", n_q), ("n_p", n_p)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::Domain(format!(
                    "{name} must be an even integer >= 8, got {n}"
                )));
            }
        }
        Ok(Self {
            q_min,
            q_max,
            p_min,
            p_max,
            n_q,
            n_p,
        })
    }

    /// Square grid centered at (cq, cp) with the given half-widths.
    pub fn centered(cq: f64, cp: f64, half_q: f64, half_p: f64, n_q: usize, n_p: usize) -> Result<Self> {
        Self::new(cq - half_q, cq + half_q, cp - half_p, cp + half_p, n_q, n_p)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / self.n_q as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_p as f64
    }

    pub fn q_at(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p_at(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    /// Angular frequency associated with DFT index m along q.
    pub fn freq_q(&self, m: usize) -> f64 {
        let n = self.n_q as i64;
        let m = m as i64;
        let m = if m < n / 2 { m } else { m - n };
        2.0 * PI * m as f64 / (self.q_max - self.q_min)
    }

    /// Angular frequency associated with DFT index n along p.
    pub fn freq_p(&self, m: usize) -> f64 {
        let n = self.n_p as i64;
        let m = m as i64;
        let m = if m < n / 2 { m } else { m - n };
        2.0 * PI * m as f64 / (self.p_max - self.p_min)
    }

    /// Index range (per axis) of the flat-window interior.
    ///
    /// The interior excludes the rolloff band plus an equal safety margin,
    /// because spectral star products smear boundary artifacts inward by a
    /// distance of order ħ times the field bandwidth.
    pub fn interior_range_q(&self) -> std::ops::Range<usize> {
        interior_range(self.n_q)
    }

    pub fn interior_range_p(&self) -> std::ops::Range<usize> {
        interior_range(self.n_p)
    }

    /// Window value at node (i, j): flat interior, cosine rolloff over the
    /// outer `WINDOW_ROLLOFF` of the domain on each side.
    pub fn window_at(&self, i: usize, j: usize) -> f64 {
        self.window_at_with(i, j, WINDOW_ROLLOFF)
    }

    /// Window value with an explicit rolloff fraction. Wider rolloffs trade
    /// flat area for spectral decay; comparisons against growing flow fields
    /// need them.
    pub fn window_at_with(&self, i: usize, j: usize, rolloff: f64) -> f64 {
        axis_window_with(i, self.n_q, rolloff) * axis_window_with(j, self.n_p, rolloff)
    }
}

fn interior_range(n: usize) -> std::ops::Range<usize> {
    let margin = (n as f64 * 2.0 * WINDOW_ROLLOFF).ceil() as usize;
    margin..n - margin
}

fn axis_window_with(i: usize, n: usize, rolloff: f64) -> f64 {
    let s = i as f64 / n as f64;
    let edge = |x: f64| {
        // cosine rolloff on [0, rolloff]
        if x >= rolloff {
            1.0
        } else {
            0.5 * (1.0 - (PI * x / rolloff).cos())
        }
    };
    edge(s) * edge(1.0 - s)
}

/// C⁴ smootherstep edge S(x) = 70x⁹ − 315x⁸ + 540x⁷ − 420x⁶ + 126x⁵ and its
/// first three derivatives; S clamps to 0 below x = 0 and 1 above x = 1.
pub fn smootherstep4(x: f64, order: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let u = 1.0 - x;
    match order {
        0 => ((((70.0 * x - 315.0) * x + 540.0) * x - 420.0) * x + 126.0) * x.powi(5),
        1 => 630.0 * x.powi(4) * u.powi(4),
        2 => 2520.0 * x.powi(3) * u.powi(3) * (1.0 - 2.0 * x),
        3 => {
            2520.0
                * x.powi(2)
                * u.powi(2)
                * (3.0 * (1.0 - 2.0 * x).powi(2) - 2.0 * x * u)
        }
        _ => panic!("smootherstep4 supports derivative orders 0..=3"),
    }
}

/// Per-node window values and coordinate derivatives (orders 0..=3) along
/// one axis: flat 1 in the interior, C⁴ smootherstep edges over the rolloff
/// band at each end.
pub fn axis_window_table(min: f64, max: f64, n: usize, rolloff: f64) -> Vec<[f64; 4]> {
    let len = max - min;
    let band = rolloff * len;
    let dx = len / n as f64;
    (0..n)
        .map(|i| {
            let x = min + i as f64 * dx;
            let mut row = [0.0; 4];
            if x < min + band {
                let t = (x - min) / band;
                for (m, slot) in row.iter_mut().enumerate() {
                    *slot = smootherstep4(t, m as u32) / band.powi(m as i32);
                }
            } else if x > max - band {
                let t = (max - x) / band;
                for (m, slot) in row.iter_mut().enumerate() {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    *slot = sign * smootherstep4(t, m as u32) / band.powi(m as i32);
                }
            } else {
                row[0] = 1.0;
            }
            row
        })
        .collect()
}

/// Complex field sampled on a [`PhaseGrid`].
#[derive(Debug, Clone)]
pub struct GridField {
    grid: Arc<PhaseGrid>,
    values: Array2<Complex64>,
    /// Set when a spectral product received inputs with non-negligible
    /// boundary support; results near the boundary are then unreliable.
    pub support_warning: bool,
}

impl GridField {
    pub fn new(grid: Arc<PhaseGrid>, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (grid.n_q, grid.n_p) {
            return Err(Error::IncompatibleGrids(format!(
                "value shape {:?} does not match grid {}x{}",
                values.dim(),
                grid.n_q,
                grid.n_p
            )));
        }
        let field = Self {
            grid,
            values,
            support_warning: false,
        };
        field.check_finite()?;
        Ok(field)
    }

    pub fn zeros(grid: Arc<PhaseGrid>) -> Self {
        let values = Array2::zeros((grid.n_q, grid.n_p));
        Self {
            grid,
            values,
            support_warning: false,
        }
    }

    pub fn grid(&self) -> &Arc<PhaseGrid> {
        &self.grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    fn check_finite(&self) -> Result<()> {
        for ((i, j), v) in self.values.indexed_iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidField {
                    reason: format!("non-finite value {v}"),
                    location: Some((i, j, self.grid.q_at(i), self.grid.p_at(j))),
                });
            }
        }
        Ok(())
    }

    /// Multiply by the grid's smooth window in place.
    pub fn apply_window(&mut self) {
        self.apply_window_with(WINDOW_ROLLOFF);
    }

    /// Multiply by a window with an explicit rolloff fraction.
    pub fn apply_window_with(&mut self, rolloff: f64) {
        for ((i, j), v) in self.values.indexed_iter_mut() {
            *v *= self.grid.window_at_with(i, j, rolloff);
        }
    }

    /// Largest |f| over the outermost `cells`-wide frame.
    pub fn boundary_magnitude(&self, cells: usize) -> f64 {
        let (nq, np) = (self.grid.n_q, self.grid.n_p);
        let mut max = 0.0f64;
        for ((i, j), v) in self.values.indexed_iter() {
            if i < cells || i >= nq - cells || j < cells || j >= np - cells {
                max = max.max(v.norm());
            }
        }
        max
    }

    /// |f| summed over the outermost `cells`-wide frame, Liouville-weighted.
    pub fn boundary_mass(&self, cells: usize, cfg: &SimConfig) -> f64 {
        let (nq, np) = (self.grid.n_q, self.grid.n_p);
        let mut sum = 0.0f64;
        for ((i, j), v) in self.values.indexed_iter() {
            if i < cells || i >= nq - cells || j < cells || j >= np - cells {
                sum += v.norm();
            }
        }
        sum * self.grid.dq() * self.grid.dp() / (2.0 * PI * cfg.hbar)
    }

    /// Maximum |self - other| over the window interior.
    pub fn max_abs_diff_interior(&self, other: &Self) -> f64 {
        let rq = self.grid.interior_range_q();
        let rp = self.grid.interior_range_p();
        let mut max = 0.0f64;
        for i in rq {
            for j in rp.clone() {
                max = max.max((self.values[[i, j]] - other.values[[i, j]]).norm());
            }
        }
        max
    }

    /// Maximum |self - other| over the central region, excluding the outer
    /// `margin` fraction of each axis. Deeper regions sit further from the
    /// window rolloff, which the star product's ħ-scale nonlocality smears
    /// inward.
    pub fn max_abs_diff_central(&self, other: &Self, margin: f64) -> f64 {
        let (nq, np) = (self.grid.n_q, self.grid.n_p);
        let lo_q = (nq as f64 * margin) as usize;
        let hi_q = (nq as f64 * (1.0 - margin)) as usize;
        let lo_p = (np as f64 * margin) as usize;
        let hi_p = (np as f64 * (1.0 - margin)) as usize;
        let mut max = 0.0f64;
        for i in lo_q..hi_q {
            for j in lo_p..hi_p {
                max = max.max((self.values[[i, j]] - other.values[[i, j]]).norm());
            }
        }
        max
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.mapv(|v| v * s),
            support_warning: self.support_warning,
        }
    }

    pub fn added(&self, other: &Self) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::IncompatibleGrids("add".into()));
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: &self.values + &other.values,
            support_warning: self.support_warning || other.support_warning,
        })
    }

    pub fn subbed(&self, other: &Self) -> Result<Self> {
        self.added(&other.scaled(Complex64::new(-1.0, 0.0)))
    }
}

/// Sample a callable field at the grid nodes.
pub fn rasterize(
    f: impl Fn(f64, f64) -> Complex64,
    grid: &Arc<PhaseGrid>,
) -> Result<GridField> {
    let mut values = Array2::zeros((grid.n_q, grid.n_p));
    for i in 0..grid.n_q {
        let q = grid.q_at(i);
        for j in 0..grid.n_p {
            let p = grid.p_at(j);
            let v = f(q, p);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidField {
                    reason: format!("callable returned non-finite value {v}"),
                    location: Some((i, j, q, p)),
                });
            }
            values[[i, j]] = v;
        }
    }
    Ok(GridField {
        grid: grid.clone(),
        values,
        support_warning: false,
    })
}

/// Sample a real-valued callable.
pub fn rasterize_real(f: impl Fn(f64, f64) -> f64, grid: &Arc<PhaseGrid>) -> Result<GridField> {
    rasterize(|q, p| Complex64::new(f(q, p), 0.0), grid)
}

/// Rasterize a polynomial and multiply by the grid window.
pub fn rasterize_poly_windowed(poly: &PolyObservable, grid: &Arc<PhaseGrid>) -> Result<GridField> {
    let mut field = rasterize(|q, p| poly.eval(q, p), grid)?;
    field.apply_window();
    Ok(field)
}

/// ∫ f dl = Σ f Δq Δp / (2πħ).
///
/// On a periodic grid with decayed tails the node sum is the trapezoidal
/// rule, and spectrally accurate for smooth well-supported integrands.
pub fn integrate_liouville(f: &GridField, cfg: &SimConfig) -> Result<Complex64> {
    f.check_finite()?;
    let sum: Complex64 = f.values().iter().sum();
    Ok(sum * f.grid().dq() * f.grid().dp() / (2.0 * PI * cfg.hbar))
}

/// ∫ q^i p^j ρ dl, the raw grid moment.
pub fn grid_moment(rho: &GridField, i: u32, j: u32, cfg: &SimConfig) -> Result<Complex64> {
    let grid = rho.grid();
    let mut sum = Complex64::ZERO;
    for ((a, b), v) in rho.values().indexed_iter() {
        sum += v * grid.q_at(a).powi(i as i32) * grid.p_at(b).powi(j as i32);
    }
    Ok(sum * grid.dq() * grid.dp() / (2.0 * PI * cfg.hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid_8x8() -> Arc<PhaseGrid> {
        Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, 256, 256).unwrap())
    }

    #[test]
    fn rejects_odd_or_small_sizes() {
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 7, 8).is_err());
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 8, 9).is_err());
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 4, 8).is_err());
        assert!(PhaseGrid::new(1.0, -1.0, -1.0, 1.0, 8, 8).is_err());
    }

    #[test]
    fn rasterize_constant_is_all_ones() {
        let grid = Arc::new(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 8, 8).unwrap());
        let f = rasterize(|_, _| Complex64::new(1.0, 0.0), &grid).unwrap();
        assert!(f.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn rasterize_q_matches_node_coordinates() {
        let grid = Arc::new(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 8, 8).unwrap());
        let f = rasterize(|q, _| Complex64::new(q, 0.0), &grid).unwrap();
        for ((i, _), v) in f.values().indexed_iter() {
            assert_abs_diff_eq!(v.re, grid.q_at(i), epsilon = 1e-15);
        }
    }

    #[test]
    fn rasterize_reports_bad_node() {
        let grid = Arc::new(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 8, 8).unwrap());
        let err = rasterize(
            |q, p| {
                if q > 0.7 && p > 0.7 {
                    Complex64::new(f64::NAN, 0.0)
                } else {
                    Complex64::ZERO
                }
            },
            &grid,
        )
        .unwrap_err();
        match err {
            Error::InvalidField { location, .. } => assert!(location.is_some()),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn integrate_zero_field() {
        let cfg = SimConfig::default();
        let f = GridField::zeros(grid_8x8());
        assert_eq!(integrate_liouville(&f, &cfg).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn integrate_unit_gaussian() {
        // exp(-q^2 - p^2) integrates to pi; dl divides by 2*pi*hbar.
        let cfg = SimConfig::default();
        let f = rasterize_real(|q, p| (-q * q - p * p).exp(), &grid_8x8()).unwrap();
        let val = integrate_liouville(&f, &cfg).unwrap();
        assert_abs_diff_eq!(val.re, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(val.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn integrate_is_linear() {
        let cfg = SimConfig::default();
        let grid = grid_8x8();
        let f = rasterize_real(|q, p| (-q * q - 0.5 * p * p).exp(), &grid).unwrap();
        let g = rasterize(|q, p| Complex64::new(q, p) * (-q * q - p * p).exp(), &grid).unwrap();
        let (a, b) = (Complex64::new(1.3, -0.2), Complex64::new(-0.7, 2.1));
        let lhs =
            integrate_liouville(&f.scaled(a).added(&g.scaled(b)).unwrap(), &cfg).unwrap();
        let rhs = a * integrate_liouville(&f, &cfg).unwrap()
            + b * integrate_liouville(&g, &cfg).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn integration_converges_under_refinement() {
        let cfg = SimConfig::default();
        let exact = 0.5;
        let mut errors = Vec::new();
        for n in [64usize, 128, 256] {
            let grid = Arc::new(PhaseGrid::new(-8.0, 8.0, -8.0, 8.0, n, n).unwrap());
            let f = rasterize_real(|q, p| (-q * q - p * p).exp(), &grid).unwrap();
            let val = integrate_liouville(&f, &cfg).unwrap().re;
            errors.push((val - exact).abs());
        }
        // Spectral accuracy: already at roundoff by n = 64 for this integrand,
        // and refinement must not make it worse than trapezoidal order would.
        assert!(errors[2] <= errors[0].max(1e-12));
    }

    #[test]
    fn window_is_flat_in_interior_and_zero_at_edge() {
        let grid = grid_8x8();
        assert_eq!(grid.window_at(0, 128), 0.0);
        assert_eq!(grid.window_at(128, 128), 1.0);
        let rq = grid.interior_range_q();
        assert!(grid.window_at(rq.start, 128) == 1.0);
        assert!(grid.window_at(rq.end - 1, 128) == 1.0);
    }

    #[test]
    fn frequencies_wrap_at_nyquist() {
        let grid = grid_8x8();
        assert_abs_diff_eq!(grid.freq_q(0), 0.0);
        assert_abs_diff_eq!(grid.freq_q(1), 2.0 * PI / 16.0, epsilon = 1e-15);
        assert!(grid.freq_q(255) < 0.0);
    }
}
