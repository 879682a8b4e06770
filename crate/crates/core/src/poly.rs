//! Complex-coefficient polynomials in the phase-space variables (q, p).
//!
//! These are the exact star-algebra elements: observables, Hamiltonians and
//! test functions whose Moyal products terminate as finite series.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial Σ c_ij q^i p^j with complex coefficients.
///
/// Stored in canonical form: no zero coefficients, ordered monomials
/// (deterministic iteration order matters for reproducible output).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyObservable {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl PolyObservable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The coordinate observable q.
    pub fn q() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    /// The coordinate observable p.
    pub fn p() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    /// c · q^i p^j.
    pub fn monomial(i: u32, j: u32, c: impl Into<Complex64>) -> Self {
        let mut terms = BTreeMap::new();
        let c = c.into();
        if c != Complex64::ZERO {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Complex64)>) -> Self {
        let mut poly = Self::zero();
        for ((i, j), c) in it {
            poly.add_term(i, j, c);
        }
        poly
    }

    /// Coefficient of q^i p^j (zero if absent).
    pub fn coeff(&self, i: u32, j: u32) -> Complex64 {
        self.terms.get(&(i, j)).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree i + j, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    fn add_term(&mut self, i: u32, j: u32, c: Complex64) {
        if c == Complex64::ZERO {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(Complex64::ZERO);
        *entry += c;
        if *entry == Complex64::ZERO {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), c) in other.terms() {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in other.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    /// ∂_q^a ∂_p^b of the polynomial, exact.
    pub fn derivative(&self, a: u32, b: u32) -> Self {
        let mut out = Self::zero();
        for ((i, j), c) in self.terms() {
            if i < a || j < b {
                continue;
            }
            let fall = falling_factorial(i, a) * falling_factorial(j, b);
            out.add_term(i - a, j - b, c * fall);
        }
        out
    }

    /// Complex conjugate (the monomial basis is real).
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c.conj())))
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for ((i, j), c) in self.terms() {
            acc += c * q.powi(i as i32) * p.powi(j as i32);
        }
        acc
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise maximum |self - other|.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        keys.iter()
            .map(|&(i, j)| (self.coeff(i, j) - other.coeff(i, j)).norm())
            .fold(0.0, f64::max)
    }
}

fn falling_factorial(n: u32, k: u32) -> f64 {
    (n - k + 1..=n).map(|m| m as f64).product()
}

impl fmt::Display for PolyObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, " q^{i}")?;
            }
            if j > 0 {
                write!(f, " p^{j}")?;
            }
        }
        Ok(())
    }
}
