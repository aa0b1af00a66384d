//! Expectation values of polynomials in the thermal Gaussian state.

use num::complex::Complex64;

use super::canonical::CanonicalPolynomial;
use super::monomial::{Axis, Monomial};
use super::operator::{Basis, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::model::{OscillatorParams, ThermalState};
use crate::oracles::{classical_variance_p, classical_variance_x};

/// Longest word evaluated by the Wick expansion.
pub const MAX_WICK_DEGREE: u32 = 20;

/// Ordered two-point functions of one axis: `⟨qq⟩`, `⟨kk⟩`, `⟨qk⟩`
/// (and `⟨kq⟩ = conj⟨qk⟩`).
#[derive(Debug, Clone, Copy)]
pub struct TwoPoint {
    pub qq: f64,
    pub kk: f64,
    pub qk: Complex64,
}

impl TwoPoint {
    pub fn classical(params: &OscillatorParams, state: &ThermalState) -> Self {
        Self {
            qq: classical_variance_x(params, state),
            kk: classical_variance_p(params, state),
            qk: Complex64::new(0.0, 0.0),
        }
    }

    pub fn quantum(basis: Basis, params: &OscillatorParams, state: &ThermalState) -> Self {
        let vx = classical_variance_x(params, state);
        let vp = classical_variance_p(params, state);
        match basis {
            Basis::Canonical => Self { qq: vx, kk: vp, qk: Complex64::new(0.0, params.hbar / 2.0) },
            Basis::Ladder => {
                let mw = params.mass * params.omega0;
                Self {
                    qq: vx * mw / (2.0 * params.hbar),
                    kk: vp / (2.0 * mw * params.hbar),
                    qk: Complex64::new(0.0, 0.25),
                }
            }
        }
    }

    /// `⟨q^a k^b⟩` on one axis: choose `j` cross pairs `(q, k)` (always in
    /// that order inside a normal-ordered word), pair the rest within kind.
    pub fn axis_moment(&self, a: u16, b: u16) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..=a.min(b) {
            let (ra, rb) = (a - j, b - j);
            if ra % 2 != 0 || rb % 2 != 0 {
                continue;
            }
            if j > 0 && self.qk == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ways = binom(a, j) * binom(b, j) * fact(j);
            let rest = double_factorial_odd(ra) * self.qq.powi(i32::from(ra / 2))
                * double_factorial_odd(rb)
                * self.kk.powi(i32::from(rb / 2));
            total += self.qk.powi(i32::from(j)) * (ways * rest);
        }
        total
    }
}

fn binom(n: u16, k: u16) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

fn fact(k: u16) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * f64::from(j))
}

/// `(n − 1)!!` for even `n`, the number of perfect pairings of `n` items.
fn double_factorial_odd(n: u16) -> f64 {
    let mut acc = 1.0;
    let mut k = n.saturating_sub(1);
    while k > 1 {
        acc *= f64::from(k);
        k -= 2;
    }
    acc
}

fn monomial_value(m: &Monomial, tp: &TwoPoint) -> Result<Complex64> {
    if m.degree() > MAX_WICK_DEGREE {
        return Err(Error::Capacity(format!(
            "word of length {} exceeds the Wick limit {MAX_WICK_DEGREE}",
            m.degree()
        )));
    }
    let mut v = Complex64::new(1.0, 0.0);
    for axis in Axis::ALL {
        let (a, b) = m.exponents(axis);
        v *= tp.axis_moment(a, b);
    }
    Ok(v)
}

/// `⟨A⟩` in the thermal Gaussian state of the quantum oscillator.
pub fn gaussian_expectation_quantum(
    a: &OperatorPolynomial,
    params: &OscillatorParams,
    state: &ThermalState,
) -> Result<Complex64> {
    let tp = TwoPoint::quantum(a.basis(), params, state);
    let mut total = Complex64::new(0.0, 0.0);
    for (m, c) in a.terms() {
        total += c.evaluate(params.hbar) * monomial_value(m, &tp)?;
    }
    Ok(total)
}

/// `⟨f⟩` over the classical Gaussian phase-space density. Fails on complex
/// coefficients.
pub fn gaussian_expectation_classical(
    f: &CanonicalPolynomial,
    params: &OscillatorParams,
    state: &ThermalState,
) -> Result<f64> {
    let tp = TwoPoint::classical(params, state);
    let mut total = 0.0;
    for (m, c) in f.terms() {
        if !c.is_real() {
            return Err(Error::Domain(format!("coefficient {c} of {m} is not real")));
        }
        total += c.evaluate(params.hbar).re * monomial_value(m, &tp)?.re;
    }
    Ok(total)
}
