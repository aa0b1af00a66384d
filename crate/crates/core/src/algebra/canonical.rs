use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::coefficient::{integer, Coefficient};
use super::monomial::{Axis, Monomial};
use super::{render_terms, DEFAULT_DEGREE_BOUND};
use crate::error::{Error, Result};

/// Polynomial in the commuting phase-space variables `x₁..x₃, p₁..p₃`.
///
/// Equality compares terms only; the degree bound is a capacity setting.
#[derive(Clone, Debug)]
pub struct CanonicalPolynomial {
    terms: BTreeMap<Monomial, Coefficient>,
    degree_bound: u32,
}

impl PartialEq for CanonicalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for CanonicalPolynomial {}

impl Default for CanonicalPolynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl CanonicalPolynomial {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), degree_bound: DEFAULT_DEGREE_BOUND }
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Self::constant(Coefficient::one())
    }

    /// `c · m`. Panics if `m` already exceeds the default degree bound.
    pub fn term(c: Coefficient, m: Monomial) -> Self {
        let mut out = Self::zero();
        assert!(m.degree() <= out.degree_bound, "monomial degree exceeds the default bound");
        out.add_term(m, &c);
        out
    }

    pub fn x(axis: Axis) -> Self {
        Self::term(Coefficient::one(), Monomial::x(axis))
    }

    pub fn p(axis: Axis) -> Self {
        Self::term(Coefficient::one(), Monomial::p(axis))
    }

    pub fn with_degree_bound(mut self, bound: u32) -> Result<Self> {
        if self.degree() > bound {
            return Err(Error::Capacity(format!(
                "polynomial of degree {} exceeds bound {bound}",
                self.degree()
            )));
        }
        self.degree_bound = bound;
        Ok(self)
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self { terms: BTreeMap::new(), degree_bound: self.degree_bound };
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    fn empty_like(&self, other: &Self) -> Self {
        Self {
            terms: BTreeMap::new(),
            degree_bound: self.degree_bound.min(other.degree_bound),
        }
    }

    /// Product; fails when a resulting monomial exceeds the degree bound.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut out = self.empty_like(other);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul_commuting(mb);
                if m.degree() > out.degree_bound {
                    return Err(Error::Capacity(format!(
                        "product degree {} exceeds bound {}",
                        m.degree(),
                        out.degree_bound
                    )));
                }
                out.add_term(m, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one();
        acc.degree_bound = self.degree_bound;
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `∂/∂xᵢ`.
    pub fn d_dx(&self, axis: Axis) -> Self {
        self.derivative(axis, true)
    }

    /// `∂/∂pᵢ`.
    pub fn d_dp(&self, axis: Axis) -> Self {
        self.derivative(axis, false)
    }

    fn derivative(&self, axis: Axis, wrt_x: bool) -> Self {
        let mut out = Self { terms: BTreeMap::new(), degree_bound: self.degree_bound };
        for (m, c) in &self.terms {
            let (a, b) = m.exponents(axis);
            let e = if wrt_x { a } else { b };
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            if wrt_x {
                dm.set_exponents(axis, a - 1, b);
            } else {
                dm.set_exponents(axis, a, b - 1);
            }
            out.add_term(dm, &(c * &Coefficient::from_rational(integer(i64::from(e)))));
        }
        out
    }

    /// Numerical value at a phase-space point, evaluating symbolic ħ at `hbar`.
    /// Fails if any coefficient has an imaginary part.
    pub fn evaluate(&self, x: &[f64; 3], p: &[f64; 3], hbar: f64) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            if !c.is_real() {
                return Err(Error::Domain(format!("coefficient {c} is not real")));
            }
            let mut v = c.evaluate(hbar).re;
            for axis in Axis::ALL {
                let (a, b) = m.exponents(axis);
                v *= x[axis.index()].powi(i32::from(a)) * p[axis.index()].powi(i32::from(b));
            }
            total += v;
        }
        Ok(total)
    }
}

/// `{f, g} = Σᵢ (∂f/∂xᵢ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂xᵢ)`.
pub fn poisson_bracket(f: &CanonicalPolynomial, g: &CanonicalPolynomial) -> Result<CanonicalPolynomial> {
    let mut out = f.empty_like(g);
    for axis in Axis::ALL {
        let lhs = f.d_dx(axis).try_mul(&g.d_dp(axis))?;
        let rhs = f.d_dp(axis).try_mul(&g.d_dx(axis))?;
        out = &(&out + &lhs) - &rhs;
    }
    Ok(out)
}

impl Add for &CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn add(self, rhs: &CanonicalPolynomial) -> CanonicalPolynomial {
        let mut out = self.clone();
        out.degree_bound = self.degree_bound.min(rhs.degree_bound).max(out.degree().max(rhs.degree()));
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Add for CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn add(self, rhs: CanonicalPolynomial) -> CanonicalPolynomial {
        &self + &rhs
    }
}

impl Neg for &CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn neg(self) -> CanonicalPolynomial {
        self.scale(&Coefficient::from_integer(-1))
    }
}

impl Neg for CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn neg(self) -> CanonicalPolynomial {
        -&self
    }
}

impl Sub for &CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn sub(self, rhs: &CanonicalPolynomial) -> CanonicalPolynomial {
        self + &(-rhs)
    }
}

impl Sub for CanonicalPolynomial {
    type Output = CanonicalPolynomial;
    fn sub(self, rhs: CanonicalPolynomial) -> CanonicalPolynomial {
        &self - &rhs
    }
}

impl fmt::Display for CanonicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter(), "x", "p"))
    }
}
