//! Exact coefficients: polynomials in ħ whose coefficients are Gaussian
//! rationals `a + b i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn imag(im: Rational) -> Self {
        Self { re: Rational::zero(), im }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::imag(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `(self)^k`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the value is a negative real or a negative multiple of `i`,
    /// used to render a leading minus sign.
    fn is_negative_axis(&self) -> bool {
        (self.im.is_zero() && self.re.is_negative()) || (self.re.is_zero() && self.im.is_negative())
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::one();
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im == one {
                    f.write_str("i")
                } else if self.im == -one {
                    f.write_str("-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    f.write_str("*i")
                }
            }
            (false, false) => {
                f.write_str("(")?;
                fmt_rational(&self.re, f)?;
                let mag = self.im.abs();
                f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
                if mag != one {
                    fmt_rational(&mag, f)?;
                    f.write_str("*")?;
                }
                f.write_str("i)")
            }
        }
    }
}

/// `Σ_k c_k ħ^k` with Gaussian-rational `c_k`. Zero is the empty sum; no zero
/// `c_k` is ever stored, so structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coefficient {
    terms: BTreeMap<u32, GaussianRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn hbar() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    /// `i ħ`, the value of the canonical commutator.
    pub fn i_hbar() -> Self {
        Self::monomial(GaussianRational::i(), 1)
    }

    pub fn constant(value: GaussianRational) -> Self {
        Self::monomial(value, 0)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(GaussianRational::real(integer(n)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    /// `value · ħ^power`.
    pub fn monomial(value: GaussianRational, power: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(power, value);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&GaussianRational::one())
    }

    /// True when every `c_k` has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// `(power, c_k)` pairs in increasing power of ħ.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &GaussianRational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// Numerical value at a given ħ.
    pub fn evaluate(&self, hbar: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, v)| v.to_complex() * hbar.powi(*k as i32))
            .sum()
    }

    fn add_term(&mut self, power: u32, value: &GaussianRational) {
        let entry = self.terms.entry(power).or_insert_with(GaussianRational::zero);
        *entry = &*entry + value;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    /// Split into a sign and a magnitude for rendering: a single-term value
    /// on the negative real or imaginary axis renders as `- |c|`.
    pub(crate) fn sign_split(&self) -> (bool, Coefficient) {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if v.is_negative_axis() {
                return (true, Coefficient::monomial(-v, *k));
            }
        }
        (false, self.clone())
    }

    /// Renders like [`fmt::Display`] but wraps multi-term sums in parentheses
    /// so the result can be used as a product factor.
    pub(crate) fn factor_string(&self) -> String {
        if self.terms.len() > 1 {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

impl From<GaussianRational> for Coefficient {
    fn from(value: GaussianRational) -> Self {
        Self::constant(value)
    }
}

impl From<Rational> for Coefficient {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, v);
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(mut self, rhs: Coefficient) -> Coefficient {
        self += &rhs;
        self
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        &self - &rhs
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(ka + kb, &(va * vb));
            }
        }
        out
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        &self * &rhs
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, v)) in self.terms.iter().enumerate() {
            let negative = v.is_negative_axis();
            let mag = if negative { -v } else { v.clone() };
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let hbar = match k {
                0 => String::new(),
                1 => "hbar".to_string(),
                k => format!("hbar^{k}"),
            };
            if *k == 0 {
                write!(f, "{mag}")?;
            } else if mag == GaussianRational::one() {
                f.write_str(&hbar)?;
            } else {
                write!(f, "{mag}*{hbar}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact_and_canonical() {
        let half = Coefficient::from_rational(rational(1, 2));
        let sum = &half + &half;
        assert!(sum.is_one());
        assert!((&half - &half).is_zero());
        assert_eq!(Coefficient::from_rational(rational(2, 4)), half);
        let ih = Coefficient::i_hbar();
        // (iħ)² = −ħ²
        let sq = &ih * &ih;
        assert_eq!(sq, -Coefficient::hbar().pow(2));
        assert_eq!(sq.to_string(), "-hbar^2");
        assert_eq!(ih.to_string(), "i*hbar");
        assert_eq!((-&ih).to_string(), "-i*hbar");
    }

    #[test]
    fn rendering() {
        let c = Coefficient::constant(GaussianRational::new(rational(3, 2), rational(-1, 1)));
        assert_eq!(c.to_string(), "(3/2-i)");
        let mixed = &Coefficient::from_integer(2) + &Coefficient::monomial(GaussianRational::imag(rational(-1, 2)), 1);
        assert_eq!(mixed.to_string(), "2 - 1/2*i*hbar");
        assert_eq!(mixed.factor_string(), "(2 - 1/2*i*hbar)");
        assert_eq!(Coefficient::zero().to_string(), "0");
    }

    #[test]
    fn evaluation() {
        let c = &Coefficient::from_integer(3) + &Coefficient::monomial(GaussianRational::i(), 2);
        let v = c.evaluate(2.0);
        assert_eq!(v, Complex64::new(3.0, 4.0));
    }
}
