use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::canonical::CanonicalPolynomial;
use super::coefficient::{integer, rational, Coefficient, GaussianRational, Rational};
use super::monomial::{Axis, Monomial};
use super::{render_terms, DEFAULT_DEGREE_BOUND};
use crate::error::{Error, Result};

/// Generators in which an [`OperatorPolynomial`] is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `x̂ᵢ, p̂ᵢ` with `[x̂ᵢ, p̂ⱼ] = iħ δᵢⱼ`, ħ kept symbolic.
    Canonical,
    /// Dimensionless `ξᵢ = x̂ᵢ √(mω₀/2ħ)`, `πᵢ = p̂ᵢ / √(2mω₀ħ)` with
    /// `[ξᵢ, πⱼ] = (i/2) δᵢⱼ`, so that `â = ξ + iπ` has rational coefficients.
    Ladder,
}

impl Basis {
    /// Value of `[qᵢ, kᵢ]` for the two generators of one axis.
    pub fn commutator_unit(self) -> Coefficient {
        match self {
            Basis::Canonical => Coefficient::i_hbar(),
            Basis::Ladder => Coefficient::constant(GaussianRational::imag(rational(1, 2))),
        }
    }

    fn symbols(self) -> (&'static str, &'static str) {
        match self {
            Basis::Canonical => ("x", "p"),
            Basis::Ladder => ("xi", "pi"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Position,
    Momentum,
}

/// One factor of an operator word. Ordered by axis, then position before
/// momentum, which is the normal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub axis: Axis,
    pub var: Variable,
}

impl Letter {
    pub fn x(axis: Axis) -> Self {
        Self { axis, var: Variable::Position }
    }

    pub fn p(axis: Axis) -> Self {
        Self { axis, var: Variable::Momentum }
    }
}

/// Choice of which adjacent out-of-order pair to rewrite next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStrategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// Element of the Weyl algebra stored in normal-ordered form.
///
/// Each key names the product `x₁^{a₁} p₁^{b₁} x₂^{a₂} p₂^{b₂} x₃^{a₃} p₃^{b₃}`; two
/// operators are equal exactly when their normal forms coincide.
#[derive(Clone, Debug)]
pub struct OperatorPolynomial {
    basis: Basis,
    terms: BTreeMap<Monomial, Coefficient>,
    degree_bound: u32,
}

impl PartialEq for OperatorPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.terms == other.terms
    }
}

impl Eq for OperatorPolynomial {}

fn binomial(n: u16, k: u16) -> Rational {
    let mut acc = integer(1);
    for j in 0..k {
        acc = acc * integer(i64::from(n - j)) / integer(i64::from(j + 1));
    }
    acc
}

fn factorial(k: u16) -> Rational {
    (1..=k).fold(integer(1), |acc, j| acc * integer(i64::from(j)))
}

impl OperatorPolynomial {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, terms: BTreeMap::new(), degree_bound: DEFAULT_DEGREE_BOUND }
    }

    pub fn constant(basis: Basis, c: Coefficient) -> Self {
        Self::term(basis, c, Monomial::one())
    }

    pub fn identity(basis: Basis) -> Self {
        Self::constant(basis, Coefficient::one())
    }

    /// `c` times the normal-ordered word named by `m`.
    pub fn term(basis: Basis, c: Coefficient, m: Monomial) -> Self {
        let mut out = Self::zero(basis);
        out.degree_bound = out.degree_bound.max(m.degree());
        out.add_term(m, &c);
        out
    }

    /// Position generator of `axis` (`x̂ᵢ` or `ξᵢ` depending on basis).
    pub fn x(basis: Basis, axis: Axis) -> Self {
        Self::term(basis, Coefficient::one(), Monomial::x(axis))
    }

    /// Momentum generator of `axis` (`p̂ᵢ` or `πᵢ` depending on basis).
    pub fn p(basis: Basis, axis: Axis) -> Self {
        Self::term(basis, Coefficient::one(), Monomial::p(axis))
    }

    pub fn with_degree_bound(mut self, bound: u32) -> Result<Self> {
        if self.degree() > bound {
            return Err(Error::Capacity(format!(
                "operator of degree {} exceeds bound {bound}",
                self.degree()
            )));
        }
        self.degree_bound = bound;
        Ok(self)
    }

    pub fn basis(&self) -> Basis {
        self.basis
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
        let mut out = Self { basis: self.basis, terms: BTreeMap::new(), degree_bound: self.degree_bound };
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Input(format!(
                "operators written in different bases ({:?} and {:?})",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    /// `(x^a p^b)(x^c p^d)` on one axis, using
    /// `p^b x^c = Σ_k k! C(b,k) C(c,k) (−u)^k x^{c−k} p^{b−k}` with `u = [x, p]`.
    fn axis_product(&self, lhs: (u16, u16), rhs: (u16, u16)) -> Vec<((u16, u16), Coefficient)> {
        let (a, b) = lhs;
        let (c, d) = rhs;
        let neg_unit = -self.basis.commutator_unit();
        (0..=b.min(c))
            .map(|k| {
                let weight = factorial(k) * binomial(b, k) * binomial(c, k);
                let coeff = &Coefficient::from_rational(weight) * &neg_unit.pow(u32::from(k));
                ((a + c - k, b + d - k), coeff)
            })
            .collect()
    }

    /// Product of two normal-ordered words, as a normal-ordered polynomial.
    fn monomial_product(&self, lhs: &Monomial, rhs: &Monomial) -> Vec<(Monomial, Coefficient)> {
        let mut acc = vec![(Monomial::one(), Coefficient::one())];
        for axis in Axis::ALL {
            let parts = self.axis_product(lhs.exponents(axis), rhs.exponents(axis));
            let mut next = Vec::with_capacity(acc.len() * parts.len());
            for (m, c) in &acc {
                for ((x, p), pc) in &parts {
                    let mut nm = *m;
                    nm.set_exponents(axis, *x, *p);
                    next.push((nm, c * pc));
                }
            }
            acc = next;
        }
        acc
    }

    /// Operator product reduced to normal form.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let bound = self.degree_bound.min(other.degree_bound);
        let mut out = Self { basis: self.basis, terms: BTreeMap::new(), degree_bound: bound };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > bound {
                    return Err(Error::Capacity(format!(
                        "product degree {} exceeds bound {bound}",
                        ma.degree() + mb.degree()
                    )));
                }
                let c = ca * cb;
                for (m, pc) in self.monomial_product(ma, mb) {
                    out.add_term(m, &(&c * &pc));
                }
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.basis);
        acc.degree_bound = self.degree_bound;
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Hermitian adjoint. The generators are self-adjoint, so the adjoint of a
    /// normal-ordered word is its reversal, which is then re-ordered.
    pub fn adjoint(&self) -> Self {
        let mut out = Self { basis: self.basis, terms: BTreeMap::new(), degree_bound: self.degree_bound };
        for (m, c) in &self.terms {
            let mut word = word_of(m);
            word.reverse();
            let reordered = normal_order_with(&word, self.basis, ReductionStrategy::Leftmost);
            out = &out + &reordered.scale(&c.conj());
        }
        out
    }
}

/// `[A, B] = AB − BA` in normal form.
pub fn commutator(a: &OperatorPolynomial, b: &OperatorPolynomial) -> Result<OperatorPolynomial> {
    Ok(&a.try_mul(b)? - &b.try_mul(a)?)
}

/// The normal-ordered word of a monomial, as a letter sequence.
pub fn word_of(m: &Monomial) -> Vec<Letter> {
    let mut word = Vec::with_capacity(m.degree() as usize);
    for axis in Axis::ALL {
        let (a, b) = m.exponents(axis);
        word.extend(std::iter::repeat(Letter::x(axis)).take(a as usize));
        word.extend(std::iter::repeat(Letter::p(axis)).take(b as usize));
    }
    word
}

/// Normal-orders a word in the canonical basis.
pub fn normal_order(word: &[Letter]) -> OperatorPolynomial {
    normal_order_with(word, Basis::Canonical, ReductionStrategy::Leftmost)
}

/// Normal-orders a word by repeatedly rewriting one adjacent out-of-order
/// pair, chosen by `strategy`: letters of different axes commute, and
/// `kᵢ qᵢ → qᵢ kᵢ − [qᵢ, kᵢ]`.
pub fn normal_order_with(word: &[Letter], basis: Basis, strategy: ReductionStrategy) -> OperatorPolynomial {
    let unit = basis.commutator_unit();
    let mut rng = match strategy {
        ReductionStrategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut out = OperatorPolynomial::zero(basis);
    out.degree_bound = out.degree_bound.max(word.len() as u32);
    let mut pending: Vec<(Coefficient, Vec<Letter>)> = vec![(Coefficient::one(), word.to_vec())];
    while let Some((c, w)) = pending.pop() {
        let inversions: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect();
        let pick = match strategy {
            ReductionStrategy::Leftmost => inversions.first().copied(),
            ReductionStrategy::Rightmost => inversions.last().copied(),
            ReductionStrategy::Random(_) => {
                if inversions.is_empty() {
                    None
                } else {
                    let r = rng.as_mut().unwrap().random_range(0..inversions.len());
                    Some(inversions[r])
                }
            }
        };
        let Some(i) = pick else {
            let mut m = Monomial::one();
            for letter in &w {
                let (a, b) = m.exponents(letter.axis);
                match letter.var {
                    Variable::Position => m.set_exponents(letter.axis, a + 1, b),
                    Variable::Momentum => m.set_exponents(letter.axis, a, b + 1),
                }
            }
            out.add_term(m, &c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        if w[i].axis == w[i + 1].axis {
            let mut contracted = w.clone();
            contracted.drain(i..i + 2);
            pending.push((-(&c * &unit), contracted));
        }
        pending.push((c, swapped));
    }
    out
}

/// Product of the letters of `word` taken in order, built by successive
/// multiplication rather than rewriting.
pub fn word_product(word: &[Letter], basis: Basis) -> Result<OperatorPolynomial> {
    let mut acc = OperatorPolynomial::identity(basis);
    acc.degree_bound = acc.degree_bound.max(word.len() as u32);
    for letter in word {
        let mut g = match letter.var {
            Variable::Position => OperatorPolynomial::x(basis, letter.axis),
            Variable::Momentum => OperatorPolynomial::p(basis, letter.axis),
        };
        g.degree_bound = acc.degree_bound;
        acc = acc.try_mul(&g)?;
    }
    Ok(acc)
}

/// Weyl (fully symmetric) ordering of a classical polynomial.
///
/// Per axis the symmetrized `x^a p^b` has the closed normal form
/// `Σ_k k! C(a,k) C(b,k) (−iħ/2)^k x^{a−k} p^{b−k}`; distinct axes commute.
pub fn weyl_symmetrize(f: &CanonicalPolynomial) -> Result<OperatorPolynomial> {
    let basis = Basis::Canonical;
    if f.degree() > f.degree_bound() {
        return Err(Error::Capacity(format!(
            "polynomial degree {} exceeds bound {}",
            f.degree(),
            f.degree_bound()
        )));
    }
    let half_unit = &basis.commutator_unit() * &Coefficient::from_rational(rational(-1, 2));
    let mut out = OperatorPolynomial::zero(basis);
    out.degree_bound = f.degree_bound();
    for (m, c) in f.terms() {
        let mut acc = vec![(Monomial::one(), c.clone())];
        for axis in Axis::ALL {
            let (a, b) = m.exponents(axis);
            let mut next = Vec::new();
            for (k, weight) in (0..=a.min(b)).map(|k| (k, factorial(k) * binomial(a, k) * binomial(b, k))) {
                let kc = &Coefficient::from_rational(weight) * &half_unit.pow(u32::from(k));
                for (am, ac) in &acc {
                    let mut nm = *am;
                    nm.set_exponents(axis, a - k, b - k);
                    next.push((nm, ac * &kc));
                }
            }
            acc = next;
        }
        for (nm, nc) in acc {
            out.add_term(nm, &nc);
        }
    }
    Ok(out)
}

/// Exact mass and frequency used to convert between bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactUnits {
    pub mass: Rational,
    pub omega: Rational,
}

impl ExactUnits {
    pub fn natural() -> Self {
        Self { mass: integer(1), omega: integer(1) }
    }

    pub fn new(mass: Rational, omega: Rational) -> Result<Self> {
        use num::traits::Signed;
        if !mass.is_positive() || !omega.is_positive() {
            return Err(Error::Domain("mass and frequency must be positive".into()));
        }
        Ok(Self { mass, omega })
    }

    /// Exact binary values of floating-point parameters.
    pub fn from_params(params: &crate::model::OscillatorParams) -> Result<Self> {
        let conv = |v: f64, name: &str| {
            Rational::from_float(v).ok_or_else(|| Error::Domain(format!("{name} is not finite")))
        };
        Self::new(conv(params.mass, "mass")?, conv(params.omega0, "omega0")?)
    }
}

fn rational_pow(r: &Rational, e: i32) -> Rational {
    use num::traits::Inv;
    let mut acc = integer(1);
    for _ in 0..e.unsigned_abs() {
        acc *= r;
    }
    if e < 0 {
        acc.inv()
    } else {
        acc
    }
}

/// Rewrites a canonical-basis operator in the ladder basis by substituting
/// `x̂ = √(2ħ/mω₀) ξ` and `p̂ = √(2mω₀ħ) π`. Every monomial must have even
/// total degree so the square roots cancel.
pub fn to_ladder_basis(op: &OperatorPolynomial, units: &ExactUnits) -> Result<OperatorPolynomial> {
    if op.basis != Basis::Canonical {
        return Err(Error::Input("operator is not in the canonical basis".into()));
    }
    let mw = &units.mass * &units.omega;
    let mut out = OperatorPolynomial::zero(Basis::Ladder);
    out.degree_bound = op.degree_bound;
    for (m, c) in op.terms() {
        let (a, b) = (m.x_degree() as i32, m.p_degree() as i32);
        if (a + b) % 2 != 0 {
            return Err(Error::Domain(format!(
                "monomial {m} has odd degree; its ladder-basis form needs a square root of hbar"
            )));
        }
        let half = (a + b) / 2;
        let scalar = rational_pow(&integer(2), half) * rational_pow(&mw, (b - a) / 2);
        let factor = Coefficient::monomial(GaussianRational::real(scalar), half as u32);
        out.add_term(*m, &(c * &factor));
    }
    Ok(out)
}

impl Add for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    /// Panics if the operands are written in different bases.
    fn add(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        if let Err(e) = self.check_basis(rhs) {
            panic!("{e}");
        }
        let mut out = self.clone();
        out.degree_bound = self.degree_bound.max(rhs.degree_bound);
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Add for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(self, rhs: OperatorPolynomial) -> OperatorPolynomial {
        &self + &rhs
    }
}

impl Neg for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn neg(self) -> OperatorPolynomial {
        self.scale(&Coefficient::from_integer(-1))
    }
}

impl Neg for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn neg(self) -> OperatorPolynomial {
        -&self
    }
}

impl Sub for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn sub(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        self + &(-rhs)
    }
}

impl Sub for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn sub(self, rhs: OperatorPolynomial) -> OperatorPolynomial {
        &self - &rhs
    }
}

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (xs, ps) = self.basis.symbols();
        f.write_str(&render_terms(self.terms.iter(), xs, ps))
    }
}
