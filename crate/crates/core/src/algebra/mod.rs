//! Exact polynomial algebra in the canonical variables.
//!
//! [`CanonicalPolynomial`] holds commuting phase-space polynomials with the
//! Poisson bracket. [`OperatorPolynomial`] holds elements of the Weyl algebra
//! in normal-ordered form, with products and commutators reduced exactly.
//! Coefficients are Gaussian rationals times powers of a symbolic ħ.

mod builders;
mod canonical;
mod coefficient;
mod identities;
mod monomial;
mod operator;
mod wick;

pub use builders::{classical, quantum, LadderKind};
pub use canonical::{poisson_bracket, CanonicalPolynomial};
pub use coefficient::{integer, rational, Coefficient, GaussianRational, Rational};
pub use identities::{identity_suite, IdentityCheck};
pub use monomial::{Axis, Monomial};
pub use operator::{
    commutator, normal_order, normal_order_with, to_ladder_basis, weyl_symmetrize, word_of, word_product, Basis,
    ExactUnits, Letter, OperatorPolynomial, ReductionStrategy, Variable,
};
pub use wick::{gaussian_expectation_classical, gaussian_expectation_quantum, TwoPoint, MAX_WICK_DEGREE};

/// Default maximum total degree of a stored monomial.
pub const DEFAULT_DEGREE_BOUND: u32 = 16;

pub(crate) fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a Coefficient)>,
    x_sym: &str,
    p_sym: &str,
) -> String {
    let mut out = String::new();
    for (idx, (m, c)) in terms.enumerate() {
        let (negative, mag) = c.sign_split();
        let body = if m.is_one() {
            mag.to_string()
        } else if mag.is_one() {
            m.render(x_sym, p_sym)
        } else {
            format!("{}*{}", mag.factor_string(), m.render(x_sym, p_sym))
        };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
