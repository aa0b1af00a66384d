use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial axis of a canonical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 1-based label used in rendered polynomials.
    pub fn label(self) -> usize {
        self.index() + 1
    }

    /// The two axes following this one cyclically, `(j, k)` with `ε_ijk = 1`.
    pub fn cyclic_successors(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    /// Levi-Civita completion: for `i ≠ j` returns `(k, ε_ijk)`.
    pub fn levi_civita(i: Axis, j: Axis) -> Option<(Axis, i64)> {
        if i == j {
            return None;
        }
        let k = Axis::ALL.into_iter().find(|a| *a != i && *a != j).unwrap();
        let (next, _) = i.cyclic_successors();
        Some((k, if next == j { 1 } else { -1 }))
    }
}

impl TryFrom<usize> for Axis {
    type Error = Error;

    /// 1-based, matching the rendered labels.
    fn try_from(value: usize) -> Result<Self> {
        match value {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            other => Err(Error::Input(format!("axis must be 1, 2 or 3, got {other}"))),
        }
    }
}

/// Exponent vector `∏ᵢ xᵢ^{aᵢ} pᵢ^{bᵢ}` over the three axes.
///
/// For commuting variables this is an ordinary monomial. For operators it
/// names the normal-ordered word `x₁^{a₁} p₁^{b₁} x₂^{a₂} p₂^{b₂} x₃^{a₃} p₃^{b₃}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [(u16, u16); 3],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(exps: [(u16, u16); 3]) -> Self {
        Self { exps }
    }

    pub fn x(axis: Axis) -> Self {
        let mut m = Self::one();
        m.exps[axis.index()].0 = 1;
        m
    }

    pub fn p(axis: Axis) -> Self {
        let mut m = Self::one();
        m.exps[axis.index()].1 = 1;
        m
    }

    /// `(x exponent, p exponent)` on `axis`.
    pub fn exponents(&self, axis: Axis) -> (u16, u16) {
        self.exps[axis.index()]
    }

    pub fn set_exponents(&mut self, axis: Axis, x: u16, p: u16) {
        self.exps[axis.index()] = (x, p);
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(a, b)| u32::from(*a) + u32::from(*b)).sum()
    }

    pub fn x_degree(&self) -> u32 {
        self.exps.iter().map(|(a, _)| u32::from(*a)).sum()
    }

    pub fn p_degree(&self) -> u32 {
        self.exps.iter().map(|(_, b)| u32::from(*b)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    /// Product of commuting monomials.
    pub fn mul_commuting(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, r) in out.exps.iter_mut().zip(other.exps.iter()) {
            o.0 += r.0;
            o.1 += r.1;
        }
        out
    }

    fn flat(&self) -> [u16; 6] {
        let e = &self.exps;
        [e[0].0, e[0].1, e[1].0, e[1].1, e[2].0, e[2].1]
    }

    /// Renders with the given position and momentum symbols, e.g. `x1^2*p2`.
    pub fn render(&self, x_sym: &str, p_sym: &str) -> String {
        let mut factors = Vec::new();
        for axis in Axis::ALL {
            let (a, b) = self.exponents(axis);
            for (sym, e) in [(x_sym, a), (p_sym, b)] {
                match e {
                    0 => {}
                    1 => factors.push(format!("{sym}{}", axis.label())),
                    e => factors.push(format!("{sym}{}^{e}", axis.label())),
                }
            }
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

/// Higher total degree first, then exponent vectors in decreasing
/// lexicographic order `(x1, p1, x2, p2, x3, p3)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.flat().cmp(&self.flat()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x", "p"))
    }
}
