//! Named observables in both algebras.

/// Position/momentum ladder direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    /// `â`
    Lowering,
    /// `â⁺`
    Raising,
}

fn check_dims(dims: usize) {
    assert!((1..=3).contains(&dims), "dims must be 1, 2 or 3, got {dims}");
}

pub mod classical {
    use super::check_dims;
    use crate::algebra::coefficient::{integer, Coefficient};
    use crate::algebra::operator::ExactUnits;
    use crate::algebra::{Axis, CanonicalPolynomial};

    pub fn position(axis: Axis) -> CanonicalPolynomial {
        CanonicalPolynomial::x(axis)
    }

    pub fn momentum(axis: Axis) -> CanonicalPolynomial {
        CanonicalPolynomial::p(axis)
    }

    /// `Lᵢ = xⱼ pₖ − xₖ pⱼ` with `(i, j, k)` cyclic.
    pub fn angular_momentum(axis: Axis) -> CanonicalPolynomial {
        let (j, k) = axis.cyclic_successors();
        let a = position(j).try_mul(&momentum(k)).expect("degree 2");
        let b = position(k).try_mul(&momentum(j)).expect("degree 2");
        &a - &b
    }

    pub fn angular_momentum_squared() -> CanonicalPolynomial {
        Axis::ALL.into_iter().fold(CanonicalPolynomial::zero(), |acc, axis| {
            let l = angular_momentum(axis);
            &acc + &l.try_mul(&l).expect("degree 4")
        })
    }

    /// `Σᵢ pᵢ²/2m + mω₀² xᵢ²/2` over the first `dims` axes.
    ///
    /// Panics unless `dims` is 1, 2 or 3.
    pub fn hamiltonian(dims: usize, units: &ExactUnits) -> CanonicalPolynomial {
        check_dims(dims);
        let kinetic = Coefficient::from_rational(num::traits::Inv::inv(&units.mass * integer(2)));
        let potential = Coefficient::from_rational(&units.mass * &units.omega * &units.omega / integer(2));
        Axis::ALL[..dims].iter().fold(CanonicalPolynomial::zero(), |acc, &axis| {
            let p2 = momentum(axis).try_pow(2).expect("degree 2").scale(&kinetic);
            let x2 = position(axis).try_pow(2).expect("degree 2").scale(&potential);
            &(&acc + &p2) + &x2
        })
    }
}

pub mod quantum {
    use super::{check_dims, LadderKind};
    use crate::algebra::coefficient::{integer, Coefficient};
    use crate::algebra::operator::ExactUnits;
    use crate::algebra::{Axis, Basis, OperatorPolynomial};

    pub fn position(axis: Axis) -> OperatorPolynomial {
        OperatorPolynomial::x(Basis::Canonical, axis)
    }

    pub fn momentum(axis: Axis) -> OperatorPolynomial {
        OperatorPolynomial::p(Basis::Canonical, axis)
    }

    /// `L̂ᵢ = x̂ⱼ p̂ₖ − x̂ₖ p̂ⱼ`; the factors act on different axes so no ordering
    /// choice arises.
    pub fn angular_momentum(axis: Axis) -> OperatorPolynomial {
        let (j, k) = axis.cyclic_successors();
        let a = position(j).try_mul(&momentum(k)).expect("degree 2");
        let b = position(k).try_mul(&momentum(j)).expect("degree 2");
        &a - &b
    }

    pub fn angular_momentum_squared() -> OperatorPolynomial {
        Axis::ALL.into_iter().fold(OperatorPolynomial::zero(Basis::Canonical), |acc, axis| {
            let l = angular_momentum(axis);
            &acc + &l.try_mul(&l).expect("degree 4")
        })
    }

    /// `Σᵢ p̂ᵢ²/2m + mω₀² x̂ᵢ²/2` over the first `dims` axes.
    ///
    /// Panics unless `dims` is 1, 2 or 3.
    pub fn hamiltonian(dims: usize, units: &ExactUnits) -> OperatorPolynomial {
        check_dims(dims);
        let kinetic = Coefficient::from_rational(num::traits::Inv::inv(&units.mass * integer(2)));
        let potential = Coefficient::from_rational(&units.mass * &units.omega * &units.omega / integer(2));
        Axis::ALL[..dims].iter().fold(OperatorPolynomial::zero(Basis::Canonical), |acc, &axis| {
            let p2 = momentum(axis).try_pow(2).expect("degree 2").scale(&kinetic);
            let x2 = position(axis).try_pow(2).expect("degree 2").scale(&potential);
            &(&acc + &p2) + &x2
        })
    }

    /// `â = ξ + iπ` or `â⁺ = ξ − iπ` in the dimensionless ladder basis.
    pub fn ladder(kind: LadderKind, axis: Axis) -> OperatorPolynomial {
        let xi = OperatorPolynomial::x(Basis::Ladder, axis);
        let pi = OperatorPolynomial::p(Basis::Ladder, axis);
        let i = match kind {
            LadderKind::Lowering => Coefficient::i(),
            LadderKind::Raising => -Coefficient::i(),
        };
        &xi + &pi.scale(&i)
    }

    /// `â⁺â` on one axis.
    pub fn number(axis: Axis) -> OperatorPolynomial {
        ladder(LadderKind::Raising, axis)
            .try_mul(&ladder(LadderKind::Lowering, axis))
            .expect("degree 2")
    }

    /// `ħω₀ Σᵢ (â⁺ᵢ âᵢ + ½)` in the ladder basis.
    pub fn hamiltonian_from_ladder(dims: usize, units: &ExactUnits) -> OperatorPolynomial {
        check_dims(dims);
        let half = OperatorPolynomial::constant(Basis::Ladder, Coefficient::from_rational(crate::algebra::coefficient::rational(1, 2)));
        let sum = Axis::ALL[..dims]
            .iter()
            .fold(OperatorPolynomial::zero(Basis::Ladder), |acc, &axis| &(&acc + &number(axis)) + &half);
        let hw = &Coefficient::hbar() * &Coefficient::from_rational(units.omega.clone());
        sum.scale(&hw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::operator::{commutator, ExactUnits};
    use crate::algebra::{Axis, Basis, OperatorPolynomial};

    #[test]
    fn lz_classical() {
        assert_eq!(classical::angular_momentum(Axis::Z).to_string(), "x1*p2 - p1*x2");
        assert_eq!(quantum::angular_momentum(Axis::X).to_string(), "x2*p3 - p2*x3");
    }

    #[test]
    fn ladder_commutator() {
        let a = quantum::ladder(LadderKind::Lowering, Axis::X);
        let ad = quantum::ladder(LadderKind::Raising, Axis::X);
        assert_eq!(commutator(&a, &ad).unwrap(), OperatorPolynomial::identity(Basis::Ladder));
        assert_eq!(a.adjoint(), ad);
    }

    #[test]
    fn hamiltonian_matches_weyl_image() {
        let units = ExactUnits::natural();
        let h = crate::algebra::weyl_symmetrize(&classical::hamiltonian(3, &units)).unwrap();
        assert_eq!(h, quantum::hamiltonian(3, &units));
    }
}
