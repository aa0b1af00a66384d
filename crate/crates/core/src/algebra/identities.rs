//! The standing catalogue of bracket and commutator identities.

use serde::Serialize;

use super::builders::{classical, quantum};
use super::coefficient::{rational, Coefficient};
use super::operator::{commutator, to_ladder_basis, ExactUnits};
use super::{poisson_bracket, weyl_symmetrize, Axis, Basis, CanonicalPolynomial, OperatorPolynomial};
use crate::error::Result;

/// Outcome of one identity: the residual `lhs − rhs` rendered exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub group: &'static str,
    pub name: String,
    pub residual: String,
    pub passed: bool,
}

fn classical_check(name: String, lhs: CanonicalPolynomial, rhs: CanonicalPolynomial) -> IdentityCheck {
    let residual = &lhs - &rhs;
    IdentityCheck { group: "poisson", name, passed: residual.is_zero(), residual: residual.to_string() }
}

fn operator_check(group: &'static str, name: String, lhs: OperatorPolynomial, rhs: OperatorPolynomial) -> IdentityCheck {
    let residual = &lhs - &rhs;
    IdentityCheck { group, name, passed: residual.is_zero(), residual: residual.to_string() }
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::X => "x",
        Axis::Y => "y",
        Axis::Z => "z",
    }
}

/// Runs every identity. Each check is exact; `passed` means the residual is
/// the zero polynomial.
pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let units = ExactUnits::natural();
    let cl_l: Vec<_> = Axis::ALL.iter().map(|&a| classical::angular_momentum(a)).collect();
    let q_l: Vec<_> = Axis::ALL.iter().map(|&a| quantum::angular_momentum(a)).collect();
    let cl_l2 = classical::angular_momentum_squared();
    let q_l2 = quantum::angular_momentum_squared();
    let h3 = classical::hamiltonian(3, &units);

    for axis in Axis::ALL {
        let n = axis_name(axis);
        out.push(classical_check(
            format!("{{x_{n}, p_{n}}} = 1"),
            poisson_bracket(&classical::position(axis), &classical::momentum(axis))?,
            CanonicalPolynomial::one(),
        ));
    }
    for i in Axis::ALL {
        let (j, k) = i.cyclic_successors();
        out.push(classical_check(
            format!("{{L_{}, L_{}}} = L_{}", axis_name(i), axis_name(j), axis_name(k)),
            poisson_bracket(&cl_l[i.index()], &cl_l[j.index()])?,
            cl_l[k.index()].clone(),
        ));
    }
    for i in Axis::ALL {
        out.push(classical_check(
            format!("{{L^2, L_{}}} = 0", axis_name(i)),
            poisson_bracket(&cl_l2, &cl_l[i.index()])?,
            CanonicalPolynomial::zero(),
        ));
    }
    for i in Axis::ALL {
        out.push(classical_check(
            format!("{{H_3D, L_{}}} = 0", axis_name(i)),
            poisson_bracket(&h3, &cl_l[i.index()])?,
            CanonicalPolynomial::zero(),
        ));
    }
    out.push(classical_check("{H_3D, L^2} = 0".into(), poisson_bracket(&h3, &cl_l2)?, CanonicalPolynomial::zero()));

    let i_hbar = Coefficient::i_hbar();
    for axis in Axis::ALL {
        let n = axis_name(axis);
        out.push(operator_check(
            "commutator",
            format!("[x_{n}, p_{n}] = i*hbar"),
            commutator(&quantum::position(axis), &quantum::momentum(axis))?,
            OperatorPolynomial::constant(Basis::Canonical, i_hbar.clone()),
        ));
    }
    for i in Axis::ALL {
        let (j, k) = i.cyclic_successors();
        out.push(operator_check(
            "commutator",
            format!("[L_{}, L_{}] = i*hbar*L_{}", axis_name(i), axis_name(j), axis_name(k)),
            commutator(&q_l[i.index()], &q_l[j.index()])?,
            q_l[k.index()].scale(&i_hbar),
        ));
    }
    for i in Axis::ALL {
        out.push(operator_check(
            "commutator",
            format!("[L^2, L_{}] = 0", axis_name(i)),
            commutator(&q_l2, &q_l[i.index()])?,
            OperatorPolynomial::zero(Basis::Canonical),
        ));
    }
    let q_h3 = quantum::hamiltonian(3, &units);
    out.push(operator_check(
        "commutator",
        "[H_3D, L^2] = 0".into(),
        commutator(&q_h3, &q_l2)?,
        OperatorPolynomial::zero(Basis::Canonical),
    ));

    for i in Axis::ALL {
        for j in Axis::ALL {
            let bracket = poisson_bracket(&cl_l[i.index()], &cl_l[j.index()])?;
            out.push(operator_check(
                "dirac",
                format!("[L_{}, L_{}] = i*hbar*W({{L_{}, L_{}}})", axis_name(i), axis_name(j), axis_name(i), axis_name(j)),
                commutator(&q_l[i.index()], &q_l[j.index()])?,
                weyl_symmetrize(&bracket)?.scale(&i_hbar),
            ));
        }
    }

    let lower = quantum::ladder(super::LadderKind::Lowering, Axis::X);
    let raise = quantum::ladder(super::LadderKind::Raising, Axis::X);
    out.push(operator_check(
        "ladder",
        "[a, a+] = 1".into(),
        commutator(&lower, &raise)?,
        OperatorPolynomial::identity(Basis::Ladder),
    ));
    let odd_units = ExactUnits::new(rational(3, 2), rational(2, 7))?;
    for (label, u) in [("natural units", &units), ("m=3/2, w0=2/7", &odd_units)] {
        for dims in [1, 3] {
            out.push(operator_check(
                "ladder",
                format!("H_{dims}D = hbar*w0*(a+ a + 1/2) [{label}]"),
                to_ladder_basis(&quantum::hamiltonian(dims, u), u)?,
                quantum::hamiltonian_from_ladder(dims, u),
            ));
        }
    }
    Ok(out)
}
