use nalgebra::DMatrix;
use num::complex::Complex64;
use proptest::prelude::*;

use sedosc::algebra::{
    classical, commutator, gaussian_expectation_classical, gaussian_expectation_quantum, normal_order_with,
    poisson_bracket, quantum, rational, weyl_symmetrize, word_product, Axis, Basis, CanonicalPolynomial, Coefficient,
    ExactUnits, GaussianRational, Letter, Monomial, OperatorPolynomial, ReductionStrategy, Variable,
};
use sedosc::oracles::{energy_mean, energy_second_moment, l2_mean};
use sedosc::{OscillatorParams, TheorySide, ThermalState};

fn small_coefficient() -> impl Strategy<Value = Coefficient> {
    (-3i64..=3, -2i64..=2, 1i64..=3, 0u32..=1).prop_map(|(re, im, den, k)| {
        Coefficient::monomial(GaussianRational::new(rational(re, den), rational(im, den)), k)
    })
}

fn small_monomial(max_degree: u16) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u16..=2, 6).prop_filter_map("degree bound", move |e| {
        let m = Monomial::new([(e[0], e[1]), (e[2], e[3]), (e[4], e[5])]);
        (m.degree() <= u32::from(max_degree)).then_some(m)
    })
}

fn canonical_poly() -> impl Strategy<Value = CanonicalPolynomial> {
    proptest::collection::vec((small_coefficient(), small_monomial(4)), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(CanonicalPolynomial::zero(), |acc, (c, m)| &acc + &CanonicalPolynomial::term(c, m))
    })
}

fn operator_poly() -> impl Strategy<Value = OperatorPolynomial> {
    proptest::collection::vec((small_coefficient(), small_monomial(4)), 0..4).prop_map(|terms| {
        terms.into_iter().fold(OperatorPolynomial::zero(Basis::Canonical), |acc, (c, m)| {
            &acc + &OperatorPolynomial::term(Basis::Canonical, c, m)
        })
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..3, any::<bool>()).prop_map(|(a, is_x)| {
        let axis = Axis::ALL[a];
        if is_x {
            Letter::x(axis)
        } else {
            Letter::p(axis)
        }
    })
}

fn one_axis_letter() -> impl Strategy<Value = Letter> {
    any::<bool>().prop_map(|is_x| if is_x { Letter::x(Axis::X) } else { Letter::p(Axis::X) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poisson_antisymmetry(f in canonical_poly(), g in canonical_poly()) {
        let fg = poisson_bracket(&f, &g).unwrap();
        let gf = poisson_bracket(&g, &f).unwrap();
        prop_assert!((&fg + &gf).is_zero());
    }

    #[test]
    fn poisson_jacobi(f in canonical_poly(), g in canonical_poly(), h in canonical_poly()) {
        let a = poisson_bracket(&f, &poisson_bracket(&g, &h).unwrap()).unwrap();
        let b = poisson_bracket(&g, &poisson_bracket(&h, &f).unwrap()).unwrap();
        let c = poisson_bracket(&h, &poisson_bracket(&f, &g).unwrap()).unwrap();
        prop_assert!((&(&a + &b) + &c).is_zero());
    }

    #[test]
    fn poisson_leibniz(f in canonical_poly(), g in canonical_poly(), h in canonical_poly()) {
        let lhs = poisson_bracket(&f, &g.try_mul(&h).unwrap()).unwrap();
        let rhs = &poisson_bracket(&f, &g).unwrap().try_mul(&h).unwrap()
            + &g.try_mul(&poisson_bracket(&f, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_antisymmetry(a in operator_poly(), b in operator_poly()) {
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!((&ab + &ba).is_zero());
    }

    #[test]
    fn commutator_jacobi(a in operator_poly(), b in operator_poly(), c in operator_poly()) {
        let x = commutator(&a, &commutator(&b, &c).unwrap()).unwrap();
        let y = commutator(&b, &commutator(&c, &a).unwrap()).unwrap();
        let z = commutator(&c, &commutator(&a, &b).unwrap()).unwrap();
        prop_assert!((&(&x + &y) + &z).is_zero());
    }

    #[test]
    fn product_is_associative(a in operator_poly(), b in operator_poly(), c in operator_poly()) {
        let lhs = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let rhs = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_order_is_confluent(word in proptest::collection::vec(letter(), 0..10), seed in any::<u64>()) {
        let left = normal_order_with(&word, Basis::Canonical, ReductionStrategy::Leftmost);
        let right = normal_order_with(&word, Basis::Canonical, ReductionStrategy::Rightmost);
        let random = normal_order_with(&word, Basis::Canonical, ReductionStrategy::Random(seed));
        let product = word_product(&word, Basis::Canonical).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &random);
        prop_assert_eq!(&left, &product);
    }

    #[test]
    fn normal_order_is_idempotent(m in small_monomial(6)) {
        let word = sedosc::algebra::word_of(&m);
        let once = normal_order_with(&word, Basis::Canonical, ReductionStrategy::Leftmost);
        prop_assert_eq!(once, OperatorPolynomial::term(Basis::Canonical, Coefficient::one(), m));
    }

    #[test]
    fn weyl_image_is_hermitian_for_real_polynomials(f in canonical_poly()) {
        let real: CanonicalPolynomial = f.terms().fold(CanonicalPolynomial::zero(), |acc, (m, c)| {
            let re: Coefficient = c.terms().fold(Coefficient::zero(), |s, (k, g)| {
                &s + &Coefficient::monomial(GaussianRational::real(g.re.clone()), k)
            });
            &acc + &CanonicalPolynomial::term(re, *m)
        });
        let w = weyl_symmetrize(&real).unwrap();
        prop_assert_eq!(w.adjoint(), w);
    }
}

/// Distinct orderings of a multiset of letters.
fn arrangements(letters: &[Letter]) -> Vec<Vec<Letter>> {
    if letters.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        if seen.contains(l) {
            continue;
        }
        seen.push(*l);
        let mut rest = letters.to_vec();
        rest.remove(i);
        for mut tail in arrangements(&rest) {
            tail.insert(0, *l);
            out.push(tail);
        }
    }
    out
}

#[test]
fn weyl_matches_average_over_orderings() {
    for exps in [[(1, 1), (0, 0), (0, 0)], [(2, 1), (0, 0), (0, 0)], [(2, 2), (0, 0), (0, 0)], [(3, 2), (0, 0), (0, 0)], [(1, 2), (1, 1), (0, 0)], [(1, 0), (2, 1), (0, 1)]] {
        let m = Monomial::new(exps);
        let orders = arrangements(&sedosc::algebra::word_of(&m));
        let mut sum = OperatorPolynomial::zero(Basis::Canonical);
        for w in &orders {
            sum = &sum + &word_product(w, Basis::Canonical).unwrap();
        }
        let average = sum.scale(&Coefficient::from_rational(rational(1, orders.len() as i64)));
        let w = weyl_symmetrize(&CanonicalPolynomial::term(Coefficient::one(), m)).unwrap();
        assert_eq!(w, average, "monomial {m}");
    }
}

#[test]
fn weyl_examples() {
    let units = ExactUnits::natural();
    let h = weyl_symmetrize(&classical::hamiltonian(1, &units)).unwrap();
    assert_eq!(h, quantum::hamiltonian(1, &units));
    assert_eq!(h.to_string(), "1/2*x1^2 + 1/2*p1^2");
    let xp = classical::position(Axis::X).try_mul(&classical::momentum(Axis::X)).unwrap();
    assert_eq!(weyl_symmetrize(&xp).unwrap().to_string(), "x1*p1 - 1/2*i*hbar");
}

#[test]
fn dirac_correspondence_on_rotations() {
    for i in Axis::ALL {
        for j in Axis::ALL {
            let q = commutator(&quantum::angular_momentum(i), &quantum::angular_momentum(j)).unwrap();
            let c = poisson_bracket(&classical::angular_momentum(i), &classical::angular_momentum(j)).unwrap();
            assert_eq!(q, weyl_symmetrize(&c).unwrap().scale(&Coefficient::i_hbar()));
        }
    }
}

#[test]
fn three_dimensional_hamiltonian_brackets() {
    let units = ExactUnits::new(rational(5, 3), rational(7, 4)).unwrap();
    let h = classical::hamiltonian(3, &units);
    let l2 = classical::angular_momentum_squared();
    assert!(poisson_bracket(&h, &l2).unwrap().is_zero());
    // any polynomial in H also brackets to zero with L²
    let h2 = h.try_mul(&h).unwrap();
    assert!(poisson_bracket(&h2, &l2).unwrap().is_zero());
    for axis in Axis::ALL {
        assert!(poisson_bracket(&h, &classical::angular_momentum(axis)).unwrap().is_zero());
    }
}

#[test]
fn hamilton_equations() {
    let units = ExactUnits::new(rational(2, 1), rational(3, 1)).unwrap();
    let h = classical::hamiltonian(1, &units);
    let xdot = poisson_bracket(&classical::position(Axis::X), &h).unwrap();
    let pdot = poisson_bracket(&classical::momentum(Axis::X), &h).unwrap();
    assert_eq!(xdot.to_string(), "1/2*p1");
    assert_eq!(pdot.to_string(), "-18*x1");
}

// Truncated number-basis representation in natural units.

const LEVELS: usize = 40;

fn lowering() -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(LEVELS, LEVELS);
    for n in 1..LEVELS {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn generator_matrices(basis: Basis) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = lowering();
    let ad = a.adjoint();
    let scale = match basis {
        Basis::Canonical => std::f64::consts::FRAC_1_SQRT_2,
        Basis::Ladder => 0.5,
    };
    let x = (&a + &ad) * Complex64::new(scale, 0.0);
    let p = (&ad - &a) * Complex64::new(0.0, scale);
    (x, p)
}

fn word_matrix(word: &[Letter], basis: Basis) -> DMatrix<Complex64> {
    let (x, p) = generator_matrices(basis);
    word.iter().fold(DMatrix::identity(LEVELS, LEVELS), |acc, l| match l.var {
        Variable::Position => acc * &x,
        Variable::Momentum => acc * &p,
    })
}

fn operator_matrix(op: &OperatorPolynomial) -> DMatrix<Complex64> {
    let mut total = DMatrix::zeros(LEVELS, LEVELS);
    for (m, c) in op.terms() {
        total += word_matrix(&sedosc::algebra::word_of(m), op.basis()) * c.evaluate(1.0);
    }
    total
}

/// Max deviation on the block of levels untouched by truncation, relative to
/// the largest entry of the reference.
fn block_residual(lhs: &DMatrix<Complex64>, rhs: &DMatrix<Complex64>, word_len: usize) -> f64 {
    let n = LEVELS - word_len - 1;
    let mut max_diff: f64 = 0.0;
    let mut max_ref: f64 = 1.0;
    for i in 0..n {
        for j in 0..n {
            max_diff = max_diff.max((lhs[(i, j)] - rhs[(i, j)]).norm());
            max_ref = max_ref.max(rhs[(i, j)].norm());
        }
    }
    max_diff / max_ref
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_order_matches_truncated_basis(word in proptest::collection::vec(one_axis_letter(), 0..=6), ladder in any::<bool>()) {
        let basis = if ladder { Basis::Ladder } else { Basis::Canonical };
        let ordered = normal_order_with(&word, basis, ReductionStrategy::Leftmost);
        let r = block_residual(&operator_matrix(&ordered), &word_matrix(&word, basis), word.len());
        prop_assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn commutator_matches_truncated_basis(
        a in proptest::collection::vec(one_axis_letter(), 1..=3),
        b in proptest::collection::vec(one_axis_letter(), 1..=3),
    ) {
        let oa = word_product(&a, Basis::Canonical).unwrap();
        let ob = word_product(&b, Basis::Canonical).unwrap();
        let c = commutator(&oa, &ob).unwrap();
        let (ma, mb) = (word_matrix(&a, Basis::Canonical), word_matrix(&b, Basis::Canonical));
        let reference = &ma * &mb - &mb * &ma;
        let r = block_residual(&operator_matrix(&c), &reference, a.len() + b.len());
        prop_assert!(r < 1e-9, "residual {r}");
    }
}

#[test]
fn examples_from_the_normal_order_table() {
    let (x, p) = (Letter::x(Axis::X), Letter::p(Axis::X));
    let pp_x = normal_order_with(&[p, p, x], Basis::Canonical, ReductionStrategy::Leftmost);
    let reference = word_matrix(&[p, p, x], Basis::Canonical);
    assert!(block_residual(&operator_matrix(&pp_x), &reference, 3) < 1e-12);
    assert_eq!(pp_x.to_string(), "x1*p1^2 - 2*i*hbar*p1");
}

#[test]
fn wick_matches_oracles() {
    let params = OscillatorParams::natural();
    let units = ExactUnits::natural();
    let h1q = quantum::hamiltonian(1, &units);
    let h1c = classical::hamiltonian(1, &units);
    let l2q = quantum::angular_momentum_squared();
    let l2c = classical::angular_momentum_squared();
    for t in [0.0, 0.25, 0.5, 1.0, 10.0] {
        let s = ThermalState::new(t).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300) || (a - b).abs() < 1e-14;
        for (side, h, h2) in [
            (TheorySide::Quantum, gaussian_expectation_quantum(&h1q, &params, &s).unwrap().re, gaussian_expectation_quantum(&h1q.try_pow(2).unwrap(), &params, &s).unwrap().re),
            (TheorySide::Classical, gaussian_expectation_classical(&h1c, &params, &s).unwrap(), gaussian_expectation_classical(&h1c.try_pow(2).unwrap(), &params, &s).unwrap()),
        ] {
            assert!(close(h, energy_mean(side, &params, &s)), "{side} H at T={t}");
            assert!(close(h2, energy_second_moment(side, &params, &s)), "{side} H2 at T={t}");
        }
        let lq = gaussian_expectation_quantum(&l2q, &params, &s).unwrap();
        assert!(lq.im.abs() < 1e-12);
        assert!(close(lq.re, l2_mean(TheorySide::Quantum, &params, &s)), "quantum L2 at T={t}: {}", lq.re);
        let lc = gaussian_expectation_classical(&l2c, &params, &s).unwrap();
        assert!(close(lc, l2_mean(TheorySide::Classical, &params, &s)), "classical L2 at T={t}");
    }
}

#[test]
fn wick_ground_state_values() {
    let params = OscillatorParams::natural();
    let s = ThermalState::zero();
    let units = ExactUnits::natural();
    let h = quantum::hamiltonian(1, &units);
    let v = gaussian_expectation_quantum(&h.try_pow(2).unwrap(), &params, &s).unwrap();
    assert!((v.re - 0.25).abs() < 1e-15);
    let l2 = gaussian_expectation_quantum(&quantum::angular_momentum_squared(), &params, &s).unwrap();
    assert!(l2.norm() < 1e-15);
    let l2c = gaussian_expectation_classical(&classical::angular_momentum_squared(), &params, &s).unwrap();
    assert!((l2c - 1.5).abs() < 1e-15);
    let h2c = gaussian_expectation_classical(&classical::hamiltonian(1, &units).try_pow(2).unwrap(), &params, &s).unwrap();
    assert!((h2c - 0.5).abs() < 1e-15);
}

#[test]
fn wick_in_ladder_basis_agrees_with_canonical() {
    let params = OscillatorParams::new(1.5, 0.75, 1.0, 1.0, 0.0).unwrap();
    let units = ExactUnits::from_params(&params).unwrap();
    for t in [0.0, 0.6] {
        let s = ThermalState::new(t).unwrap();
        let h = quantum::hamiltonian(1, &units);
        let ladder = sedosc::algebra::to_ladder_basis(&h.try_pow(2).unwrap(), &units).unwrap();
        let a = gaussian_expectation_quantum(&h.try_pow(2).unwrap(), &params, &s).unwrap();
        let b = gaussian_expectation_quantum(&ladder, &params, &s).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
        let n = gaussian_expectation_quantum(&quantum::number(Axis::X), &params, &s).unwrap();
        let expected = energy_mean(TheorySide::Quantum, &params, &s) / (params.hbar * params.omega0) - 0.5;
        assert!((n.re - expected).abs() < 1e-12);
    }
}

fn golden(name: &str, rendered: &str) {
    let path = format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    assert_eq!(rendered.trim_end(), expected.trim_end(), "golden file {name}");
}

#[test]
fn golden_renderings() {
    let units = ExactUnits::natural();
    golden("l_squared_classical", &classical::angular_momentum_squared().to_string());
    golden("l_squared_quantum", &quantum::angular_momentum_squared().to_string());
    golden("h_squared_quantum", &quantum::hamiltonian(1, &units).try_pow(2).unwrap().to_string());
    golden("number_operator", &quantum::number(Axis::X).to_string());
}
