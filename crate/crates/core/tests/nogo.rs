use kgalilei::hopf::GroupTensor;
use kgalilei::multiplier::{bargmann_exponent, inverse_factor};
use kgalilei::ncpoly::{set_boosts_zero, v_squared, GroupGen, NCElement, Truncation};
use kgalilei::nogo::*;
use kgalilei::scalars::{ExactComplex as C, GradedScalar as G};
use GroupGen::*;

#[test]
fn beta_vanishes_at_zero_boost_and_reads_off() {
    let b = build_beta(2);
    assert!(set_boosts_zero(&b, 0).is_zero());
    let key = vec![vec![V(1), R(1, 2)], vec![A(2)]];
    assert_eq!(b.coeff(&key), G::mass());
    let key = vec![vec![V(3), V(3)], vec![Tau]];
    assert_eq!(b.coeff(&key), G::monomial(C::frac(1, 2), 0, 1));
}

#[test]
fn beta_is_the_grade_zero_source_of_the_quantum_relation() {
    let t = Truncation::new(1, 4);
    let inv = inverse_factor(t).tensor(&NCElement::one(1, t)).unwrap();
    let source = &inv * &bargmann_exponent(t);
    assert_eq!(source.lambda_part(0).with_truncation(classical_truncation(2)), build_beta(2));
}

#[test]
fn basis_sizes() {
    // commutative monomials in 16 letters of degree <= d: C(16 + d, d)
    assert_eq!(monomial_basis(1).len(), 17);
    assert_eq!(monomial_basis(2).len(), 153);
    assert_eq!(monomial_basis(3).len(), 969);
}

fn witness_of(out: CoboundaryOutcome) -> Witness {
    match out {
        CoboundaryOutcome::Infeasible(w) => w,
        CoboundaryOutcome::Solution { .. } => panic!("expected infeasible"),
    }
}

#[test]
fn low_degree_obstruction_with_replay() {
    for d in 1..=2 {
        let p = CoboundaryProblem::classical(d, Source::Bargmann).unwrap();
        let w = witness_of(p.solve().unwrap());
        assert!(p.replay(&w).unwrap(), "D={d}");
    }
}

#[test]
fn witness_lifts_to_lower_degree() {
    let w = witness_of(coboundary_solve(2).unwrap());
    let lower = CoboundaryProblem::classical(1, Source::Bargmann).unwrap();
    assert!(lower.replay(&w).unwrap());
}

#[test]
fn tampered_witness_does_not_replay() {
    let p = CoboundaryProblem::classical(1, Source::Bargmann).unwrap();
    let mut w = witness_of(p.solve().unwrap());
    assert!(!w.is_empty());
    w.entries.clear();
    assert!(!p.replay(&w).unwrap());
}

#[test]
fn positive_control_is_solved_by_v_squared() {
    let p = CoboundaryProblem::classical(2, Source::PositiveControl).unwrap();
    match p.solve().unwrap() {
        CoboundaryOutcome::Solution { x, .. } => {
            assert!(p.apply(&x).unwrap().try_sub(&p.target).unwrap().is_zero());
            // the solution is v^2 up to primitive elements, which at degree
            // <= 2 are multiples of τ
            let v2 = v_squared(p.trunc);
            let rest = x.try_sub(&v2).unwrap();
            assert!(rest.terms().all(|(k, _)| k[0] == vec![Tau]), "{rest}");
        }
        CoboundaryOutcome::Infeasible(_) => panic!("positive control must be solvable"),
    }
    let direct = p.apply(&v_squared(p.trunc)).unwrap();
    assert_eq!(direct, p.target);
}

#[test]
fn zero_target_has_zero_solution_and_a_kernel() {
    let p = CoboundaryProblem::classical(2, Source::Zero).unwrap();
    match p.solve().unwrap() {
        CoboundaryOutcome::Solution { x, kernel_dim } => {
            assert!(x.is_zero());
            assert!(kernel_dim > 0);
        }
        CoboundaryOutcome::Infeasible(_) => panic!(),
    }
}

#[test]
fn grade_zero_quantum_relation_matches_the_classical_one() {
    let q = CoboundaryProblem::new(0, 2, Source::Bargmann).unwrap();
    assert!(q.solve().unwrap().is_infeasible());
    let r = quantum_obstruction(0, 2).unwrap();
    assert!(r.passed(), "{}", r.residual);
    let z = CoboundaryProblem::new(0, 2, Source::Zero).unwrap();
    assert!(!z.solve().unwrap().is_infeasible());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(CoboundaryProblem::classical(0, Source::Bargmann).is_err());
    assert!(CoboundaryProblem::new(2, 2, Source::Bargmann).is_err());
    let _ = GroupTensor::zero(2, classical_truncation(1));
}
