use kgalilei::hopf::*;
use kgalilei::ncpoly::{gen, GroupGen, NCElement, Truncation};
use kgalilei::scalars::{ExactComplex as C, GradedScalar as G};
use GroupGen::*;

const T: Truncation = Truncation { n: 2, d: Some(6) };

fn t2(words: &[&[GroupGen]], c: G) -> GroupTensor {
    let w: Vec<Vec<GroupGen>> = words.iter().map(|s| s.to_vec()).collect();
    GroupTensor::from_words(T, &w, c)
}

#[test]
fn coproduct_of_time_is_primitive() {
    let d = coproduct_group(&gen(T, Tau)).unwrap();
    assert_eq!(d, &t2(&[&[Tau], &[]], G::one()) + &t2(&[&[], &[Tau]], G::one()));
}

#[test]
fn coproduct_of_unit() {
    assert_eq!(coproduct_group(&NCElement::one(1, T)).unwrap(), GroupTensor::one(2, T));
}

#[test]
fn coproduct_of_boost_square_by_hand() {
    let vv = NCElement::from_words(T, &[vec![V(1), V(1)]], G::one());
    let mut expect = t2(&[&[V(1), V(1)], &[]], G::one());
    for k in 1..=3 {
        for l in 1..=3 {
            let mut left = vec![R(1, k), R(1, l)];
            left.sort();
            let mut right = vec![V(k), V(l)];
            right.sort();
            expect = &expect + &t2(&[&left, &right], G::one());
        }
        expect = &expect + &t2(&[&[V(1), R(1, k)], &[V(k)]], G::constant(C::int(2)));
    }
    assert_eq!(coproduct_group(&vv).unwrap(), expect);
}

#[test]
fn dual_coproduct_examples() {
    let h = coproduct_dual(&dual_gen(1, DualGen::H), 1).unwrap();
    let t = Truncation::lambda_only(1);
    let w = |a: &[DualGen], b: &[DualGen], c: G| DualElement::from_words(t, &[a.to_vec(), b.to_vec()], c);
    assert_eq!(h, &w(&[DualGen::H], &[], G::one()) + &w(&[], &[DualGen::H], G::one()));
    let p = coproduct_dual(&dual_gen(1, DualGen::P(1)), 1).unwrap();
    let expect = &(&w(&[], &[DualGen::P(1)], G::one()) + &w(&[DualGen::P(1)], &[], G::one()))
        + &w(&[DualGen::P(1)], &[DualGen::H], G::lambda().neg());
    assert_eq!(p, expect);
    for i in 1..=3 {
        let j = coproduct_dual(&dual_gen(1, DualGen::J(i)), 1).unwrap();
        assert_eq!(j, &w(&[DualGen::J(i)], &[], G::one()) + &w(&[], &[DualGen::J(i)], G::one()));
    }
}

#[test]
fn counit_examples() {
    assert!(counit_group(&gen(T, R(1, 1))).is_one());
    assert!(counit_group(&(&gen(T, Tau) * &gen(T, A(1)))).is_zero());
    let d = coproduct_group_letter(T, A(1));
    let left = d.contract_slot(0, counit_group_word);
    assert_eq!(reduce_ortho(&left), gen(T, A(1)));
}

#[test]
fn coassociativity_on_all_group_generators() {
    for g in GroupGen::all() {
        assert!(coassociativity_residual_group(g, T).unwrap().is_zero(), "{g}");
    }
}

#[test]
fn coassociativity_on_all_dual_generators() {
    for n in 0..=4 {
        let cop = DualCoproduct::new(n, BOOST_COPRODUCT);
        for g in DualGen::all() {
            assert!(coassociativity_residual_dual(g, &cop).unwrap().is_zero(), "{g} at N={n}");
        }
    }
}

#[test]
fn time_translation_relation_needs_no_ideal() {
    let dx = coproduct_group_letter(T, Tau);
    let dy = coproduct_group_letter(T, A(1));
    let raw = &dx.commutator(&dy).unwrap() - &coproduct_group(&gen(T, Tau).commutator(&gen(T, A(1))).unwrap()).unwrap();
    assert!(raw.is_zero());
}

#[test]
fn boost_translation_relation_needs_the_ideal() {
    let dx = coproduct_group_letter(T, V(1));
    let dy = coproduct_group_letter(T, A(2));
    let c = gen(T, V(1)).commutator(&gen(T, A(2))).unwrap();
    let raw = &dx.commutator(&dy).unwrap() - &coproduct_group(&c).unwrap();
    assert!(!raw.is_zero());
    assert!(reduce_ortho(&raw).is_zero());
}

#[test]
fn all_group_relations_are_respected() {
    for (x, y) in pairs(&GroupGen::all()) {
        assert!(relation_residual_group(x, y, T).unwrap().is_zero(), "[{x}, {y}]");
    }
}

#[test]
fn all_dual_relations_are_respected() {
    for n in [1, 2, 4] {
        let cop = DualCoproduct::new(n, BOOST_COPRODUCT);
        for (x, y) in pairs(&DualGen::all()) {
            assert!(relation_residual_dual(x, y, &cop).unwrap().is_zero(), "[{x}, {y}] at N={n}");
        }
    }
}

#[test]
fn only_the_real_contracted_boost_coproduct_passes() {
    let probe = boost_coproduct_probe(2).unwrap();
    let passing: Vec<BoostCoproduct> = probe.iter().filter(|(_, f)| *f == 0).map(|(v, _)| *v).collect();
    assert_eq!(passing, vec![BOOST_COPRODUCT], "{probe:?}");
}

#[test]
fn star_and_counit_compatibility() {
    let cop = DualCoproduct::new(2, BOOST_COPRODUCT);
    for g in GroupGen::all() {
        assert!(star_residual_group(g, T).unwrap().is_zero(), "{g}");
        let (l, r) = counit_residuals_group(g, T);
        assert!(l.is_zero() && r.is_zero(), "{g}");
    }
    for g in DualGen::all() {
        assert!(star_residual_dual(g, &cop).unwrap().is_zero(), "{g}");
        let (l, r) = counit_residuals_dual(g, &cop);
        assert!(l.is_zero() && r.is_zero(), "{g}");
    }
}

#[test]
fn dual_commutator_table() {
    let n = 2;
    let i = |k: i64| G::constant(C::new(kgalilei::scalars::q(0), kgalilei::scalars::q(k)));
    let il = |num: i64, den: i64| G::monomial(C::new(kgalilei::scalars::q(0), kgalilei::scalars::q_frac(num, den)), 1, 0);
    let g = |x: DualGen| dual_gen(n, x);
    let zero = DualElement::zero(1, Truncation::lambda_only(n));
    // [X, Y] written out from the presentation, for X before Y
    let expected = |x: DualGen, y: DualGen| -> DualElement {
        use DualGen::*;
        match (x, y) {
            (J(a), J(b)) => (1..=3).fold(zero.clone(), |acc, l| &acc + &g(J(l)).scale(&i(eps(a, b, l)))),
            (J(a), L(b)) => (1..=3).fold(zero.clone(), |acc, l| &acc + &g(L(l)).scale(&i(eps(a, b, l)))),
            (J(a), P(b)) => (1..=3).fold(zero.clone(), |acc, l| &acc + &g(P(l)).scale(&i(eps(a, b, l)))),
            (L(a), H) => g(P(a)).scale(&i(1)),
            (L(a), P(b)) => {
                let mut e = (&g(P(a)) * &g(P(b))).scale(&il(-1, 1));
                if a == b {
                    e = &e + &p_squared(n).scale(&il(1, 2));
                }
                e
            }
            _ => zero.clone(),
        }
    };
    for x in DualGen::all() {
        for y in DualGen::all() {
            let got = g(x).commutator(&g(y)).unwrap();
            let want = if x <= y { expected(x, y) } else { expected(y, x).neg() };
            assert_eq!(got, want, "[{x}, {y}]");
        }
    }
}

#[test]
fn pairing_examples_and_route_independence() {
    let t = Truncation::lambda_only(2);
    let x = |w: &[GroupGen]| NCElement::from_words(t, &[w.to_vec()], G::one());
    let big = |w: &[DualGen]| DualElement::from_words(t, &[w.to_vec()], G::one());
    assert_eq!(pair(&x(&[Tau]), &big(&[DualGen::H]), 1).unwrap(), G::constant(C::i()));
    assert!(pair(&x(&[A(1)]), &big(&[DualGen::P(2)]), 1).unwrap().is_zero());
    let lhs = pair_route(&x(&[A(1), Tau]), &big(&[DualGen::P(1), DualGen::H]), 2, Route::SplitCoordinates).unwrap();
    let rhs = pair_route(&x(&[A(1), Tau]), &big(&[DualGen::P(1), DualGen::H]), 2, Route::SplitGenerators).unwrap();
    assert_eq!(lhs, rhs);
    assert!(pair(&x(&[A(1), A(1), A(1), A(1)]), &big(&[]), 3).is_err());

    let mut basis_x: Vec<Vec<GroupGen>> = vec![vec![]];
    for a in GroupGen::all() {
        basis_x.push(vec![a]);
        for b in GroupGen::all() {
            if a <= b {
                basis_x.push(vec![a, b]);
            }
        }
    }
    let mut basis_g: Vec<Vec<DualGen>> = vec![vec![]];
    for a in DualGen::all() {
        basis_g.push(vec![a]);
        for b in DualGen::all() {
            if a <= b {
                basis_g.push(vec![a, b]);
            }
        }
    }
    for w in &basis_x {
        for gw in &basis_g {
            let a = pair_route(&x(w), &big(gw), 2, Route::SplitCoordinates).unwrap();
            let b = pair_route(&x(w), &big(gw), 2, Route::SplitGenerators).unwrap();
            assert_eq!(a, b, "<{w:?}, {gw:?}>");
        }
    }
}

#[test]
fn pairing_respects_relations() {
    // <[τ, a^1], P_1 H> computed by pairing the commutator equals pairing (i L) a^1
    let t = Truncation::lambda_only(2);
    let c = gen(t, Tau).commutator(&gen(t, A(1))).unwrap();
    let big = DualElement::from_words(t, &[vec![DualGen::P(1)]], G::one());
    let v = pair(&c, &big, 2).unwrap();
    assert_eq!(v, G::monomial(C::int(-1), 1, 0));
}
