use kgalilei::replab::*;
use num_complex::Complex64;

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

#[test]
fn spin_matrices_close_and_have_the_right_casimir() {
    for twice in 0..=6 {
        let s = SpinRep::new(twice);
        assert_eq!(s.dim(), twice as usize + 1);
        assert!(s.commutator_residual() < 1e-12, "2s={twice}");
        assert!(s.casimir_residual() < 1e-12, "2s={twice}");
    }
    assert!(SpinRep::from_spin(0.3).is_err());
    assert!(SpinRep::from_spin(1.5).unwrap().dim() == 4);
}

#[test]
fn closed_forms_at_a_point() {
    let g = build_generators(1.0, 2.0, &SpinRep::new(0)).unwrap();
    let q = v(1.0, 0.0, 0.0);
    assert!((g.h.at(&q).b[(0, 0)].re - 2.0 * 1.25f64.ln()).abs() < 1e-15);
    assert!((g.h.at(&q).b[(0, 0)].re - 0.44629).abs() < 1e-5);
    assert!((g.p[0].at(&q).b[(0, 0)].re - 0.8).abs() < 1e-15);
    assert_eq!(g.h.at(&Vec3::zeros()).b[(0, 0)], Complex64::from(0.0));
    assert!(build_generators(1.0, 0.0, &SpinRep::new(0)).is_err());
}

#[test]
fn large_k_gives_classical_energy_and_momentum() {
    let g = build_generators(1.0, 1e8, &SpinRep::new(0)).unwrap();
    let q = v(0.4, -0.7, 0.2);
    let h = g.h.at(&q).b[(0, 0)].re;
    assert!((h - q.norm_squared() / 2.0).abs() / h < 1e-7);
    for k in 0..3 {
        assert!((g.p[k].at(&q).b[(0, 0)].re - q[k]).abs() / q[k].abs() < 1e-7);
    }
}

#[test]
fn excluded_radius_for_negative_k() {
    let g = build_generators(1.0, -1.0, &SpinRep::new(0)).unwrap();
    assert!(g.in_domain(&v(1.0, 0.0, 0.0)).is_ok());
    assert!(g.in_domain(&v(1.5, 0.0, 0.0)).is_err());
    assert!((g.domain_radius().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    let f = TestFunction::random(1, 1);
    assert!(act(&g, &GroupPointNR::identity(), &f, &[Vec3::zeros()]).is_err());
}

#[test]
fn exact_gradients_agree_with_central_differences() {
    let g = build_generators(0.5, 1.0, &SpinRep::new(2)).unwrap();
    let q = v(0.3, -0.2, 0.5);
    for op in g.p.iter().chain([&g.h]) {
        let exact = op.b.gradient(&q, GradientMode::Exact);
        let e1 = op.b.gradient(&q, GradientMode::FiniteDifference(1e-3));
        let e2 = op.b.gradient(&q, GradientMode::FiniteDifference(5e-4));
        for m in 0..3 {
            let d1 = (&exact[m] - &e1[m]).camax();
            let d2 = (&exact[m] - &e2[m]).camax();
            assert!(d1 < 1e-5, "{d1}");
            // second order: halving h quarters the error
            assert!(d2 < 0.3 * d1 + 1e-12, "{d1} {d2}");
        }
    }
}

#[test]
fn commutator_examples() {
    let g = build_generators(1.0, 2.0, &SpinRep::new(2)).unwrap();
    let q = v(0.1, 0.7, -0.4);
    assert_eq!(op_commutator(&g.l[0], &g.l[1], GradientMode::Exact).at(&q).max_abs(), 0.0);
    let s = &g.spin.s;
    let c = &s[0] * &s[1] - &s[1] * &s[0];
    assert!((c - &s[2] * Complex64::i()).camax() < 1e-12);
    let lh = op_commutator(&g.l[0], &g.h, GradientMode::Exact).at(&q);
    let ip = g.p[0].at(&q).scale(Complex64::i());
    assert!(lh.sub(&ip).max_abs() < 1e-12);
}

#[test]
fn boost_momentum_off_diagonal_example() {
    let (m, k) = (1.0, 2.0);
    let g = build_generators(m, k, &SpinRep::new(0)).unwrap();
    let q = v(0.3, -0.1, 0.2);
    let lhs = op_commutator(&g.l[0], &g.p[1], GradientMode::Exact).at(&q).b[(0, 0)];
    let p = momentum(m, k, &q);
    let rhs = Complex64::new(0.0, -0.5) * p[0] * p[1];
    assert!((lhs - rhs).norm() < 1e-9);
}

#[test]
fn algebra_holds_on_the_parameter_grid() {
    for (m, k) in [(1.0, 2.0), (1.0, 10.0), (0.5, 1.0)] {
        for twice in [0, 2] {
            let r = check_algebra(m, k, &SpinRep::new(twice), 100, 7, GradientMode::Exact).unwrap();
            assert!(r.passed(), "M={m} k={k} 2s={twice}: {}", r.residual);
        }
    }
}

#[test]
fn algebra_with_finite_differences() {
    let r = check_algebra(1.0, 2.0, &SpinRep::new(2), 30, 3, GradientMode::FiniteDifference(1e-5)).unwrap();
    assert!(r.passed(), "{}", r.residual);
}

#[test]
fn algebra_for_negative_k_inside_the_regular_region() {
    let r = check_algebra(1.0, -2.0, &SpinRep::new(0), 50, 11, GradientMode::Exact).unwrap();
    assert!(r.passed(), "{}", r.residual);
}

#[test]
fn massless_limit_matches_the_algebraic_sector() {
    let r = massless_sector_check(2.0, &SpinRep::new(0), 100, 5).unwrap();
    assert!(r.passed(), "{}", r.residual);
}

#[test]
fn dispersion_forms() {
    let r = dispersion_residuals(1.0, 2.0, &v(1.0, 0.0, 0.0));
    assert!((r[0] - 0.08).abs() < 1e-12);
    assert!(r[1].abs() < 1e-15);
    assert!(r[2].abs() < 1e-15);
    assert_eq!(dispersion_residuals(1.0, 2.0, &Vec3::zeros()), [0.0; 3]);
    let big = dispersion_residuals(1.0, 1e8, &v(0.6, 0.2, -0.3));
    assert!(big.iter().all(|x| x.abs() < 1e-7));
    let reports = dispersion_check(1.0, 2.0, 200, 1).unwrap();
    assert!(reports[0].passed() && reports[1].passed());
    assert_eq!(reports[2].status, kgalilei::report::Status::ReportOnly);
}

#[test]
fn identity_and_pure_rotation_actions() {
    let g = build_generators(1.0, 2.0, &SpinRep::new(0)).unwrap();
    let f = TestFunction::random(1, 9);
    let pts = [v(0.2, 0.1, -0.3), v(-0.5, 0.4, 0.0)];
    let same = act(&g, &GroupPointNR::identity(), &f, &pts).unwrap();
    for (q, u) in pts.iter().zip(&same) {
        assert!((u - f.value(q)).camax() < 1e-15);
    }
    let rot = GroupPointNR::rotation(&v(1.0, 2.0, -1.0), 0.7);
    let out = act(&g, &rot, &f, &pts).unwrap();
    for (q, u) in pts.iter().zip(&out) {
        assert!((u - f.value(&(rot.r.transpose() * q))).camax() < 1e-14);
    }
}

#[test]
fn action_preserves_the_norm() {
    let g = build_generators(1.0, 2.0, &SpinRep::new(2)).unwrap();
    let f = TestFunction::random(3, 4);
    let r = kgalilei::replab::GroupPointNR::new(
        GroupPointNR::rotation(&v(0.3, -1.0, 0.5), 1.1).r,
        v(0.2, -0.1, 0.3),
        v(1.0, 0.5, -0.7),
        0.8,
    )
    .unwrap();
    assert!(norm_defect(&g, &r, &f).unwrap() < 1e-8);
}

#[test]
fn generators_are_recovered_from_the_action() {
    let g = build_generators(1.0, 2.0, &SpinRep::new(2)).unwrap();
    let f = TestFunction::random(3, 2);
    let pts = [v(0.1, -0.2, 0.3), v(0.5, 0.2, -0.4), v(-0.3, 0.6, 0.1)];
    let r = extract_generators(&g, &f, &pts, StepSchedule::default()).unwrap();
    assert!(r.passed(), "{} {:?}", r.residual, r.artifacts);
}

#[test]
fn rotations_compose_without_defect() {
    let f = TestFunction::random(3, 8);
    let g = build_generators(1.0, 5.0, &SpinRep::new(2)).unwrap();
    let a = GroupPointNR::rotation(&v(0.0, 0.0, 1.0), 0.4);
    let b = GroupPointNR::rotation(&v(1.0, 1.0, 0.0), -0.9);
    assert!(composition_defect_at(&g, &a, &b, &f).unwrap() < 1e-12);
}

#[test]
fn boost_then_translation_defect_decays_like_one_over_k() {
    let f = TestFunction::random(1, 6);
    let ks = [1e1, 1e2, 1e3, 1e4, 1e5];
    let rep = composition_defect(
        1.0,
        &SpinRep::new(0),
        &ks,
        &GroupPointNR::boost(v(0.2, 0.0, 0.0)),
        &GroupPointNR::translation(v(1.0, 0.0, 0.0)),
        &f,
    )
    .unwrap();
    assert!(rep.slope > -1.3 && rep.slope < -0.7, "{}", rep.slope);
    let ratio = rep.errors[4] / rep.errors[0];
    assert!(ratio > 1e-5 && ratio < 1e-3, "{ratio}");
}

#[test]
fn large_k_reproduces_the_bargmann_composition() {
    let f = TestFunction::random(3, 12);
    let g = build_generators(1.0, 1e8, &SpinRep::new(2)).unwrap();
    let a = GroupPointNR::new(GroupPointNR::rotation(&v(1.0, 0.0, 1.0), 0.5).r, v(0.2, 0.1, 0.0), v(0.3, -0.2, 0.4), 0.6).unwrap();
    let b = GroupPointNR::new(GroupPointNR::rotation(&v(0.0, 1.0, 0.0), -0.3).r, v(-0.1, 0.2, 0.1), v(0.5, 0.0, -0.2), 0.9).unwrap();
    assert!(composition_defect_at(&g, &a, &b, &f).unwrap() < 1e-7);
}
