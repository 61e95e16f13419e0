use nalgebra::DMatrix;
use proptest::prelude::*;

use super::*;
use crate::multilinear::VectorMap;
use crate::sample;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn e(point: &ContactNordenPoint, i: usize) -> Vector {
    point.basis(i)
}

#[test]
fn standard_point_satisfies_axioms() {
    for n in 1..=3 {
        let r = validate_contact_axioms(&ContactNordenPoint::standard(n), &tol());
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn identity_metric_fails() {
    let p = ContactNordenPoint::standard(1);
    let bad = ContactNordenPoint::new(
        1,
        BilinearForm::identity(3),
        p.phi().clone(),
        p.xi().clone(),
        p.eta().clone(),
    )
    .unwrap();
    let r = validate_contact_axioms(&bad, &tol());
    assert!(!r.passed());
    assert!(!r.get("norden_compatibility").unwrap().passed);
    assert!(!r.get("signature").unwrap().passed);
}

#[test]
fn constructor_rejects_shapes() {
    let p = ContactNordenPoint::standard(1);
    let err = ContactNordenPoint::new(
        2,
        p.g().clone(),
        p.phi().clone(),
        p.xi().clone(),
        p.eta().clone(),
    );
    assert_eq!(
        err,
        Err(Error::DimensionMismatch {
            expected: 5,
            got: 3
        })
    );
}

#[test]
fn congruence_keeps_axioms() {
    let mut rng = sample::rng(11);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        assert!(validate_contact_axioms(&p, &tol()).passed());
    }
}

#[test]
fn associated_metric_of_standard_point() {
    let p = ContactNordenPoint::standard(1);
    let gt = associated_metric(&p);
    let want = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    assert!(max_abs(&(gt.matrix() - want)) < 1e-15);
    assert_eq!(gt.apply(p.xi(), p.xi()), 1.0);
    assert_eq!(signature(&gt, &tol()), Ok((2, 1)));
}

#[test]
fn associated_metric_compatibility() {
    let mut rng = sample::rng(5);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let gt = associated_metric(&p);
        let phi = p.phi().matrix();
        let eta = p.eta();
        let res = phi.transpose() * gt.matrix() * phi + gt.matrix() - eta * eta.transpose();
        assert!(max_abs(&res) < 1e-9);
        assert!(gt.symmetry_residual() < 1e-9);
        assert_eq!(signature(&gt, &tol()), Ok((n + 1, n)));
    }
}

#[test]
fn pi_values_on_standard_point() {
    let p = ContactNordenPoint::standard(1);
    let (e1, e2) = (e(&p, 0), e(&p, 1));
    let p1 = pi(1, &p).unwrap();
    assert_eq!(p1.evaluate(&[&e1, &e2, &e2, &e1]).unwrap(), -1.0);
    let p2 = pi(2, &p).unwrap();
    assert_eq!(p2.evaluate(&[&e1, &e2, &e2, &e1]).unwrap(), -1.0);
    assert_eq!(pi(6, &p), Err(Error::BadIndex(6)));
    assert_eq!(pi(0, &p), Err(Error::BadIndex(0)));

    let mut rng = sample::rng(3);
    let p = ContactNordenPoint::standard(2);
    let p4 = pi(4, &p).unwrap();
    let p5 = pi(5, &p).unwrap();
    for _ in 0..10 {
        let h: Vec<Vector> = (0..4)
            .map(|_| sample::random_horizontal(&mut rng, &p))
            .collect();
        assert!(p4.evaluate(&[&h[0], &h[1], &h[2], &h[3]]).unwrap().abs() < 1e-14);
        // pi5(xi, x, xi, u) = -g(x, phi u) on ker eta
        let (x, u) = (&h[0], &h[1]);
        let lhs = p5.evaluate(&[p.xi(), x, p.xi(), u]).unwrap();
        let gxphiu = p.g().apply(x, &p.phi().apply(u));
        assert!((lhs + gxphiu).abs() < 1e-14);
    }
}

#[test]
fn pi_tensors_are_curvature_like_and_kaehler_combinations() {
    let mut rng = sample::rng(21);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let all = PiTensors::new(&p);
        for t in [&all.p1, &all.p2, &all.p3, &all.p4, &all.p5] {
            assert!(is_curvature_like(t) < 1e-9);
        }
        assert!(is_curvature_like(&all.kaehler_a()) < 1e-9);
        assert!(kaehler_residual(&all.kaehler_a(), &p) < 1e-9);
        assert!(kaehler_residual(&all.kaehler_b(), &p) < 1e-9);
        assert!(kaehler_residual(&all.p1, &p) > 0.1);
    }
}

#[test]
fn g_tensor_g_is_not_curvature_like() {
    let p = ContactNordenPoint::standard(1);
    let g = p.g().matrix().clone();
    let t = MultilinearForm::from_fn(4, 3, |ix| g[(ix[0], ix[1])] * g[(ix[2], ix[3])]).unwrap();
    assert!(is_curvature_like(&t) > 0.5);
}

#[test]
fn sectional_curvatures() {
    let p = ContactNordenPoint::standard(1);
    let (e1, e2, xi) = (e(&p, 0), e(&p, 1), e(&p, 2));
    let p1 = pi(1, &p).unwrap();
    let mut rng = sample::rng(8);
    for _ in 0..5 {
        let x = sample::uniform_vector(&mut rng, 3);
        let y = sample::uniform_vector(&mut rng, 3);
        assert!((sectional_curvature(&p1, &p, &x, &y, &tol()).unwrap() - 1.0).abs() < 1e-12);
    }
    let a = PiTensors::new(&p).kaehler_a();
    // pi1 = -1, pi2 = -1 and pi4 = 0 on {e1, e2}
    assert!((sectional_curvature(&a, &p, &e1, &e2, &tol()).unwrap() - 0.0).abs() < 1e-14);
    assert!(matches!(
        sectional_curvature(&p1, &p, &xi, &xi, &tol()),
        Err(Error::DegenerateSection(_))
    ));
    let k = assoc_sectional_curvature(&p1, &p, &e1, &e2, &tol()).unwrap();
    let direct = p1.evaluate(&[&e1, &e2, &e2, &p.phi().apply(&e1)]).unwrap() / -1.0;
    assert!((k - direct).abs() < 1e-15);
}

#[test]
fn classify_examples() {
    let t = tol();
    let p = ContactNordenPoint::standard(1);
    let (e1, xi) = (e(&p, 0), e(&p, 2));
    assert_eq!(
        classify_section(&p, &xi, &e1, &t),
        Ok(SectionKind::XiSection)
    );
    let pv = p.phi().apply(&e1);
    let ppv = p.phi().apply(&pv);
    assert_eq!(
        classify_section(&p, &pv, &ppv, &t),
        Ok(SectionKind::PhiHolomorphic)
    );
    assert_eq!(
        classify_section(&p, &e1, &e1, &t),
        Err(Error::DependentVectors)
    );

    let p2 = ContactNordenPoint::standard(2);
    let (a, b) = (e(&p2, 0), e(&p2, 2));
    assert_eq!(
        classify_section(&p2, &a, &b, &t),
        Ok(SectionKind::TotallyReal)
    );
    let c = &b + p2.phi().apply(&a) * 2.0;
    assert_eq!(classify_section(&p2, &a, &c, &t), Ok(SectionKind::Generic));
    // e1 + e2 is null for diag(1, -1, ..)
    let null = &e(&p2, 0) + &e(&p2, 1);
    let other = &e(&p2, 2) + &e(&p2, 3);
    assert_eq!(
        classify_section(&p2, &null, &other, &t),
        Ok(SectionKind::Degenerate)
    );
}

#[test]
fn one_forms_of_class_forms() {
    let p = ContactNordenPoint::standard(1);
    let zero = FTensor::zeros(3).unwrap();
    let of = one_forms(&zero, &p);
    assert_eq!(of.theta_xi, 0.0);
    assert!(of.omega.iter().all(|v| *v == 0.0));

    let mut rng = sample::rng(2);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let c = 1.7;
        let f = class_form(
            ClassTag::F4,
            &p,
            &OneForms::from_scalars(&p, c, 0.0, &Vector::zeros(p.dim())),
        )
        .unwrap();
        let of = one_forms(&f, &p);
        assert!((of.theta_xi - c).abs() < 1e-9);
        assert!(of.theta_star_xi.abs() < 1e-9);
        assert!(of.omega.iter().all(|v| v.abs() < 1e-9));

        let f = class_form(
            ClassTag::F5,
            &p,
            &OneForms::from_scalars(&p, 0.0, c, &Vector::zeros(p.dim())),
        )
        .unwrap();
        let of = one_forms(&f, &p);
        assert!(of.theta_xi.abs() < 1e-9);
        assert!((of.theta_star_xi - c).abs() < 1e-9);
    }
}

#[test]
fn class_form_examples() {
    let p = ContactNordenPoint::standard(1);
    let z = Vector::zeros(3);
    let f0 = class_form(ClassTag::F0, &p, &OneForms::zero(&p)).unwrap();
    assert_eq!(f0.form().max_abs(), 0.0);
    let f4 = class_form(ClassTag::F4, &p, &OneForms::from_scalars(&p, 2.0, 0.0, &z)).unwrap();
    assert!((f4.get(0, 0, 2) - 1.0).abs() < 1e-15);
    let omega = p.g().lower(&e(&p, 0));
    let f11 = class_form(
        ClassTag::F11,
        &p,
        &OneForms::from_scalars(&p, 0.0, 0.0, &omega),
    )
    .unwrap();
    assert_eq!(f11.get(2, 2, 0), 1.0);
    assert_eq!(f11.get(2, 2, 1), 0.0);
    assert_eq!(
        class_form(ClassTag::F6, &p, &OneForms::zero(&p)),
        Err(Error::NotConstructive(ClassTag::F6))
    );
}

#[test]
fn class_residual_examples() {
    let mut rng = sample::rng(9);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let z = Vector::zeros(p.dim());
        let f4 = class_form(ClassTag::F4, &p, &OneForms::from_scalars(&p, 3.0, 0.0, &z)).unwrap();
        assert!(class_residual(&f4, &p, ClassTag::F4) < 1e-9);
        assert!(class_residual(&f4, &p, ClassTag::F4F5) < 1e-9);
        assert!(class_residual(&f4, &p, ClassTag::F5) > 1e-3);
        assert!(class_residual(&f4, &p, ClassTag::F6) > 1e-3);

        let zero = FTensor::zeros(p.dim()).unwrap();
        for tag in ClassTag::ALL {
            assert!(class_residual(&zero, &p, tag) < 1e-12);
        }

        let f5 = class_form(ClassTag::F5, &p, &OneForms::from_scalars(&p, 0.0, -1.5, &z)).unwrap();
        let sum = &f4 + &f5;
        assert!(class_residual(&sum, &p, ClassTag::F4F5) < 1e-9);
        for tag in [ClassTag::F4, ClassTag::F5, ClassTag::F6, ClassTag::F11] {
            assert!(class_residual(&sum, &p, tag) > 1e-3, "{tag}");
        }
    }
}

#[test]
fn f6_members() {
    let mut rng = sample::rng(4);
    let p = ContactNordenPoint::standard(1);
    let f = sample::random_f6(&mut rng, &p);
    assert!(f.form().max_abs() < 1e-12);
    for n in 2..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let f = sample::random_f6(&mut rng, &p);
        assert!(f.form().max_abs() > 1e-3);
        assert!(f.symmetry_residual() < 1e-12);
        assert!(class_residual(&f, &p, ClassTag::F6) < 1e-9);
        assert!(class_residual(&f, &p, ClassTag::F4F5) > 1e-3);
        assert!(class_residual(&f, &p, ClassTag::F11) > 1e-3);
        let of = one_forms(&f, &p);
        assert!(of.theta_xi.abs() < 1e-9 && of.theta_star_xi.abs() < 1e-9);
    }
}

#[test]
fn reconstruction_f0_and_f4() {
    let p = ContactNordenPoint::standard(1);
    let zero = FTensor::zeros(3).unwrap();
    assert_eq!(nabla_phi_from_f(&zero, &p).max_abs(), 0.0);
    assert_eq!(
        max_abs(nabla_xi_from_f(&zero, &p, &tol()).unwrap().matrix()),
        0.0
    );
    assert_eq!(
        canonical_difference(&zero, &p, &tol()).unwrap().max_abs(),
        0.0
    );

    let mut rng = sample::rng(31);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let z = Vector::zeros(p.dim());
        let f = class_form(ClassTag::F4, &p, &OneForms::from_scalars(&p, 0.8, 0.0, &z)).unwrap();
        let nphi = nabla_phi_from_f(&f, &p);
        let d = p.dim();
        for (x, y, w) in [(0, 1, 2), (1, 1, 0), (2, 0, d - 1)] {
            let (ex, ey, ew) = (e(&p, x), e(&p, y), e(&p, w));
            let v = nphi.apply(&ex, &ey);
            assert!((p.g().apply(&v, &ew) - f.get(x, y, w)).abs() < 1e-9);
        }
    }
}

#[test]
fn nabla_xi_for_f5() {
    let mut rng = sample::rng(32);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let c = 1.3;
        let z = Vector::zeros(p.dim());
        let f = class_form(ClassTag::F5, &p, &OneForms::from_scalars(&p, 0.0, c, &z)).unwrap();
        let nxi = nabla_xi_from_f(&f, &p, &tol()).unwrap();
        let want = p.phi2().scale(-c / (2.0 * n as f64));
        assert!(max_abs(&(nxi.matrix() - want.matrix())) < 1e-9);
        for x in 0..p.dim() {
            for k in 0..p.dim() {
                let v = nxi.apply(&e(&p, x));
                let lhs = p.g().apply(&v, &p.phi().apply(&e(&p, k)));
                let fx: f64 = (0..p.dim()).map(|l| p.xi()[l] * f.get(x, l, k)).sum();
                assert!((lhs + fx).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn inconsistent_f_is_rejected() {
    let p = ContactNordenPoint::standard(1);
    let mut form = MultilinearForm::zeros(3, 3).unwrap();
    // F(x, xi, xi) != 0 has no solution
    form.set(&[0, 2, 2], 1.0);
    let f = FTensor::new(form).unwrap();
    assert!(matches!(
        nabla_xi_from_f(&f, &p, &tol()),
        Err(Error::Inconsistent(_))
    ));
}

fn f45_display(p: &ContactNordenPoint, th: f64, ths: f64) -> VectorMap {
    let n2 = 2.0 * p.n() as f64;
    let gp = p.g_phi();
    let gpp = p.g_phi_phi();
    let phi = p.phi().matrix();
    let phi2 = p.phi2();
    let (xi, eta) = (p.xi(), p.eta());
    VectorMap::from_fn(p.dim(), |k, i, j| {
        th / n2 * (gp[(i, j)] * xi[k] - eta[j] * phi[(k, i)])
            - ths / n2 * (gpp[(i, j)] * xi[k] - eta[j] * phi2.matrix()[(k, i)])
    })
}

#[test]
fn canonical_difference_f45_matches_display() {
    let mut rng = sample::rng(33);
    for n in 1..=3 {
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let (th, ths) = (0.7, -1.1);
        let f = class_form(
            ClassTag::F4F5,
            &p,
            &OneForms::from_scalars(&p, th, ths, &Vector::zeros(p.dim())),
        )
        .unwrap();
        let t = canonical_difference(&f, &p, &tol()).unwrap();
        assert!(t.max_abs_diff(&f45_display(&p, th, ths)) < 1e-9);
        // T(x, xi) = -nabla_x xi
        let nxi = nabla_xi_from_f(&f, &p, &tol()).unwrap();
        for x in 0..p.dim() {
            let ex = e(&p, x);
            let lhs = t.apply(&ex, p.xi());
            assert!((lhs + nxi.apply(&ex)).amax() < 1e-9);
        }
    }
}

fn section_strategy() -> impl Strategy<Value = (u64, usize, [f64; 4], u8)> {
    (
        any::<u64>(),
        1usize..=3,
        prop::array::uniform4(-2.0f64..2.0),
        0u8..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classify_is_basis_invariant((seed, n, m, kind) in section_strategy()) {
        prop_assume!((m[0] * m[3] - m[1] * m[2]).abs() > 0.2);
        let mut rng = sample::rng(seed);
        let (p, s) = sample::random_contact_point(&mut rng, n);
        let std = ContactNordenPoint::standard(n);
        let d = p.dim();
        // pick a section in the standard basis, then express it in the random basis
        let (x0, y0) = match kind {
            0 => (std.basis(d - 1), std.basis(0)),
            1 => (std.basis(0), std.basis(1)),
            2 if n >= 2 => (std.basis(0), std.basis(2)),
            _ => (sample::uniform_vector(&mut rng, d), sample::uniform_vector(&mut rng, d)),
        };
        let s_inv = s.clone().try_inverse().unwrap();
        let (x, y) = (&s_inv * &x0, &s_inv * &y0);
        let t = tol();
        let k1 = classify_section(&p, &x, &y, &t).unwrap();
        let x2 = &x * m[0] + &y * m[1];
        let y2 = &x * m[2] + &y * m[3];
        let k2 = classify_section(&p, &x2, &y2, &t).unwrap();
        prop_assert_eq!(k1, k2);
        let in_std = classify_section(&std, &x0, &y0, &t).unwrap();
        prop_assert_eq!(k1, in_std);
    }

    #[test]
    fn class_form_round_trip(seed in any::<u64>(), n in 1usize..=3, th in -3.0f64..3.0, ths in -3.0f64..3.0) {
        let mut rng = sample::rng(seed);
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let omega = p.g().lower(&sample::random_horizontal(&mut rng, &p));
        let params = OneForms::from_scalars(&p, th, ths, &omega);
        for tag in [ClassTag::F4, ClassTag::F5, ClassTag::F11, ClassTag::F4F5] {
            let f = class_form(tag, &p, &params).unwrap();
            prop_assert!(f.symmetry_residual() < 1e-9);
            prop_assert!(class_residual(&f, &p, tag) < 1e-8);
            let of = one_forms(&f, &p);
            let (want_th, want_ths) = match tag {
                ClassTag::F4 => (th, 0.0),
                ClassTag::F5 => (0.0, ths),
                ClassTag::F4F5 => (th, ths),
                _ => (0.0, 0.0),
            };
            prop_assert!((of.theta_xi - want_th).abs() < 1e-8);
            prop_assert!((of.theta_star_xi - want_ths).abs() < 1e-8);
            if tag == ClassTag::F11 {
                for (a, b) in of.omega.iter().zip(&params.omega) {
                    prop_assert!((a - b).abs() < 1e-8);
                }
            }
        }
    }
}
