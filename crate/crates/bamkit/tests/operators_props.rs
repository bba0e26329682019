//! Property tests for the operator expression tree: algebraic identities of
//! the constructors and the semantics of the sampled property checker.

mod common;

use bamkit::numkit::Vector;
use bamkit::operators::{
    check_property, conjugate_shift, OperatorExpr, PropKind, SampleSpec,
};
use bamkit::sets::ConvexSet;
use common::{origin_subspace, rand_vec, rng, unit_ball, vec2};

#[test]
fn affine_reflectors_are_involutions() {
    let mut rng = rng(0x5EF1);
    for _ in 0..10 {
        let sub = origin_subspace(&mut rng, 4, 2);
        let r = OperatorExpr::reflector(ConvexSet::Affine(sub));
        for _ in 0..100 {
            let x = rand_vec(&mut rng, 4, 5.0);
            let back = r.eval(&r.eval(&x).unwrap()).unwrap();
            assert!(x.dist(&back) <= 1e-10 * (1.0 + x.norm()));
        }
    }
}

#[test]
fn composition_is_associative() {
    let mut rng = rng(0xA550);
    let a = OperatorExpr::projector(ConvexSet::Affine(origin_subspace(&mut rng, 3, 2)));
    let b = OperatorExpr::reflector(ConvexSet::Affine(origin_subspace(&mut rng, 3, 1)));
    let c = OperatorExpr::projector(unit_ball(3));

    let left = OperatorExpr::compose(vec![
        OperatorExpr::compose(vec![a.clone(), b.clone()]).unwrap(),
        c.clone(),
    ])
    .unwrap();
    let right = OperatorExpr::compose(vec![
        a.clone(),
        OperatorExpr::compose(vec![b.clone(), c.clone()]).unwrap(),
    ])
    .unwrap();
    let flat = OperatorExpr::compose(vec![a, b, c]).unwrap();

    for _ in 0..200 {
        let x = rand_vec(&mut rng, 3, 4.0);
        let l = left.eval(&x).unwrap();
        let r = right.eval(&x).unwrap();
        let f = flat.eval(&x).unwrap();
        assert!(l.dist(&r) <= 1e-12 * (1.0 + x.norm()));
        assert!(l.dist(&f) <= 1e-12 * (1.0 + x.norm()));
    }
}

#[test]
fn composition_applies_right_to_left() {
    // First clamp to the nonnegative quadrant, then drop to the x-axis.
    let axis = OperatorExpr::projector(ConvexSet::linear(
        bamkit::sets::LinearSubspace::from_spanning(&[vec2(1.0, 0.0)]).unwrap(),
    ));
    let quad = OperatorExpr::projector(ConvexSet::orthant(2).unwrap());
    let chain = OperatorExpr::compose(vec![axis, quad]).unwrap();
    let out = chain.eval(&vec2(-3.0, 2.0)).unwrap();
    assert!(out.dist(&vec2(0.0, 0.0)) <= 1e-12);
}

#[test]
fn degenerate_convex_combination_is_exact() {
    let mut rng = rng(0xC0B0);
    let base = OperatorExpr::reflector(ConvexSet::Affine(origin_subspace(&mut rng, 3, 2)));
    let other = OperatorExpr::projector(unit_ball(3));
    let combo =
        OperatorExpr::convex_combo(vec![1.0, 0.0], vec![base.clone(), other]).unwrap();
    for _ in 0..100 {
        let x = rand_vec(&mut rng, 3, 4.0);
        assert_eq!(combo.eval(&x).unwrap().entries(), base.eval(&x).unwrap().entries());
    }
}

#[test]
fn averaging_interpolates_toward_the_identity() {
    let mut rng = rng(0xAE01);
    let base = OperatorExpr::projector(unit_ball(2));
    let half = OperatorExpr::averaged(base.clone(), 0.5).unwrap();
    let frozen = OperatorExpr::averaged(base.clone(), 1.0).unwrap();
    for _ in 0..100 {
        let x = rand_vec(&mut rng, 2, 4.0);
        let expected = x.add(&base.eval(&x).unwrap()).scale(0.5);
        assert!(half.eval(&x).unwrap().dist(&expected) <= 1e-12 * (1.0 + x.norm()));
        assert!(frozen.eval(&x).unwrap().dist(&x) <= 1e-12 * (1.0 + x.norm()));
    }
}

#[test]
fn opposite_shifts_cancel() {
    let mut rng = rng(0x5417);
    let base = OperatorExpr::projector(unit_ball(3));
    let z = rand_vec(&mut rng, 3, 2.0);
    let shifted = conjugate_shift(base.clone(), z.clone()).unwrap();
    let restored = conjugate_shift(shifted, z.scale(-1.0)).unwrap();
    for _ in 0..100 {
        let x = rand_vec(&mut rng, 3, 4.0);
        let a = restored.eval(&x).unwrap();
        let b = base.eval(&x).unwrap();
        assert!(a.dist(&b) <= 1e-12 * (1.0 + x.norm()));
    }
}

#[test]
fn shifted_projector_projects_onto_the_shifted_set() {
    // Conjugation by z evaluates G(x + z) - z, so the fixed set moves by -z.
    let ball = unit_ball(2);
    let z = vec2(3.0, 1.0);
    let shifted = conjugate_shift(OperatorExpr::projector(ball.clone()), z.clone()).unwrap();
    let direct = OperatorExpr::projector(ball.translate(&z.scale(-1.0)).unwrap());
    let mut rng = rng(0x5418);
    for _ in 0..200 {
        let x = rand_vec(&mut rng, 2, 6.0);
        let a = shifted.eval(&x).unwrap();
        let b = direct.eval(&x).unwrap();
        assert!(a.dist(&b) <= 1e-12 * (1.0 + x.norm()));
    }
}

#[test]
fn property_checker_accepts_the_ball_projector() {
    let op = OperatorExpr::projector(unit_ball(2));
    let spec = SampleSpec::new(7, 400, Vector::zeros(2), 5.0).unwrap();
    let report = check_property(&op, PropKind::Nonexpansive, None, &spec).unwrap();
    assert!(report.passed);
    assert!(!report.refutation_only);
    assert!(report.worst_ratio <= 1.0 + 1e-9);

    // The worst witness pair really achieves the reported ratio.
    let w = report.witness.expect("sampled checks record a witness");
    let num = op.eval(&w.x).unwrap().dist(&op.eval(&w.y).unwrap());
    let den = w.x.dist(&w.y);
    assert!((num / den - w.ratio).abs() <= 1e-9);
}

#[test]
fn property_checker_refutes_an_expansion() {
    let doubling = OperatorExpr::linear(
        bamkit::numkit::Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap(),
    )
    .unwrap();
    let spec = SampleSpec::new(11, 200, Vector::zeros(2), 3.0).unwrap();
    let report = check_property(&doubling, PropKind::Nonexpansive, None, &spec).unwrap();
    assert!(!report.passed);
    assert!(report.worst_ratio > 1.0 + 1e-9);
    let w = report.witness.expect("refutations carry a witness");
    assert!(w.ratio > 1.0 + 1e-9);
}

#[test]
fn strict_quasi_check_is_refutation_only() {
    let ball = unit_ball(2);
    let op = OperatorExpr::projector(ball.clone());
    let spec = SampleSpec::new(3, 300, Vector::zeros(2), 5.0).unwrap();
    let report =
        check_property(&op, PropKind::StrictlyQuasinonexpansive, Some(&ball), &spec).unwrap();
    assert!(report.passed);
    assert!(report.refutation_only, "strict inequality can only be refuted by samples");

    // A reflector preserves distances to the mirror, refuting strictness.
    let mirror = ConvexSet::linear(
        bamkit::sets::LinearSubspace::from_spanning(&[vec2(1.0, 0.0)]).unwrap(),
    );
    let refl = OperatorExpr::reflector(mirror.clone());
    let report =
        check_property(&refl, PropKind::StrictlyQuasinonexpansive, Some(&mirror), &spec)
            .unwrap();
    assert!(!report.passed);
}

#[test]
fn isometry_check_separates_rotations_from_projections() {
    let theta: f64 = 1.1;
    let rot = OperatorExpr::linear(
        bamkit::numkit::Matrix::from_rows(&[
            vec![theta.cos(), -theta.sin()],
            vec![theta.sin(), theta.cos()],
        ])
        .unwrap(),
    )
    .unwrap();
    let spec = SampleSpec::new(5, 300, Vector::zeros(2), 5.0).unwrap();
    assert!(check_property(&rot, PropKind::Isometry, None, &spec).unwrap().passed);

    let proj = OperatorExpr::projector(unit_ball(2));
    assert!(!check_property(&proj, PropKind::Isometry, None, &spec).unwrap().passed);
}

#[test]
fn quasinonexpansive_needs_the_fixed_set() {
    let ball = unit_ball(2);
    let op = OperatorExpr::projector(ball.clone());
    let spec = SampleSpec::new(9, 300, Vector::zeros(2), 5.0).unwrap();
    assert!(check_property(&op, PropKind::Quasinonexpansive, None, &spec).is_err());
    let report =
        check_property(&op, PropKind::Quasinonexpansive, Some(&ball), &spec).unwrap();
    assert!(report.passed);
    assert!(report.worst_ratio <= 1.0 + 1e-9);
}
