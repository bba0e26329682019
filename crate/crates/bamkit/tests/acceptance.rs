//! Acceptance gate: twelve end-to-end checks, one per test, each pinning a
//! headline quantity of the library to its closed-form value at a stated
//! tolerance. The harness prints one pass/fail line per criterion.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use bamkit::bam::{
    certify_empirical, combine2_constant, compose2_constant, iterate, normal_matrix_bam,
};
use bamkit::circumcenter::{build_reflection_suite, cc_map_point, crm_certificate, map_rate, OperatorSet, SuiteKind};
use bamkit::numkit::{operator_norm, Matrix, Vector, DEFAULT_RANK_TOL};
use bamkit::operators::{OperatorExpr, SampleSpec};
use bamkit::sets::{friedrichs_cosine, AffineSubspace, Ball, ConvexSet, LinearSubspace};
use bamkit::Error;
use common::{origin_subspace, quarter_disk_oracle, rand_vec, random_subspace, rng, theorem_matrix, vec2};

fn span2(a: f64, b: f64) -> LinearSubspace {
    LinearSubspace::from_spanning(&[vec2(a, b)]).unwrap()
}

#[test]
fn criterion_01_angle_between_axis_and_diagonal() {
    let axis = span2(1.0, 0.0);
    let diagonal = span2(1.0, 1.0);
    let result = friedrichs_cosine(&axis, &diagonal, DEFAULT_RANK_TOL).unwrap();
    assert!(
        (result.cosine - FRAC_1_SQRT_2).abs() <= 1e-10,
        "cosine {} is not sqrt(2)/2",
        result.cosine
    );
}

#[test]
fn criterion_02_projection_order_decides_certification() {
    let line = AffineSubspace::new(vec2(0.5, 0.5), span2(1.0, -1.0)).unwrap();
    let cone = ConvexSet::orthant(2).unwrap();
    let fix = ConvexSet::segment(vec2(0.0, 1.0), vec2(1.0, 0.0)).unwrap();
    let p_line = OperatorExpr::projector(ConvexSet::Affine(line));
    let p_cone = OperatorExpr::projector(cone);

    // Cone first, then line: refuted, with a witness hugging the line but
    // outside the cone.
    let cone_then_line =
        OperatorExpr::compose(vec![p_line.clone(), p_cone.clone()]).unwrap();
    let slab = SampleSpec::new(7, 2000, vec2(-0.5, -0.5), 0.4).unwrap();
    let outcome = certify_empirical(&cone_then_line, &fix, &slab).unwrap();
    let violation = outcome.violation().expect("the wrong order must be refuted");
    let (w1, w2) = (violation.witness.entry(0), violation.witness.entry(1));
    assert!(
        w1 - 1.0 < w2 && w2 < w1 + 1.0,
        "witness ({w1}, {w2}) left the slab around the line"
    );
    assert!(w1 < 0.0 || w2 < 0.0, "witness ({w1}, {w2}) is inside the cone");

    // Line first, then cone: certified at the angle cosine.
    let line_then_cone = OperatorExpr::compose(vec![p_cone, p_line]).unwrap();
    let wide = SampleSpec::new(7, 100_000, Vector::zeros(2), 10.0).unwrap();
    let outcome = certify_empirical(&line_then_cone, &fix, &wide).unwrap();
    let gamma = outcome.certificate().expect("the right order certifies").gamma;
    assert!(
        (gamma - FRAC_1_SQRT_2).abs() <= 1e-3,
        "factor {gamma} is not sqrt(2)/2 within 1e-3"
    );
}

#[test]
fn criterion_03_cone_then_ball_is_the_capped_cone_projector() {
    let cone = ConvexSet::orthant(2).unwrap();
    let ball = ConvexSet::ball(Vector::zeros(2), 1.0).unwrap();
    let cap = ConvexSet::orthant_ball(2, 1.0).unwrap();

    let spec = SampleSpec::new(5, 2000, Vector::zeros(2), 3.0).unwrap();
    for x in spec.samples() {
        let composed = ball.project(&cone.project(&x).unwrap()).unwrap();
        let oracle = quarter_disk_oracle(&x, 1.0);
        assert!(
            composed.dist(&oracle) <= 1e-9,
            "composition {composed:?} misses the nearest cap point {oracle:?} at {x:?}"
        );
        assert!(composed.dist(&cap.project(&x).unwrap()) <= 1e-9);
    }

    // The reversed order at the canonical witness: ball first lands on
    // (1/sqrt(2), 0) after the full triple, not on the cap's nearest point.
    let triple = OperatorExpr::compose(vec![
        OperatorExpr::projector(cap),
        OperatorExpr::projector(cone),
        OperatorExpr::projector(ball),
    ])
    .unwrap();
    let image = triple.eval(&vec2(1.0, -1.0)).unwrap();
    assert!(
        image.dist(&vec2(FRAC_1_SQRT_2, 0.0)) <= 1e-9,
        "triple sent (1,-1) to {image:?}"
    );
}

#[test]
fn criterion_04_double_projection_misses_the_lens_target() {
    let c1 = vec2(-1.0, 0.0);
    let c2 = vec2(1.0, 0.0);
    let k1 = ConvexSet::ball(c1.clone(), 2.0).unwrap();
    let k2 = ConvexSet::ball(c2.clone(), 2.0).unwrap();
    let lens = ConvexSet::two_ball_intersection(
        Ball::new(c1.clone(), 2.0).unwrap(),
        Ball::new(c2.clone(), 2.0).unwrap(),
    )
    .unwrap();

    let mut tested = 0usize;
    for i1 in 0..40 {
        let x1 = -4.0 + 0.1 * i1 as f64;
        for i2 in 0..30 {
            let x2 = 0.1 + 0.1 * i2 as f64;
            let x = vec2(x1, x2);
            // Points on a disk boundary are fixed by that disk's projector,
            // which closes the gap; the scan keeps a standoff from both.
            if x.dist(&c1) <= 2.2 || x.dist(&c2) <= 2.2 {
                continue;
            }
            tested += 1;
            let through = lens
                .project(&k2.project(&k1.project(&x).unwrap()).unwrap())
                .unwrap();
            let direct = lens.project(&x).unwrap();
            assert!(
                through.dist(&direct) > 1e-3,
                "double projection reached the target at ({x1}, {x2})"
            );
        }
    }
    assert!(tested > 500, "standoff filtered out too much of the grid ({tested} left)");
}

#[test]
fn criterion_05_blend_factor_is_the_larger_weight() {
    let p_u = OperatorExpr::projector(ConvexSet::linear(span2(1.0, 0.0)));
    let p_v = OperatorExpr::projector(ConvexSet::linear(span2(0.0, 1.0)));
    let fixed = ConvexSet::singleton(Vector::zeros(2));
    let spec = SampleSpec::new(7, 20_000, Vector::zeros(2), 2.0).unwrap();

    for alpha in [0.25, 0.5, 0.75] {
        let blend = OperatorExpr::convex_combo(
            vec![alpha, 1.0 - alpha],
            vec![p_u.clone(), p_v.clone()],
        )
        .unwrap();
        let outcome = certify_empirical(&blend, &fixed, &spec).unwrap();
        let gamma = outcome.certificate().expect("blends of projectors certify").gamma;
        let sharp = alpha.max(1.0 - alpha);
        assert!(
            (gamma - sharp).abs() <= 1e-6,
            "weight {alpha}: factor {gamma} is not {sharp} within 1e-6"
        );
        let bound = combine2_constant(0.0, 0.0, 0.0, alpha).unwrap();
        assert!(
            bound > sharp,
            "weight {alpha}: closed-form bound {bound} fails to exceed the sharp {sharp}"
        );
    }
}

#[test]
fn criterion_06_composition_factors_swap_at_the_critical_point() {
    let critical = 3f64.sqrt() / 3.0;
    let mut flips = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..1000 {
        let gamma = k as f64 * 1e-3;
        let c = compose2_constant(gamma, gamma, 0.0).unwrap();
        let diff = c.s - c.r;
        if let Some((prev_gamma, prev_diff)) = prev {
            if diff.signum() != prev_diff.signum() {
                flips.push((prev_gamma, gamma));
            }
        }
        prev = Some((gamma, diff));
    }
    assert_eq!(flips.len(), 1, "expected one sign change, saw {flips:?}");
    let (lo, hi) = flips[0];
    assert!(
        lo < critical && critical < hi,
        "sign change at ({lo}, {hi}) does not bracket sqrt(3)/3 = {critical}"
    );
}

#[test]
fn criterion_07_alternating_lines_contract_at_the_angle_cosine() {
    let mut rng = rng(0x11E5);
    for _ in 0..3 {
        let l1 = random_subspace(&mut rng, 2, 1);
        let l2 = random_subspace(&mut rng, 2, 1);
        let c_f = friedrichs_cosine(&l1, &l2, DEFAULT_RANK_TOL).unwrap().cosine;

        let op = OperatorExpr::compose(vec![
            OperatorExpr::projector(ConvexSet::linear(l2)),
            OperatorExpr::projector(ConvexSet::linear(l1)),
        ])
        .unwrap();
        let fixed = ConvexSet::singleton(Vector::zeros(2));
        let spec = SampleSpec::new(13, 100_000, Vector::zeros(2), 5.0).unwrap();
        let outcome = certify_empirical(&op, &fixed, &spec).unwrap();
        let gamma = outcome.certificate().expect("line alternation certifies").gamma;
        assert!(
            (gamma - c_f).abs() <= 1e-4,
            "sampled factor {gamma} is not the cosine {c_f} within 1e-4"
        );
        assert!(
            gamma <= (1.0 + c_f) / 2.0,
            "sampled factor {gamma} beats the closed-form bound {}",
            (1.0 + c_f) / 2.0
        );
    }
}

#[test]
fn criterion_08_certified_rates_bound_thirty_step_traces() {
    let mut rng = rng(0x8E17);
    for entry in theorem_matrix(&mut rng) {
        let dim = entry.op.dim();
        for start in 0..10 {
            let x0 = rand_vec(&mut rng, dim, 5.0);
            let trace = iterate(&entry.op, &entry.cert, &x0, 30).unwrap();
            let e0 = trace.errors[0];
            let converged = 1e-12 * (1.0 + e0);
            for (k, err) in trace.errors.iter().enumerate() {
                let bound = entry.cert.gamma.powi(k as i32) * e0 * (1.0 + 1e-9);
                assert!(
                    *err <= bound || *err <= converged,
                    "{}: start {start} step {k}: error {err} over bound {bound}",
                    entry.label
                );
            }
        }
    }
}

#[test]
fn criterion_09_suite_rates_match_the_product_norm() {
    let mut rng = rng(0x9A7E);
    let subs: Vec<AffineSubspace> = [4, 3, 3]
        .iter()
        .map(|&d| origin_subspace(&mut rng, 6, d))
        .collect();
    let pars: Vec<LinearSubspace> = subs.iter().map(|s| s.par().clone()).collect();
    let rate = map_rate(&pars).unwrap();
    let power = crm_certificate(&subs, SuiteKind::PowerSetProducts).unwrap();
    assert!(
        (power.gamma - rate).abs() <= 1e-10,
        "power-set rate {} is not the product norm {rate}",
        power.gamma
    );

    let pair = vec![origin_subspace(&mut rng, 6, 3), origin_subspace(&mut rng, 6, 3)];
    let pair_pars: Vec<LinearSubspace> = pair.iter().map(|s| s.par().clone()).collect();
    let pair_rate = map_rate(&pair_pars).unwrap();
    let symmetric = crm_certificate(&pair, SuiteKind::SymmetricProduct).unwrap();
    assert!(
        (symmetric.gamma - pair_rate * pair_rate).abs() <= 1e-10,
        "symmetric rate {} is not the squared product norm {}",
        symmetric.gamma,
        pair_rate * pair_rate
    );

    for (subspaces, kind, cert) in [
        (&subs, SuiteKind::PowerSetProducts, power),
        (&pair, SuiteKind::SymmetricProduct, symmetric),
    ] {
        let suite = build_reflection_suite(subspaces, kind).unwrap();
        let op = OperatorExpr::circumcenter_of(suite);
        for _ in 0..10 {
            let x0 = rand_vec(&mut rng, 6, 5.0);
            let trace = iterate(&op, &cert, &x0, 25).unwrap();
            for (k, ratio) in trace.bound_ratios.iter().enumerate() {
                assert!(
                    *ratio <= 1.0 + 1e-9,
                    "{kind:?}: step {k} breaks the decay bound ({ratio})"
                );
            }
        }
    }
}

#[test]
fn criterion_10_circumcenters_recover_projection_midpoint_and_collapse() {
    let mut rng = rng(0xACC0);

    // {Id, R_U} averages a point with its mirror image: the projection.
    let sub = origin_subspace(&mut rng, 4, 2);
    let suite = OperatorSet::new(vec![
        OperatorExpr::identity(4).unwrap(),
        OperatorExpr::reflector(ConvexSet::Affine(sub.clone())),
    ])
    .unwrap();
    for _ in 0..1000 {
        let x = rand_vec(&mut rng, 4, 5.0);
        let cc = cc_map_point(&suite, &x, None).unwrap();
        assert!(
            cc.dist(&sub.project(&x)) <= 1e-10,
            "circumcenter of the two-point orbit is not the projection"
        );
    }

    // Any two-operator orbit has its midpoint as circumcenter.
    let r1 = OperatorExpr::reflector(ConvexSet::Affine(origin_subspace(&mut rng, 4, 2)));
    let r2 = OperatorExpr::reflector(ConvexSet::Affine(origin_subspace(&mut rng, 4, 1)));
    let two = OperatorSet::new(vec![r1.clone(), r2.clone()]).unwrap();
    for _ in 0..1000 {
        let x = rand_vec(&mut rng, 4, 5.0);
        let cc = cc_map_point(&two, &x, None).unwrap();
        let midpoint = r1.eval(&x).unwrap().add(&r2.eval(&x).unwrap()).scale(0.5);
        assert!(cc.dist(&midpoint) <= 1e-12 * (1.0 + x.norm()));
    }

    // Two overlapping reflector families: the sandwich collapses the plane
    // onto the common point of all three mirrors.
    let u1 = AffineSubspace::through_origin(span2(1.0, 0.0));
    let u2 = AffineSubspace::through_origin(span2(1.0, 1.0));
    let u3 = AffineSubspace::through_origin(span2(0.0, 1.0));
    let s1 = build_reflection_suite(&[u1, u2.clone()], SuiteKind::AllReflectors).unwrap();
    let s2 = build_reflection_suite(&[u2, u3], SuiteKind::AllReflectors).unwrap();
    let spec = SampleSpec::new(11, 1000, Vector::zeros(2), 2.0).unwrap();
    for x in spec.samples() {
        let y = cc_map_point(&s1, &x, None).unwrap();
        let y = cc_map_point(&s2, &y, None).unwrap();
        let y = cc_map_point(&s1, &y, None).unwrap();
        assert!(y.norm() <= 1e-9, "sandwich left {x:?} at {y:?}, not the origin");
    }
}

#[test]
fn criterion_11_normal_matrices_certify_by_spectrum() {
    let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.5]]).unwrap();
    let cert = normal_matrix_bam(&a, 1e-12).unwrap();
    assert!((cert.gamma - 0.5).abs() <= 1e-12, "factor {} is not 0.5", cert.gamma);

    // Twenty applications approach the fixed-line projector at the
    // certified geometric speed.
    let mut power = Matrix::identity(2);
    for _ in 0..20 {
        power = a.mul(&power);
    }
    let fix = cert.affine_fixed_set().unwrap();
    let drift = operator_norm(&power.sub(&fix.par().projector_matrix()), 1e-13);
    assert!(
        drift <= 0.5f64.powi(20) + 1e-12,
        "A^20 is {drift} from the projector, over {}",
        0.5f64.powi(20)
    );

    // A rotation is normal but its only fixed point sees no contraction.
    let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
    match normal_matrix_bam(&rot, 1e-12) {
        Err(Error::SpectrumRejected { modulus, .. }) => {
            assert!((modulus - 1.0).abs() <= 1e-9, "rejected modulus {modulus} is not 1");
        }
        other => panic!("quarter turn was not rejected by spectrum: {other:?}"),
    }
}

#[test]
fn criterion_12_certificates_imply_regularity_and_descent() {
    let mut rng = rng(0x12E6);
    for entry in theorem_matrix(&mut rng) {
        let dim = entry.op.dim();
        let gamma = entry.cert.gamma;
        let kappa = entry.cert.kappa;
        let fix = &entry.cert.fixed_set;
        let anchors: Vec<Vector> = (0..20)
            .map(|_| fix.project(&rand_vec(&mut rng, dim, 5.0)).unwrap())
            .collect();

        for _ in 0..200 {
            let x = rand_vec(&mut rng, dim, 5.0);
            let px = fix.project(&x).unwrap();
            let gx = entry.op.eval(&x).unwrap();
            let d = x.dist(&px);

            // Linear regularity: the residual controls the distance.
            assert!(
                d <= kappa * x.dist(&gx) + 1e-9,
                "{}: distance {d} escapes kappa {kappa} times residual {}",
                entry.label,
                x.dist(&gx)
            );

            // Quadratic descent toward every fixed point.
            let slack = (1.0 - gamma * gamma) * d * d;
            for y in &anchors {
                let lhs = gx.dist(y).powi(2) + slack;
                let rhs = x.dist(y).powi(2) + 1e-9;
                assert!(
                    lhs <= rhs,
                    "{}: descent fails at an anchor: {lhs} > {rhs}",
                    entry.label
                );
            }
        }
    }
}
