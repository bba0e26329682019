//! Property tests for the convex-set catalog: idempotence, the variational
//! characterization of nearest points, complements, nesting, translation,
//! and an exhaustive grid cross-check of the two-disk projector.

mod common;

use bamkit::numkit::{Vector, DEFAULT_RANK_TOL};
use bamkit::sets::{friedrichs_cosine, AffineSubspace, ConvexSet, LinearSubspace};
use common::{grid_project, rand_vec, random_subspace, rng, two_disks, vec2};
use rand_chacha::ChaCha8Rng;

/// One representative of every variant, all in the plane.
fn catalog() -> Vec<ConvexSet> {
    let line = LinearSubspace::from_spanning(&[vec2(1.0, 1.0)]).unwrap();
    let (b1, b2) = two_disks();
    vec![
        ConvexSet::affine(vec2(1.0, 0.0), line).unwrap(),
        ConvexSet::ball(vec2(0.5, -0.5), 1.5).unwrap(),
        ConvexSet::orthant(2).unwrap(),
        ConvexSet::singleton(vec2(0.3, 0.7)),
        ConvexSet::two_ball_intersection(b1, b2).unwrap(),
        ConvexSet::segment(vec2(-1.0, -1.0), vec2(2.0, 0.5)).unwrap(),
        ConvexSet::orthant_ball(2, 1.5).unwrap(),
    ]
}

fn samples(rng: &mut ChaCha8Rng, count: usize, half_width: f64) -> Vec<Vector> {
    (0..count).map(|_| rand_vec(rng, 2, half_width)).collect()
}

#[test]
fn projections_are_idempotent_and_feasible() {
    let mut rng = rng(0xA11);
    for set in catalog() {
        for x in samples(&mut rng, 1000, 6.0) {
            let p = set.project(&x).unwrap();
            let pp = set.project(&p).unwrap();
            assert!(
                p.dist(&pp) <= 1e-10,
                "{set:?}: projection moved a projected point by {}",
                p.dist(&pp)
            );
            assert!(set.contains(&p, 1e-9).unwrap(), "{set:?}: projection left the set");
        }
    }
}

#[test]
fn nearest_point_satisfies_the_variational_inequality() {
    let mut rng = rng(0xB22);
    for set in catalog() {
        for x in samples(&mut rng, 100, 6.0) {
            let p = set.project(&x).unwrap();
            let gap = x.sub(&p);
            // Feasible points are manufactured by projecting raw samples.
            for c_raw in samples(&mut rng, 100, 6.0) {
                let c = set.project(&c_raw).unwrap();
                let inner = gap.dot(&c.sub(&p));
                assert!(
                    inner <= 1e-9 * (1.0 + x.norm()),
                    "{set:?}: <x - Px, c - Px> = {inner} > 0"
                );
            }
        }
    }
}

#[test]
fn complement_projections_sum_to_the_identity() {
    let mut rng = rng(0xC33);
    for _ in 0..20 {
        let m = random_subspace(&mut rng, 5, 2);
        let mc = m.complement();
        assert_eq!(m.dim() + mc.dim(), 5);
        for _ in 0..50 {
            let x = rand_vec(&mut rng, 5, 3.0);
            let recombined = m.project(&x).add(&mc.project(&x));
            assert!(x.dist(&recombined) <= 1e-10 * (1.0 + x.norm()));
        }
    }
}

#[test]
fn nested_affine_projections_commute_and_collapse() {
    let mut rng = rng(0xD44);
    for _ in 0..20 {
        let outer_par = random_subspace(&mut rng, 5, 3);
        let inner_par =
            LinearSubspace::from_spanning(&outer_par.basis().columns()[..2]).unwrap();
        let anchor = rand_vec(&mut rng, 5, 2.0);
        let outer = AffineSubspace::new(anchor.clone(), outer_par).unwrap();
        let inner = AffineSubspace::new(anchor, inner_par).unwrap();

        for _ in 0..50 {
            let x = rand_vec(&mut rng, 5, 4.0);
            let a = inner.project(&outer.project(&x));
            let b = outer.project(&inner.project(&x));
            let direct = inner.project(&x);
            assert!(a.dist(&direct) <= 1e-9, "inner-after-outer disagrees");
            assert!(b.dist(&direct) <= 1e-9, "outer-after-inner disagrees");
        }
    }
}

#[test]
fn translation_conjugates_the_projection() {
    let mut rng = rng(0xE55);
    for set in catalog() {
        let z = rand_vec(&mut rng, 2, 3.0);
        let shifted = match set.translate(&z) {
            Ok(s) => s,
            // Cones anchored at the origin are not closed under translation.
            Err(_) => {
                assert!(matches!(
                    set,
                    ConvexSet::Orthant { .. } | ConvexSet::OrthantBall(_)
                ));
                continue;
            }
        };
        for x in samples(&mut rng, 200, 6.0) {
            let lhs = shifted.project(&x).unwrap();
            let rhs = set.project(&x.sub(&z)).unwrap().add(&z);
            assert!(lhs.dist(&rhs) <= 1e-10 * (1.0 + x.norm()));
        }
    }
}

#[test]
fn friedrichs_cosine_is_symmetric_and_bounded() {
    let mut rng = rng(0xF66);
    for _ in 0..25 {
        let u = random_subspace(&mut rng, 6, 3);
        let v = random_subspace(&mut rng, 6, 2);
        let uv = friedrichs_cosine(&u, &v, DEFAULT_RANK_TOL).unwrap();
        let vu = friedrichs_cosine(&v, &u, DEFAULT_RANK_TOL).unwrap();
        assert!((uv.cosine - vu.cosine).abs() <= 1e-12, "asymmetric angle");
        assert_eq!(uv.dim_intersection, vu.dim_intersection);
        assert!((0.0..=1.0).contains(&uv.cosine));
        // Generic 3+2 in dimension 6 meets only at the origin.
        assert_eq!(uv.dim_intersection, 0);
        assert!(uv.cosine < 1.0 - 1e-6, "generic spans should not touch");
    }
}

#[test]
fn perpendicular_and_shared_direction_angles_are_extreme() {
    let e = |i| Vector::unit(3, i);
    let u = LinearSubspace::from_spanning(&[e(0)]).unwrap();
    let v = LinearSubspace::from_spanning(&[e(1)]).unwrap();
    let r = friedrichs_cosine(&u, &v, DEFAULT_RANK_TOL).unwrap();
    assert!(r.cosine.abs() <= 1e-12);

    // A shared line is excluded from the angle; the leftover directions of
    // these two planes are again perpendicular.
    let u2 = LinearSubspace::from_spanning(&[e(0), e(2)]).unwrap();
    let v2 = LinearSubspace::from_spanning(&[e(1), e(2)]).unwrap();
    let r2 = friedrichs_cosine(&u2, &v2, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(r2.dim_intersection, 1);
    assert!(r2.cosine.abs() <= 1e-12);
}

#[test]
fn two_disk_projector_matches_a_brute_force_grid() {
    let (b1, b2) = two_disks();
    let lens = ConvexSet::two_ball_intersection(b1.clone(), b2.clone()).unwrap();
    let feasible = |a: f64, b: f64| {
        let p = vec2(a, b);
        p.dist(b1.center()) <= b1.radius() && p.dist(b2.center()) <= b2.radius()
    };
    let n = 2001;
    let spacing = 4.0 / (n - 1) as f64;

    let mut rng = rng(0x6D1D);
    for _ in 0..20 {
        let x = rand_vec(&mut rng, 2, 8.0);
        let exact = lens.project(&x).unwrap();
        assert!(lens.contains(&exact, 1e-9).unwrap());
        let coarse = grid_project(&x, (-2.0, -2.0), (2.0, 2.0), n, feasible);

        // The projector must beat every feasible grid node, and the grid
        // minimum certifies the projector's distance up to grid resolution.
        let exact_dist = x.dist(&exact);
        let grid_dist = x.dist(&coarse);
        assert!(
            exact_dist <= grid_dist + 1e-12,
            "a grid node at {grid_dist} beats the projector at {exact_dist}"
        );
        assert!(
            grid_dist <= exact_dist + 2.0 * spacing,
            "grid minimum {grid_dist} cannot confirm projector distance {exact_dist}"
        );
    }
}
