//! Shared fixtures for the integration suites: seeded randomness, random
//! subspaces, independently derived projection oracles, and the matrix of
//! theorem-built certificates that the rate-law tests iterate.

#![allow(dead_code)]

use bamkit::bam::{self, BamCertificate, ProductSpaceSpec};
use bamkit::circumcenter::{crm_certificate, SuiteKind};
use bamkit::numkit::{Matrix, Vector};
use bamkit::operators::OperatorExpr;
use bamkit::sets::{AffineSubspace, Ball, ConvexSet, LinearSubspace};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vec2(a: f64, b: f64) -> Vector {
    Vector::new(vec![a, b]).expect("finite entries")
}

pub fn vecn(entries: &[f64]) -> Vector {
    Vector::new(entries.to_vec()).expect("finite entries")
}

pub fn rand_vec(rng: &mut ChaCha8Rng, dim: usize, half_width: f64) -> Vector {
    let entries: Vec<f64> =
        (0..dim).map(|_| (rng.random::<f64>() * 2.0 - 1.0) * half_width).collect();
    Vector::new(entries).expect("finite entries")
}

/// Random subspace of the requested dimension; random spans are full rank
/// almost surely, and the construction is retried otherwise.
pub fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize, dim: usize) -> LinearSubspace {
    loop {
        let cols: Vec<Vector> = (0..dim).map(|_| rand_vec(rng, ambient, 1.0)).collect();
        let sub = LinearSubspace::from_spanning(&cols).expect("finite spans");
        if sub.dim() == dim {
            return sub;
        }
    }
}

pub fn origin_subspace(rng: &mut ChaCha8Rng, ambient: usize, dim: usize) -> AffineSubspace {
    AffineSubspace::new(Vector::zeros(ambient), random_subspace(rng, ambient, dim))
        .expect("consistent dims")
}

// ── independent projection oracles ──────────────────────────────────────────

/// Projection onto the quarter disk (nonnegative orthant of the plane capped
/// at radius `rho`), by enumerating every stationary-point candidate of the
/// distance: the point itself, the face clamps, the arc point, the corners,
/// and the clamped arc point.
pub fn quarter_disk_oracle(x: &Vector, rho: f64) -> Vector {
    let (a, b) = (x.entry(0), x.entry(1));
    let clamp = |t: f64| t.clamp(0.0, rho);
    let mut candidates = vec![
        vec2(a, b),
        vec2(clamp(a), 0.0),
        vec2(0.0, clamp(b)),
        vec2(0.0, 0.0),
        vec2(rho, 0.0),
        vec2(0.0, rho),
        vec2(clamp(a), clamp(b)),
    ];
    if x.norm() > 0.0 {
        candidates.push(x.scale(rho / x.norm()));
    }
    let c = vec2(a.max(0.0), b.max(0.0));
    if c.norm() > 0.0 {
        candidates.push(c.scale(rho / c.norm()));
    }
    let feasible = |p: &Vector| {
        p.entry(0) >= -1e-12 && p.entry(1) >= -1e-12 && p.norm() <= rho + 1e-12
    };
    best_candidate(x, candidates.into_iter().filter(feasible))
}

/// Projection onto the intersection of two disks in the plane, by candidate
/// enumeration: the point itself, each single-disk projection when it lands
/// in the other disk, and the two circle crossing corners.
pub fn lens_oracle(x: &Vector, c1: &Vector, r1: f64, c2: &Vector, r2: f64) -> Vector {
    let project_disk = |x: &Vector, c: &Vector, r: f64| {
        let v = x.sub(c);
        if v.norm() <= r {
            x.clone()
        } else {
            c.add(&v.scale(r / v.norm()))
        }
    };
    let in_disk = |p: &Vector, c: &Vector, r: f64| p.dist(c) <= r + 1e-12;

    let mut candidates = Vec::new();
    if in_disk(x, c1, r1) && in_disk(x, c2, r2) {
        candidates.push(x.clone());
    }
    let p1 = project_disk(x, c1, r1);
    if in_disk(&p1, c2, r2) {
        candidates.push(p1);
    }
    let p2 = project_disk(x, c2, r2);
    if in_disk(&p2, c1, r1) {
        candidates.push(p2);
    }
    // Circle crossing points.
    let d = c2.dist(c1);
    assert!(d > 0.0 && d <= r1 + r2, "disks must overlap");
    let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - along * along;
    if h2 >= 0.0 {
        let h = h2.sqrt();
        let dir = c2.sub(c1).scale(1.0 / d);
        let perp = vec2(-dir.entry(1), dir.entry(0));
        let mid = c1.add(&dir.scale(along));
        candidates.push(mid.axpy(h, &perp));
        candidates.push(mid.axpy(-h, &perp));
    }
    best_candidate(x, candidates.into_iter())
}

fn best_candidate(x: &Vector, candidates: impl Iterator<Item = Vector>) -> Vector {
    candidates
        .min_by(|p, q| x.dist(p).partial_cmp(&x.dist(q)).expect("finite distances"))
        .expect("at least one feasible candidate")
}

/// Brute-force planar projection: scan an `n` by `n` grid over the bounding
/// box and keep the nearest feasible node. Accuracy is the grid spacing.
pub fn grid_project(
    x: &Vector,
    lo: (f64, f64),
    hi: (f64, f64),
    n: usize,
    feasible: impl Fn(f64, f64) -> bool,
) -> Vector {
    let mut best: Option<(f64, Vector)> = None;
    for i in 0..n {
        let a = lo.0 + (hi.0 - lo.0) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let b = lo.1 + (hi.1 - lo.1) * j as f64 / (n - 1) as f64;
            if feasible(a, b) {
                let p = vec2(a, b);
                let d = x.dist(&p);
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, p));
                }
            }
        }
    }
    best.expect("grid contains feasible nodes").1
}

// ── the theorem-certificate matrix ──────────────────────────────────────────

/// One rate-law test case: an operator together with a certificate whose
/// factor comes from a closed-form theorem, not from sampling.
pub struct MatrixEntry {
    pub label: &'static str,
    pub op: OperatorExpr,
    pub cert: BamCertificate,
}

fn rotation3(theta: f64, phi: f64) -> Matrix {
    let (c1, s1) = (theta.cos(), theta.sin());
    let (c2, s2) = (phi.cos(), phi.sin());
    let g12 = Matrix::from_rows(&[
        vec![c1, -s1, 0.0],
        vec![s1, c1, 0.0],
        vec![0.0, 0.0, 1.0],
    ])
    .expect("rotation rows");
    let g13 = Matrix::from_rows(&[
        vec![c2, 0.0, -s2],
        vec![0.0, 1.0, 0.0],
        vec![s2, 0.0, c2],
    ])
    .expect("rotation rows");
    g12.mul(&g13)
}

/// Averaged symmetric map with spectrum {1, 0.6, 0.25} in rotated axes; the
/// certified factor is 0.6.
pub fn averaged_entry() -> MatrixEntry {
    let q = rotation3(0.3, 0.7);
    let d = Matrix::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.6, 0.0],
        vec![0.0, 0.0, 0.25],
    ])
    .expect("diagonal rows");
    let a = q.mul(&d).mul(&q.transpose());
    let cert = bam::from_averaged_linear(&a).expect("averaged spectrum");
    MatrixEntry { label: "averaged linear", op: OperatorExpr::linear(a).expect("square"), cert }
}

/// Chain of three random-subspace projectors in five dimensions, certified
/// by folding the two-map composition constant.
pub fn chain_entry(rng: &mut ChaCha8Rng) -> MatrixEntry {
    let subs: Vec<AffineSubspace> = [3, 3, 2]
        .iter()
        .map(|&d| origin_subspace(rng, 5, d))
        .collect();
    let certs: Vec<BamCertificate> = subs
        .iter()
        .map(|s| bam::projector_certificate(ConvexSet::Affine(s.clone())).expect("projector"))
        .collect();
    let (cert, _) = bam::compose_chain(&certs, &subs).expect("chain over intersecting spans");
    let ops: Vec<OperatorExpr> = subs
        .iter()
        .rev()
        .map(|s| OperatorExpr::projector(ConvexSet::Affine(s.clone())))
        .collect();
    MatrixEntry {
        label: "projector chain",
        op: OperatorExpr::compose(ops).expect("nonempty"),
        cert,
    }
}

/// Weighted blend of three random-subspace projectors in three dimensions,
/// certified through the product-space angle.
pub fn combined_entry(rng: &mut ChaCha8Rng) -> MatrixEntry {
    let subs: Vec<AffineSubspace> = [2, 2, 1]
        .iter()
        .map(|&d| origin_subspace(rng, 3, d))
        .collect();
    let certs: Vec<BamCertificate> = subs
        .iter()
        .map(|s| bam::projector_certificate(ConvexSet::Affine(s.clone())).expect("projector"))
        .collect();
    let weights = vec![0.5, 0.3, 0.2];
    let spec = ProductSpaceSpec::new(weights.clone(), 3).expect("unit weights");
    let cert = bam::combine_n_product(&certs, &spec).expect("intersecting spans");
    let ops: Vec<OperatorExpr> = subs
        .iter()
        .map(|s| OperatorExpr::projector(ConvexSet::Affine(s.clone())))
        .collect();
    MatrixEntry {
        label: "weighted projector blend",
        op: OperatorExpr::convex_combo(weights, ops).expect("unit weights"),
        cert,
    }
}

/// Power set and symmetrized suites over two random planes of R^5 with the
/// closed-form product rate.
pub fn suite_entries(rng: &mut ChaCha8Rng) -> Vec<MatrixEntry> {
    let subs = vec![origin_subspace(rng, 5, 3), origin_subspace(rng, 5, 3)];
    [
        ("power set suite", SuiteKind::PowerSetProducts),
        ("symmetrized suite", SuiteKind::SymmetricProduct),
    ]
    .into_iter()
    .map(|(label, kind)| {
        let cert = crm_certificate(&subs, kind).expect("closed-form rate");
        let suite =
            bamkit::circumcenter::build_reflection_suite(&subs, kind).expect("suite builds");
        MatrixEntry { label, op: OperatorExpr::circumcenter_of(suite), cert }
    })
    .collect()
}

pub fn theorem_matrix(rng: &mut ChaCha8Rng) -> Vec<MatrixEntry> {
    let mut entries = vec![averaged_entry(), chain_entry(rng), combined_entry(rng)];
    entries.extend(suite_entries(rng));
    entries
}

pub fn unit_ball(dim: usize) -> ConvexSet {
    ConvexSet::ball(Vector::zeros(dim), 1.0).expect("positive radius")
}

pub fn two_disks() -> (Ball, Ball) {
    (
        Ball::new(vec2(-1.0, 0.0), 2.0).expect("positive radius"),
        Ball::new(vec2(1.0, 0.0), 2.0).expect("positive radius"),
    )
}
