//! Packaged examples. Each entry rebuilds a small configuration from scratch,
//! recomputes its numbers, and compares them against expectations that were
//! worked out by hand; `bamkit repro <id>` prints one line per check.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use crate::bam::{self, compose2_constant, combine2_constant};
use crate::circumcenter::{
    build_reflection_suite, cc_map_point, crm_certificate, map_rate, suite_certificate,
    AssemblyMode, SuiteKind,
};
use crate::numkit::{Matrix, Vector};
use crate::operators::{OperatorExpr, SampleSpec};
use crate::sets::{AffineSubspace, Ball, ConvexSet, LinearSubspace};

use super::report::{fmt_float, Json};
use super::{CliError, ReproArgs};

// ── check rows ──────────────────────────────────────────────────────────────

/// One verified quantity: what it should be, what it came out as, and how
/// much slack the comparison allowed.
pub struct CheckRow {
    pub description: String,
    pub expected: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    /// `measured` must land within `tol` of `expected`.
    fn approx(description: &str, expected: f64, measured: f64, tol: f64) -> Self {
        let pass = measured.is_finite() && (measured - expected).abs() <= tol;
        Self { description: description.into(), expected, measured, tolerance: tol, pass }
    }

    /// `measured` must be strictly greater than `threshold`.
    fn exceeds(description: &str, threshold: f64, measured: f64) -> Self {
        let pass = measured.is_finite() && measured > threshold;
        Self { description: description.into(), expected: threshold, measured, tolerance: 0.0, pass }
    }

    /// A yes/no condition, recorded as 1 or 0.
    fn yes(description: &str, ok: bool) -> Self {
        Self {
            description: description.into(),
            expected: 1.0,
            measured: f64::from(u8::from(ok)),
            tolerance: 0.0,
            pass: ok,
        }
    }
}

pub struct ReproReport {
    pub example_id: String,
    pub checks: Vec<CheckRow>,
    pub overall: bool,
}

impl ReproReport {
    fn new(example_id: &str, checks: Vec<CheckRow>) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        Self { example_id: example_id.into(), checks, overall }
    }

    pub fn json(&self) -> Json {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                Json::obj(vec![
                    ("description", Json::str(c.description.clone())),
                    ("expected", Json::Num(c.expected)),
                    ("measured", Json::Num(c.measured)),
                    ("tolerance", Json::Num(c.tolerance)),
                    ("pass", Json::Bool(c.pass)),
                ])
            })
            .collect();
        Json::obj(vec![
            ("version", Json::Int(1)),
            ("example_id", Json::str(self.example_id.clone())),
            ("overall", Json::Bool(self.overall)),
            ("checks", Json::Arr(checks)),
        ])
    }
}

// ── registry ────────────────────────────────────────────────────────────────

pub const REGISTRY: &[(&str, &str)] = &[
    ("line-cone", "a line and the nonnegative cone: one projection order contracts, the other drifts"),
    ("cone-ball", "cone and unit ball: one composition order is exactly the capped-cone projector"),
    ("two-balls", "two overlapping disks: the double projection lands feasibly but off target"),
    ("alpha-PU", "blends of two orthogonal line projectors: sharp factor is the larger weight"),
    ("comp-constants", "the two closed-form composition factors and where their order flips"),
    ("bam-pro", "relaxations of a ball projector: the averaged map keeps its factor, overshoot breaks it"),
    ("not-linear-regular", "the ball reflector fixes the ball but scrambles projections onto it"),
    ("ccs1-ccs2", "two reflection families whose circumcenter maps compose to the zero map"),
    ("t2t1", "two rank-one linear maps whose product vanishes identically"),
    ("map-rate", "closed-form contraction rate for the power set suite over two lines"),
    ("symmetric-rate", "the symmetrized product suite contracts at the squared rate"),
    ("counterexam-discontinuity", "a circumcenter map that contracts yet is discontinuous and non-additive"),
];

fn print_registry() {
    eprintln!("available examples:");
    for (id, blurb) in REGISTRY {
        eprintln!("  {id:<26} {blurb}");
    }
}

fn print_report(report: &ReproReport) {
    println!("example {}", report.example_id);
    for c in &report.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "  {tag}  {}  expected {} measured {} tol {}",
            c.description,
            fmt_float(c.expected),
            fmt_float(c.measured),
            fmt_float(c.tolerance)
        );
    }
    println!(
        "{}: {} ({} checks)",
        report.example_id,
        if report.overall { "PASS" } else { "FAIL" },
        report.checks.len()
    );
}

fn write_report(out: Option<&Path>, report: &ReproReport) -> Result<(), CliError> {
    let Some(dir) = out else { return Ok(()) };
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(format!("repro-{}.json", report.example_id));
    std::fs::write(&path, report.json().to_pretty())
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

pub fn run_command(args: &ReproArgs) -> Result<u8, CliError> {
    if args.all {
        let mut all_ok = true;
        for (id, _) in REGISTRY {
            let report = run(id)?;
            print_report(&report);
            write_report(args.out.as_deref(), &report)?;
            all_ok &= report.overall;
        }
        return Ok(u8::from(!all_ok));
    }
    let Some(id) = args.id.as_deref() else {
        eprintln!("missing example id (or pass --all)");
        print_registry();
        return Ok(2);
    };
    if !REGISTRY.iter().any(|(known, _)| *known == id) {
        eprintln!("unknown example \"{id}\"");
        print_registry();
        return Ok(2);
    }
    let report = run(id)?;
    print_report(&report);
    write_report(args.out.as_deref(), &report)?;
    Ok(u8::from(!report.overall))
}

pub fn run(id: &str) -> Result<ReproReport, CliError> {
    match id {
        "line-cone" => line_cone(),
        "cone-ball" => cone_ball(),
        "two-balls" => two_balls(),
        "alpha-PU" => alpha_pu(),
        "comp-constants" => comp_constants(),
        "bam-pro" => bam_pro(),
        "not-linear-regular" => not_linear_regular(),
        "ccs1-ccs2" => ccs1_ccs2(),
        "t2t1" => t2t1(),
        "map-rate" => map_rate_example(),
        "symmetric-rate" => symmetric_rate(),
        "counterexam-discontinuity" => counterexam_discontinuity(),
        other => Err(CliError::Parse(format!("unknown example \"{other}\""))),
    }
}

// ── fixtures ────────────────────────────────────────────────────────────────

fn v2(a: f64, b: f64) -> Vector {
    Vector::new(vec![a, b]).expect("finite entries")
}

fn span2(a: f64, b: f64) -> LinearSubspace {
    LinearSubspace::from_spanning(&[v2(a, b)]).expect("nonzero direction")
}

fn origin_line(a: f64, b: f64) -> AffineSubspace {
    AffineSubspace::new(Vector::zeros(2), span2(a, b)).expect("consistent dims")
}

// ── the examples ────────────────────────────────────────────────────────────

/// The line `x2 = -x1 + 1` against the nonnegative cone. Projecting onto the
/// line first gives a contraction toward the feasible segment at the angle
/// cosine `sqrt(2)/2`; projecting onto the cone first moves points whose
/// segment projection should stay put.
fn line_cone() -> Result<ReproReport, CliError> {
    let u = AffineSubspace::new(v2(0.5, 0.5), span2(1.0, -1.0))?;
    let cone = ConvexSet::orthant(2)?;
    let fix = ConvexSet::segment(v2(0.0, 1.0), v2(1.0, 0.0))?;
    let p_u = OperatorExpr::projector(ConvexSet::Affine(u));
    let p_k = OperatorExpr::projector(cone);

    // Rightmost factor acts first: cone, then line.
    let cone_then_line = OperatorExpr::compose(vec![p_u.clone(), p_k.clone()])?;
    let slab = SampleSpec::new(7, 2000, v2(-0.5, -0.5), 0.4)?;
    let outcome = bam::certify_empirical(&cone_then_line, &fix, &slab)?;
    let mut checks =
        vec![CheckRow::yes("cone-then-line is refuted by sampling", !outcome.is_certified())];
    let witness_ok = outcome.violation().is_some_and(|v| {
        let (w1, w2) = (v.witness.entry(0), v.witness.entry(1));
        w1 - 1.0 < w2 && w2 < w1 + 1.0 && (w1 < 0.0 || w2 < 0.0)
    });
    checks.push(CheckRow::yes(
        "the witness lies in the open slab around the line, outside the cone",
        witness_ok,
    ));

    let line_then_cone = OperatorExpr::compose(vec![p_k, p_u])?;
    let wide = SampleSpec::new(7, 100_000, Vector::zeros(2), 10.0)?;
    let outcome = bam::certify_empirical(&line_then_cone, &fix, &wide)?;
    let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
    checks.push(CheckRow::approx(
        "line-then-cone contracts at the angle cosine",
        FRAC_1_SQRT_2,
        measured,
        1e-3,
    ));
    Ok(ReproReport::new("line-cone", checks))
}

/// The nonnegative cone against the unit ball. Cone first, then ball, is
/// exactly the projector onto their intersection; the reversed order is not
/// even compatible with that projector.
fn cone_ball() -> Result<ReproReport, CliError> {
    let cone = ConvexSet::orthant(2)?;
    let ball = ConvexSet::ball(Vector::zeros(2), 1.0)?;
    let cap = ConvexSet::orthant_ball(2, 1.0)?;
    let spec = SampleSpec::new(5, 2000, Vector::zeros(2), 3.0)?;

    let mut worst = 0.0f64;
    for x in spec.samples() {
        let composed = ball.project(&cone.project(&x)?)?;
        worst = worst.max(composed.dist(&cap.project(&x)?));
    }
    let mut checks = vec![CheckRow::approx(
        "cone-then-ball equals the capped-cone projector on every sample",
        0.0,
        worst,
        1e-9,
    )];

    let x = v2(1.0, -1.0);
    let triple = cap.project(&cone.project(&ball.project(&x)?)?)?;
    checks.push(CheckRow::approx(
        "ball, cone, then cap sends (1,-1) to (1/sqrt(2), 0)",
        0.0,
        triple.dist(&v2(FRAC_1_SQRT_2, 0.0)),
        1e-9,
    ));

    let ball_then_cone = OperatorExpr::compose(vec![
        OperatorExpr::projector(cone),
        OperatorExpr::projector(ball),
    ])?;
    let outcome = bam::certify_empirical(&ball_then_cone, &cap, &spec)?;
    checks.push(CheckRow::yes("ball-then-cone is refuted by sampling", !outcome.is_certified()));
    Ok(ReproReport::new("cone-ball", checks))
}

/// Two disks of radius 2 centered at (-1, 0) and (1, 0). For starting points
/// outside both disks in the upper left, projecting through both disks lands
/// inside the lens but visibly away from the direct lens projection.
fn two_balls() -> Result<ReproReport, CliError> {
    let c1 = v2(-1.0, 0.0);
    let c2 = v2(1.0, 0.0);
    let k1 = ConvexSet::ball(c1.clone(), 2.0)?;
    let k2 = ConvexSet::ball(c2.clone(), 2.0)?;
    let lens = ConvexSet::two_ball_intersection(Ball::new(c1.clone(), 2.0)?, Ball::new(c2.clone(), 2.0)?)?;

    let mut tested = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut max_feasibility = 0.0f64;
    let mut i1 = 0;
    while i1 < 40 {
        let x1 = -4.0 + 0.1 * i1 as f64;
        let mut i2 = 0;
        while i2 < 30 {
            let x2 = 0.1 + 0.1 * i2 as f64;
            let x = v2(x1, x2);
            // Points on a disk boundary are fixed by that disk's projector,
            // which closes the gap; keep a standoff from both disks so the
            // uniform lower bound is meaningful.
            if x.dist(&c1) > 2.2 && x.dist(&c2) > 2.2 {
                tested += 1;
                let through = k2.project(&k1.project(&x)?)?;
                let direct = lens.project(&x)?;
                min_gap = min_gap.min(through.dist(&direct));
                max_feasibility = max_feasibility.max(through.dist(&lens.project(&through)?));
            }
            i2 += 1;
        }
        i1 += 1;
    }

    let checks = vec![
        CheckRow::exceeds("grid points outside both disks were scanned", 0.0, tested as f64),
        CheckRow::exceeds(
            "the double projection always misses the direct lens projection",
            1e-3,
            min_gap,
        ),
        CheckRow::approx(
            "the double projection still lands inside the lens",
            0.0,
            max_feasibility,
            1e-9,
        ),
    ];
    Ok(ReproReport::new("two-balls", checks))
}

/// Blends `alpha P_U + (1 - alpha) P_V` of the projectors onto the two axes.
/// The sampled contraction factor toward the origin is the larger weight,
/// strictly better than the closed-form combination bound.
fn alpha_pu() -> Result<ReproReport, CliError> {
    let p_u = OperatorExpr::projector(ConvexSet::linear(span2(1.0, 0.0)));
    let p_v = OperatorExpr::projector(ConvexSet::linear(span2(0.0, 1.0)));
    let fixed = ConvexSet::singleton(Vector::zeros(2));
    let spec = SampleSpec::new(7, 20_000, Vector::zeros(2), 2.0)?;

    let mut checks = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        let op = OperatorExpr::convex_combo(vec![alpha, 1.0 - alpha], vec![p_u.clone(), p_v.clone()])?;
        let outcome = bam::certify_empirical(&op, &fixed, &spec)?;
        let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
        let sharp = alpha.max(1.0 - alpha);
        checks.push(CheckRow::approx(
            &format!("the blend with weight {alpha} contracts at the larger weight"),
            sharp,
            measured,
            1e-6,
        ));
        let bound = combine2_constant(0.0, 0.0, 0.0, alpha)?;
        checks.push(CheckRow::exceeds(
            &format!("the closed-form bound at weight {alpha} is strictly conservative"),
            sharp,
            bound,
        ));
    }
    Ok(ReproReport::new("alpha-PU", checks))
}

/// The two closed-form composition factors for equal input factors at a right
/// angle: which of the two is smaller flips exactly once, at `sqrt(3)/3`.
fn comp_constants() -> Result<ReproReport, CliError> {
    let at_zero = compose2_constant(0.0, 0.0, 0.0)?;
    let mut checks = vec![
        CheckRow::approx("first factor for two exact projectors at a right angle", FRAC_1_SQRT_2, at_zero.r, 1e-15),
        CheckRow::approx("second factor for two exact projectors at a right angle", 0.5, at_zero.s, 1e-15),
        CheckRow::approx("the smaller factor is chosen", at_zero.s, at_zero.chosen, 0.0),
    ];

    // With an exact second map the second factor never loses.
    let mut min_margin = f64::INFINITY;
    for i in 0..100 {
        for j in 0..100 {
            let gamma1 = 0.01 * i as f64;
            let c_f = 0.01 * j as f64;
            let c = compose2_constant(gamma1, 0.0, c_f)?;
            min_margin = min_margin.min(c.r - c.s);
        }
    }
    checks.push(CheckRow::exceeds(
        "with an exact second map the second factor stays below the first",
        0.0,
        min_margin,
    ));

    // Equal factors, right angle: scan for the first grid point where the
    // order flips.
    let mut flip = f64::NAN;
    let mut flips = 0usize;
    let mut prev_second_wins = false;
    for k in 0..1000 {
        let gamma = 1e-3 * k as f64;
        let c = compose2_constant(gamma, gamma, 0.0)?;
        let second_wins = c.s >= c.r;
        if second_wins && !prev_second_wins {
            flips += 1;
            if flip.is_nan() {
                flip = gamma;
            }
        }
        prev_second_wins = second_wins;
    }
    checks.push(CheckRow::approx(
        "the order flips at sqrt(3)/3 for equal factors",
        3.0_f64.sqrt() / 3.0,
        flip,
        1e-3,
    ));
    checks.push(CheckRow::approx("the order flips exactly once", 1.0, flips as f64, 0.0));
    Ok(ReproReport::new("comp-constants", checks))
}

/// Relaxations of the unit-ball projector. The averaged map keeps the
/// relaxation weight as its contraction factor; overshooting past the
/// projection breaks compatibility with the ball projector even though the
/// overshot point is a fixed point of it.
fn bam_pro() -> Result<ReproReport, CliError> {
    let ball = ConvexSet::ball(Vector::zeros(2), 1.0)?;
    let spec = SampleSpec::new(7, 2000, Vector::zeros(2), 2.0)?;

    let averaged = OperatorExpr::averaged(OperatorExpr::projector(ball.clone()), 0.3)?;
    let outcome = bam::certify_empirical(&averaged, &ball, &spec)?;
    let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
    let mut checks = vec![CheckRow::approx(
        "the 0.3-averaged projector contracts at exactly 0.3",
        0.3,
        measured,
        1e-6,
    )];

    let projector = OperatorExpr::projector(ball.clone());
    let outcome = bam::certify_empirical(&projector, &ball, &spec)?;
    let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
    checks.push(CheckRow::approx("the plain projector contracts at factor zero", 0.0, measured, 1e-12));

    let full = ConvexSet::linear(LinearSubspace::full(2));
    let outcome = bam::certify_empirical(&OperatorExpr::identity(2)?, &full, &spec)?;
    let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
    checks.push(CheckRow::approx(
        "the identity contracts at factor zero toward the whole plane",
        0.0,
        measured,
        1e-12,
    ));

    // Overshoot by eps = 0.5: g = 1.5 P(x) - 0.5 x at x = (1.5, 0).
    let x = v2(1.5, 0.0);
    let p = ball.project(&x)?;
    let g = p.scale(1.5).axpy(-0.5, &x);
    let drift = ball.project(&g)?.dist(&ball.project(&x)?);
    checks.push(CheckRow::approx(
        "overshooting by 0.5 drags the ball projection of the image off by 0.25",
        0.25,
        drift,
        1e-12,
    ));
    checks.push(CheckRow::approx(
        "the overshot point already sits inside the ball",
        0.0,
        g.dist(&ball.project(&g)?),
        1e-12,
    ));
    Ok(ReproReport::new("bam-pro", checks))
}

/// The reflector across the unit ball fixes the ball, and reflection always
/// doubles the distance to it, yet projecting its image back onto the ball
/// disagrees with projecting the original point.
fn not_linear_regular() -> Result<ReproReport, CliError> {
    let ball = ConvexSet::ball(Vector::zeros(2), 1.0)?;
    let reflector = OperatorExpr::reflector(ball.clone());
    let spec = SampleSpec::new(3, 2000, Vector::zeros(2), 2.0)?;

    let r = reflector.eval(&v2(2.0, 0.0))?;
    let mut checks = vec![
        CheckRow::approx(
            "reflecting (2,0) across the ball lands on the origin",
            0.0,
            ball.project(&r)?.norm(),
            1e-12,
        ),
        CheckRow::approx(
            "projecting (2,0) onto the ball lands on (1,0)",
            0.0,
            ball.project(&v2(2.0, 0.0))?.dist(&v2(1.0, 0.0)),
            1e-12,
        ),
    ];

    let outcome = bam::certify_empirical(&reflector, &ball, &spec)?;
    checks.push(CheckRow::yes("the ball reflector is refuted by sampling", !outcome.is_certified()));

    let mut worst = 0.0f64;
    for x in spec.samples() {
        let rx = reflector.eval(&x)?;
        let d = x.dist(&ball.project(&x)?);
        worst = worst.max((x.dist(&rx) - 2.0 * d).abs());
    }
    checks.push(CheckRow::approx(
        "reflection doubles the distance to the ball on every sample",
        0.0,
        worst,
        1e-9,
    ));
    Ok(ReproReport::new("not-linear-regular", checks))
}

/// Reflection families over the axis, the diagonal, and the vertical axis.
/// Their circumcenter maps hit closed-form values, and chaining the two
/// families annihilates every point.
fn ccs1_ccs2() -> Result<ReproReport, CliError> {
    let u1 = origin_line(1.0, 0.0);
    let u2 = origin_line(1.0, 1.0);
    let u3 = origin_line(0.0, 1.0);
    let s1 = build_reflection_suite(&[u1, u2.clone()], SuiteKind::AllReflectors)?;
    let s2 = build_reflection_suite(&[u2, u3], SuiteKind::AllReflectors)?;

    let cases = [
        (&s1, v2(2.0, 0.0), v2(1.0, 1.0), "the first family sends (2,0) to (1,1)"),
        (&s1, v2(1.5, 1.5), v2(1.5, 0.0), "the first family sends (1.5,1.5) to (1.5,0)"),
        (&s1, v2(0.3, 1.7), v2(0.0, 0.0), "the first family sends (0.3,1.7) to the origin"),
        (&s2, v2(1.0, 1.0), v2(0.0, 1.0), "the second family sends (1,1) to (0,1)"),
        (&s2, v2(0.0, 2.0), v2(1.0, 1.0), "the second family sends (0,2) to (1,1)"),
        (&s2, v2(2.0, -0.7), v2(0.0, 0.0), "the second family sends (2,-0.7) to the origin"),
    ];
    let mut checks = Vec::new();
    for (suite, x, want, what) in cases {
        let got = cc_map_point(suite, &x, None)?;
        checks.push(CheckRow::approx(what, 0.0, got.dist(&want), 1e-12));
    }

    let spec = SampleSpec::new(11, 500, Vector::zeros(2), 2.0)?;
    let mut worst = 0.0f64;
    for x in spec.samples() {
        let y = cc_map_point(&s1, &x, None)?;
        let y = cc_map_point(&s2, &y, None)?;
        let y = cc_map_point(&s1, &y, None)?;
        worst = worst.max(y.norm());
    }
    checks.push(CheckRow::approx(
        "chaining the families collapses every sample to the origin",
        0.0,
        worst,
        1e-9,
    ));

    let (_, cert) = crate::circumcenter::cc_compose_combine(&[s1, s2], &AssemblyMode::Compose)?;
    let fix = cert.affine_fixed_set()?;
    checks.push(CheckRow::yes(
        "the composed certificate pins the fixed set to the origin",
        fix.dim() == 0 && fix.anchor().norm() <= 1e-12,
    ));
    Ok(ReproReport::new("ccs1-ccs2", checks))
}

/// Two halved coordinate projections. Neither is idempotent, yet their
/// product is identically zero, so the composition is the exact projector
/// onto the origin.
fn t2t1() -> Result<ReproReport, CliError> {
    let t1 = OperatorExpr::linear(Matrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]])?)?;
    let t2 = OperatorExpr::linear(Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.5]])?)?;

    let x = v2(2.0, 0.0);
    let once = t1.eval(&x)?;
    let twice = t1.eval(&once)?;
    let mut checks = vec![CheckRow::approx(
        "the first map is not idempotent at (2,0)",
        0.5,
        twice.dist(&once),
        1e-12,
    )];
    let y = v2(0.0, 2.0);
    let once = t2.eval(&y)?;
    let twice = t2.eval(&once)?;
    checks.push(CheckRow::approx(
        "the second map is not idempotent at (0,2)",
        0.5,
        twice.dist(&once),
        1e-12,
    ));

    let spec = SampleSpec::new(13, 500, Vector::zeros(2), 2.0)?;
    let mut worst = 0.0f64;
    for x in spec.samples() {
        worst = worst.max(t2.eval(&t1.eval(&x)?)?.norm());
    }
    checks.push(CheckRow::approx("their product annihilates every sample", 0.0, worst, 1e-15));

    let composed = OperatorExpr::compose(vec![t2, t1])?;
    let fixed = ConvexSet::singleton(Vector::zeros(2));
    let outcome = bam::certify_empirical(&composed, &fixed, &spec)?;
    let measured = outcome.certificate().map_or(f64::NAN, |c| c.gamma);
    checks.push(CheckRow::approx(
        "the composition certifies as the exact projector onto the origin",
        0.0,
        measured,
        1e-15,
    ));
    Ok(ReproReport::new("t2t1", checks))
}

/// The power set suite over the axis and the diagonal: the closed-form rate
/// is the angle cosine, the certificate carries it, and the iteration obeys
/// the geometric envelope.
fn map_rate_example() -> Result<ReproReport, CliError> {
    let u1 = origin_line(1.0, 0.0);
    let u2 = origin_line(1.0, 1.0);
    let rate = map_rate(&[u1.par().clone(), u2.par().clone()])?;
    let mut checks = vec![CheckRow::approx(
        "the product rate for the axis and the diagonal is sqrt(2)/2",
        FRAC_1_SQRT_2,
        rate,
        1e-10,
    )];

    let cert = crm_certificate(&[u1.clone(), u2.clone()], SuiteKind::PowerSetProducts)?;
    checks.push(CheckRow::approx(
        "the power set certificate carries the product rate",
        rate,
        cert.gamma,
        1e-12,
    ));
    let fix = cert.affine_fixed_set()?;
    checks.push(CheckRow::yes(
        "the certified fixed set is the origin",
        fix.dim() == 0 && fix.anchor().norm() <= 1e-12,
    ));

    let suite = build_reflection_suite(&[u1.clone(), u2], SuiteKind::PowerSetProducts)?;
    let op = OperatorExpr::circumcenter_of(suite);
    let trace = bam::iterate(&op, &cert, &v2(0.3, 1.7), 20)?;
    let worst = trace.bound_ratios.iter().fold(0.0f64, |a, r| a.max(*r));
    checks.push(CheckRow::yes(
        "twenty iteration steps stay inside the geometric envelope",
        worst <= 1.0 + 1e-9,
    ));

    let single = build_reflection_suite(&[u1.clone()], SuiteKind::PowerSetProducts)?;
    let spec = SampleSpec::new(17, 200, Vector::zeros(2), 2.0)?;
    let mut worst = 0.0f64;
    for x in spec.samples() {
        worst = worst.max(cc_map_point(&single, &x, None)?.dist(&u1.project(&x)));
    }
    checks.push(CheckRow::approx(
        "over one line the circumcenter map is that line's projector",
        0.0,
        worst,
        1e-10,
    ));
    Ok(ReproReport::new("map-rate", checks))
}

/// The symmetrized product suite over the same two lines: the factor is the
/// squared product rate.
fn symmetric_rate() -> Result<ReproReport, CliError> {
    let u1 = origin_line(1.0, 0.0);
    let u2 = origin_line(1.0, 1.0);
    let rate = map_rate(&[u1.par().clone(), u2.par().clone()])?;
    let cert = crm_certificate(&[u1.clone(), u2.clone()], SuiteKind::SymmetricProduct)?;

    let mut checks = vec![
        CheckRow::approx("the symmetrized factor is the squared rate", rate * rate, cert.gamma, 1e-12),
        CheckRow::approx("for these lines that squared rate is one half", 0.5, cert.gamma, 1e-12),
    ];

    let suite = build_reflection_suite(&[u1, u2], SuiteKind::SymmetricProduct)?;
    checks.push(CheckRow::approx(
        "the palindrome power set holds eight maps",
        8.0,
        suite.len() as f64,
        0.0,
    ));
    let op = OperatorExpr::circumcenter_of(suite);
    let trace = bam::iterate(&op, &cert, &v2(0.3, 1.7), 20)?;
    let worst = trace.bound_ratios.iter().fold(0.0f64, |a, r| a.max(*r));
    checks.push(CheckRow::yes(
        "twenty iteration steps stay inside the geometric envelope",
        worst <= 1.0 + 1e-9,
    ));
    Ok(ReproReport::new("symmetric-rate", checks))
}

/// The reflector family over the axis and the diagonal. Its circumcenter map
/// contracts toward the origin, yet it jumps across the axis and fails
/// additivity, so it is no linear projector.
fn counterexam_discontinuity() -> Result<ReproReport, CliError> {
    let u1 = origin_line(1.0, 0.0);
    let u2 = origin_line(1.0, 1.0);
    let suite = build_reflection_suite(&[u1, u2], SuiteKind::AllReflectors)?;
    let spec = SampleSpec::new(7, 2000, Vector::zeros(2), 2.0)?;

    let cert = suite_certificate(&suite, &spec)?;
    let mut checks = vec![CheckRow::yes(
        "sampling certifies the map as an exact contraction onto the origin",
        cert.gamma <= 1e-9,
    )];

    let on_axis = cc_map_point(&suite, &v2(1.0, 0.0), None)?;
    checks.push(CheckRow::approx(
        "on the axis the map returns the midpoint (0.5,0.5)",
        0.0,
        on_axis.dist(&v2(0.5, 0.5)),
        1e-12,
    ));
    let off_axis = cc_map_point(&suite, &v2(1.0, 1e-4), None)?;
    checks.push(CheckRow::approx(
        "just off the axis the map returns the origin",
        0.0,
        off_axis.norm(),
        1e-12,
    ));
    checks.push(CheckRow::exceeds(
        "a 1e-4 nudge of the input jumps the output by more than 0.1",
        0.1,
        on_axis.dist(&off_axis),
    ));

    let a = v2(1.0, 0.0);
    let b = v2(-1.0, 1.0);
    let lhs = cc_map_point(&suite, &a.add(&b), None)?;
    let rhs = cc_map_point(&suite, &a, None)?.add(&cc_map_point(&suite, &b, None)?);
    checks.push(CheckRow::exceeds(
        "the map is not additive: f(a + b) and f(a) + f(b) disagree by more than 0.1",
        0.1,
        lhs.dist(&rhs),
    ));
    Ok(ReproReport::new("counterexam-discontinuity", checks))
}
