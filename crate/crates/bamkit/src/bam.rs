//! Certificates that an operator contracts toward its fixed set.
//!
//! A certificate pairs a fixed set with a factor `gamma < 1` such that
//! `|Gx - Px| <= gamma |x - Px|` for the projector `P` onto the fixed set,
//! and records where the factor came from. Theorem-backed constructors
//! compute `gamma` from closed-form constants (compositions, convex
//! combinations, contractions, averaged linear maps, normal matrices);
//! the empirical certifier estimates it from samples and can instead refute
//! the claim with a concrete witness.
//!
//! The factor `gamma` controls everything downstream: `kappa = 1/(1-gamma)`
//! bounds the distance to the fixed set by the residual `|x - Gx|`, and the
//! iterates of `G` converge to the projection of the start point at linear
//! rate `gamma`.

use crate::numkit::{self, jacobi_svd, operator_norm, Matrix, Vector};
use crate::operators::{OperatorExpr, SampleSpec, PAIR_SKIP, RATIO_TOL};
use crate::sets::{
    friedrichs_cosine, intersect_affine, AffineSubspace, ConvexSet, LinearSubspace,
    MEMBERSHIP_TOL,
};
use crate::{Error, Result};

// ── certificates ───────────────────────────────────────────────────────────

/// Where a contraction factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Two-factor composition constant `min(r, s)`.
    TheoremCompose2,
    /// Left-to-right fold of the two-factor constant.
    TheoremComposeChain,
    /// Convex combination of two mappings with affine fixed sets.
    TheoremCombine2,
    /// Weighted combination bounded through the diagonal of a product space.
    TheoremCombineProduct,
    /// Sampled Lipschitz modulus of a strict contraction.
    Contraction,
    /// Norm of an averaged linear map off its fixed space.
    AveragedLinear,
    /// Norm of a normal matrix off its fixed space.
    NormalMatrix,
    /// Sampled worst-case ratio; evidence, not proof.
    Empirical,
    /// Metric projectors contract completely.
    Projector,
}

impl Provenance {
    /// True when the factor is a proved bound rather than a sampled estimate.
    pub fn is_theorem_backed(&self) -> bool {
        !matches!(self, Self::Empirical)
    }
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::TheoremCompose2 => "theorem_compose2",
            Self::TheoremComposeChain => "theorem_compose_chain",
            Self::TheoremCombine2 => "theorem_combine2",
            Self::TheoremCombineProduct => "theorem_combine_product",
            Self::Contraction => "contraction",
            Self::AveragedLinear => "averaged_linear",
            Self::NormalMatrix => "normal_matrix",
            Self::Empirical => "empirical",
            Self::Projector => "projector",
        };
        f.write_str(name)
    }
}

/// A fixed set, a contraction factor toward it, and the factor's pedigree.
#[derive(Debug, Clone)]
pub struct BamCertificate {
    pub fixed_set: ConvexSet,
    pub gamma: f64,
    pub provenance: Provenance,
    /// Linear regularity constant `1 / (1 - gamma)`.
    pub kappa: f64,
}

impl BamCertificate {
    pub fn new(fixed_set: ConvexSet, gamma: f64, provenance: Provenance) -> Result<Self> {
        if !(gamma.is_finite() && (0.0..1.0).contains(&gamma)) {
            return Err(Error::InvalidArgument(format!(
                "contraction factor {gamma} outside [0, 1)"
            )));
        }
        Ok(Self { fixed_set, gamma, provenance, kappa: 1.0 / (1.0 - gamma) })
    }

    /// The fixed set as an affine subspace, or an error for the variants
    /// that are not one; the closed-form composition and combination
    /// constants only exist in the affine case.
    pub fn affine_fixed_set(&self) -> Result<AffineSubspace> {
        self.fixed_set.as_affine().ok_or_else(|| {
            Error::Unsupported(
                "closed-form combination constants need affine fixed sets".into(),
            )
        })
    }
}

/// Certificate for a metric projector: factor zero onto its own set.
pub fn projector_certificate(set: ConvexSet) -> Result<BamCertificate> {
    BamCertificate::new(set, 0.0, Provenance::Projector)
}

// ── violations ─────────────────────────────────────────────────────────────

/// How a sampled point contradicts a contraction claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `P(Gx)` disagrees with `P(x)`: the operator walks across the fixed
    /// set's projection fibers.
    ProjectionMismatch,
    /// The sampled worst ratio reaches one: no uniform factor below one.
    RatioNotBelowOne,
    /// `|Gx - Px| > gamma |x - Px|` for a claimed gamma.
    DistanceBoundBreached,
    /// The quadratic descent inequality toward an affine fixed set fails.
    QuasiDescentBreached,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::ProjectionMismatch => "projection_mismatch",
            Self::RatioNotBelowOne => "ratio_not_below_one",
            Self::DistanceBoundBreached => "distance_bound_breached",
            Self::QuasiDescentBreached => "quasi_descent_breached",
        };
        f.write_str(name)
    }
}

/// A concrete point at which a claim fails, with the size of the failure.
#[derive(Debug, Clone)]
pub struct Violation {
    pub witness: Vector,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

/// Outcome of an empirical certification run.
#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(BamCertificate),
    Refuted(Violation),
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }

    pub fn certificate(&self) -> Option<&BamCertificate> {
        match self {
            Self::Certified(c) => Some(c),
            Self::Refuted(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Self::Refuted(v) => Some(v),
            Self::Certified(_) => None,
        }
    }
}

// ── empirical certification ────────────────────────────────────────────────

const PROJECTION_COMPAT_TOL: f64 = 1e-8;

/// Padding added to the estimated factor before the quadratic descent pass;
/// covers the gap between the sampled maximum ratio and the true supremum.
const QUAD_MARGIN: f64 = 1e-3;

/// Estimates a contraction factor for `op` toward `fixed_set` by sampling,
/// or refutes the claim. Three things are checked on every sample: the
/// projections of `x` and `Gx` onto the fixed set must agree, the distance
/// ratio must stay below one, and (for affine fixed sets) the quadratic
/// descent inequality with the estimated factor must hold against
/// independently sampled fixed points.
pub fn certify_empirical(
    op: &OperatorExpr,
    fixed_set: &ConvexSet,
    spec: &SampleSpec,
) -> Result<CertifyOutcome> {
    if spec.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: spec.dim() });
    }
    let mut gamma_hat: f64 = 0.0;
    let mut worst: Option<Vector> = None;

    for x in spec.samples() {
        let px = fixed_set.project(&x)?;
        let gx = op.eval(&x)?;
        let pgx = fixed_set.project(&gx)?;
        let drift = pgx.dist(&px);
        if drift > PROJECTION_COMPAT_TOL * (1.0 + px.norm()) {
            return Ok(CertifyOutcome::Refuted(Violation {
                witness: x,
                kind: ViolationKind::ProjectionMismatch,
                magnitude: drift,
            }));
        }
        let d = x.dist(&px);
        if d < PAIR_SKIP {
            continue;
        }
        let ratio = gx.dist(&px) / d;
        if ratio > gamma_hat {
            gamma_hat = ratio;
            worst = Some(x);
        }
    }

    if gamma_hat >= 1.0 - RATIO_TOL {
        return Ok(CertifyOutcome::Refuted(Violation {
            witness: worst.expect("a ratio reached one"),
            kind: ViolationKind::RatioNotBelowOne,
            magnitude: gamma_hat,
        }));
    }

    // Affine fixed sets admit a sharper quadratic inequality. It holds at
    // the true factor, which the sampled estimate can undershoot, so pad the
    // estimate by a whisker: the pass then refutes exactly those fresh
    // samples that beat the estimated factor by more than the margin.
    if fixed_set.as_affine().is_some() {
        let gamma_test = (gamma_hat + QUAD_MARGIN).min(1.0);
        let slack = 1.0 - gamma_test * gamma_test;
        for (x, raw_y) in spec.sample_pairs() {
            let y = fixed_set.project(&raw_y)?;
            let px = fixed_set.project(&x)?;
            let gx = op.eval(&x)?;
            let lhs = gx.dist(&y).powi(2) + slack * x.dist(&px).powi(2);
            let rhs = x.dist(&y).powi(2);
            if lhs > rhs * (1.0 + RATIO_TOL) + 1e-12 {
                return Ok(CertifyOutcome::Refuted(Violation {
                    witness: x,
                    kind: ViolationKind::QuasiDescentBreached,
                    magnitude: lhs - rhs,
                }));
            }
        }
    }

    Ok(CertifyOutcome::Certified(BamCertificate::new(
        fixed_set.clone(),
        gamma_hat,
        Provenance::Empirical,
    )?))
}

/// Re-checks an existing certificate on fresh samples. Returns the first
/// violation found, or `None` when every sample respects the claimed factor.
pub fn check_certificate(
    op: &OperatorExpr,
    cert: &BamCertificate,
    spec: &SampleSpec,
) -> Result<Option<Violation>> {
    for x in spec.samples() {
        let px = cert.fixed_set.project(&x)?;
        let gx = op.eval(&x)?;
        let pgx = cert.fixed_set.project(&gx)?;
        let drift = pgx.dist(&px);
        if drift > PROJECTION_COMPAT_TOL * (1.0 + px.norm()) {
            return Ok(Some(Violation {
                witness: x,
                kind: ViolationKind::ProjectionMismatch,
                magnitude: drift,
            }));
        }
        let d = x.dist(&px);
        let reach = gx.dist(&px);
        if reach > cert.gamma * d * (1.0 + RATIO_TOL) + 1e-12 {
            return Ok(Some(Violation {
                witness: x,
                kind: ViolationKind::DistanceBoundBreached,
                magnitude: reach - cert.gamma * d,
            }));
        }
    }
    Ok(None)
}

// ── composition ────────────────────────────────────────────────────────────

/// The two closed-form factors for a composition and the smaller of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionConstants {
    pub r: f64,
    pub s: f64,
    pub chosen: f64,
}

fn check_unit_interval(value: f64, what: &str) -> Result<()> {
    if !(value.is_finite() && (0.0..1.0).contains(&value)) {
        return Err(Error::InvalidArgument(format!("{what} {value} outside [0, 1)")));
    }
    Ok(())
}

/// Closed-form factors for the composition of two mappings with affine
/// fixed sets meeting at Friedrichs cosine `c_f`. Neither of `r`, `s`
/// dominates the other across the parameter space, so both are reported and
/// the smaller one is `chosen`.
pub fn compose2_constant(gamma1: f64, gamma2: f64, c_f: f64) -> Result<CompositionConstants> {
    check_unit_interval(gamma1, "first factor")?;
    check_unit_interval(gamma2, "second factor")?;
    check_unit_interval(c_f, "angle cosine")?;
    let half = (1.0 + c_f) / 2.0;
    let g1 = gamma1 * gamma1;
    let g2 = gamma2 * gamma2;
    let r = (g1 + (1.0 - g1) * half).sqrt().max((g2 + (1.0 - g2) * half).sqrt());
    let s = (g1 + g2 - g1 * g2 + (1.0 - g1) * (1.0 - g2) * half * half).sqrt();
    Ok(CompositionConstants { r, s, chosen: r.min(s) })
}

fn affine_pair(cert: &BamCertificate) -> Result<AffineSubspace> {
    cert.affine_fixed_set()
}

/// Certificate for "apply `first`, then `second`". Both fixed sets must be
/// affine and must intersect; the factor is the two-map composition
/// constant at their Friedrichs angle.
pub fn compose2(
    first: &BamCertificate,
    second: &BamCertificate,
) -> Result<(BamCertificate, CompositionConstants)> {
    let u1 = affine_pair(first)?;
    let u2 = affine_pair(second)?;
    let fix = intersect_affine(&u1, &u2, MEMBERSHIP_TOL)?.ok_or(Error::EmptyIntersection)?;
    let c_f = friedrichs_cosine(u1.par(), u2.par(), numkit::DEFAULT_RANK_TOL)?.cosine;
    let constants = compose2_constant(first.gamma, second.gamma, c_f)?;
    let cert = BamCertificate::new(
        ConvexSet::Affine(fix),
        constants.chosen,
        Provenance::TheoremCompose2,
    )?;
    Ok((cert, constants))
}

/// Certificate for the left-to-right composition of a chain. `subspaces`
/// restates each certificate's fixed set as an affine subspace (the two
/// lists are checked against each other); the factor is folded pairwise,
/// each step measuring the angle between the running intersection and the
/// next fixed set. A single-entry chain is returned unchanged.
pub fn compose_chain(
    certs: &[BamCertificate],
    subspaces: &[AffineSubspace],
) -> Result<(BamCertificate, Vec<CompositionConstants>)> {
    if certs.is_empty() {
        return Err(Error::InvalidArgument("composition of zero certificates".into()));
    }
    if certs.len() != subspaces.len() {
        return Err(Error::InvalidArgument(format!(
            "{} subspaces for {} certificates",
            subspaces.len(),
            certs.len()
        )));
    }
    for (cert, sub) in certs.iter().zip(subspaces) {
        affine_pair(cert)?;
        if sub.ambient_dim() != cert.fixed_set.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: cert.fixed_set.ambient_dim(),
                got: sub.ambient_dim(),
            });
        }
        if !cert.fixed_set.contains(sub.anchor(), 1e-7)? {
            return Err(Error::InvalidArgument(
                "stated subspace does not sit inside the certificate's fixed set".into(),
            ));
        }
    }
    if certs.len() == 1 {
        return Ok((certs[0].clone(), Vec::new()));
    }

    let mut fix = subspaces[0].clone();
    let mut gamma = certs[0].gamma;
    let mut steps = Vec::with_capacity(certs.len() - 1);
    for (next, u) in certs[1..].iter().zip(&subspaces[1..]) {
        let c_f = friedrichs_cosine(fix.par(), u.par(), numkit::DEFAULT_RANK_TOL)?.cosine;
        let constants = compose2_constant(gamma, next.gamma, c_f)?;
        fix = intersect_affine(&fix, u, MEMBERSHIP_TOL)?.ok_or(Error::EmptyIntersection)?;
        gamma = constants.chosen;
        steps.push(constants);
    }
    Ok((
        BamCertificate::new(ConvexSet::Affine(fix), gamma, Provenance::TheoremComposeChain)?,
        steps,
    ))
}

/// Convenience wrapper over [`compose_chain`] that restates each fixed set
/// from the certificates themselves.
pub fn compose_chain_auto(
    certs: &[BamCertificate],
) -> Result<(BamCertificate, Vec<CompositionConstants>)> {
    let subspaces = certs.iter().map(affine_pair).collect::<Result<Vec<_>>>()?;
    compose_chain(certs, &subspaces)
}

// ── convex combination ─────────────────────────────────────────────────────

/// Closed-form factor for `alpha G1 + (1 - alpha) G2` with affine fixed
/// sets meeting at Friedrichs cosine `c_f`.
pub fn combine2_constant(gamma1: f64, gamma2: f64, c_f: f64, alpha: f64) -> Result<f64> {
    check_unit_interval(gamma1, "first factor")?;
    check_unit_interval(gamma2, "second factor")?;
    check_unit_interval(c_f, "angle cosine")?;
    if !(alpha.is_finite() && 0.0 < alpha && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("weight {alpha} outside (0, 1)")));
    }
    let half = (1.0 + c_f) / 2.0;
    let g1 = gamma1 * gamma1;
    let g2 = gamma2 * gamma2;
    let left = alpha * (g1 + (1.0 - g1) * half).sqrt() + (1.0 - alpha);
    let right = alpha + (1.0 - alpha) * (g2 + (1.0 - g2) * half).sqrt();
    Ok(left.max(right))
}

/// Certificate for the convex combination `alpha G1 + (1 - alpha) G2`.
pub fn combine2(
    first: &BamCertificate,
    second: &BamCertificate,
    alpha: f64,
) -> Result<BamCertificate> {
    let u1 = affine_pair(first)?;
    let u2 = affine_pair(second)?;
    let fix = intersect_affine(&u1, &u2, MEMBERSHIP_TOL)?.ok_or(Error::EmptyIntersection)?;
    let c_f = friedrichs_cosine(u1.par(), u2.par(), numkit::DEFAULT_RANK_TOL)?.cosine;
    let gamma = combine2_constant(first.gamma, second.gamma, c_f, alpha)?;
    BamCertificate::new(ConvexSet::Affine(fix), gamma, Provenance::TheoremCombine2)
}

/// Weighted product space `R^{m n}` carrying the norm whose block `i` is
/// scaled by `sqrt(weights[i])`; the weights must be strictly positive and
/// sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpaceSpec {
    weights: Vec<f64>,
    base_dim: usize,
}

impl ProductSpaceSpec {
    pub fn new(weights: Vec<f64>, base_dim: usize) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("a product space needs weights".into()));
        }
        if base_dim == 0 {
            return Err(Error::InvalidArgument("base dimension must be positive".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidArgument("weights must be strictly positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, base_dim })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn factor_count(&self) -> usize {
        self.weights.len()
    }

    pub fn product_dim(&self) -> usize {
        self.weights.len() * self.base_dim
    }
}

/// Certificate for a weighted combination of many mappings, bounded through
/// the product space: the angle is measured between the diagonal and the
/// product of the fixed sets' directions inside `R^{m n}`, where the weights
/// enter through an isometric rescaling of the blocks. The bound is not
/// sharp (a single identity already gets factor one half) but is always
/// strictly below one.
pub fn combine_n_product(
    certs: &[BamCertificate],
    spec: &ProductSpaceSpec,
) -> Result<BamCertificate> {
    if certs.len() != spec.factor_count() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} certificates",
            spec.factor_count(),
            certs.len()
        )));
    }
    let weights = spec.weights();

    let n = spec.base_dim();
    let m = certs.len();
    let mut fixes = Vec::with_capacity(m);
    for cert in certs {
        if cert.fixed_set.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cert.fixed_set.ambient_dim(),
            });
        }
        fixes.push(affine_pair(cert)?);
    }

    // Diagonal of the weighted product space, carried to the standard one by
    // the isometry that scales block i by sqrt(w_i).
    let mut diag_cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = Vector::zeros(m * n);
        for (i, w) in weights.iter().enumerate() {
            col.set(i * n + j, w.sqrt());
        }
        diag_cols.push(col);
    }
    let diagonal = LinearSubspace::from_spanning(&diag_cols)?;

    let mut block_cols = Vec::new();
    for (i, fix) in fixes.iter().enumerate() {
        for v in fix.par().basis().columns() {
            let mut col = Vector::zeros(m * n);
            for j in 0..n {
                col.set(i * n + j, v.entry(j));
            }
            block_cols.push(col);
        }
    }
    let c_f = if block_cols.is_empty() {
        // All fixed sets are single points; the product direction space is
        // trivial and so is the angle.
        0.0
    } else {
        let blocks = LinearSubspace::from_spanning(&block_cols)?;
        friedrichs_cosine(&diagonal, &blocks, numkit::DEFAULT_RANK_TOL)?.cosine
    };

    let mu = certs.iter().map(|c| c.gamma).fold(0.0, f64::max);
    let quarter = (1.0 + c_f) * (1.0 + c_f) / 4.0;
    let gamma = (mu * mu + (1.0 - mu * mu) * quarter).sqrt();

    let mut fix = fixes[0].clone();
    for f in &fixes[1..] {
        fix = intersect_affine(&fix, f, MEMBERSHIP_TOL)?.ok_or(Error::EmptyIntersection)?;
    }
    BamCertificate::new(ConvexSet::Affine(fix), gamma, Provenance::TheoremCombineProduct)
}

// ── matrix and contraction classes ─────────────────────────────────────────

const PICARD_MAX_STEPS: usize = 1_000_000;

/// Certificate for a claimed contraction: the stated modulus is checked
/// against the worst sampled Lipschitz ratio, and the fixed set is the
/// Picard limit from the box center. Fails with the worst pair as witness
/// when a sampled ratio exceeds the claim, or when the iteration stalls.
pub fn from_contraction(
    op: &OperatorExpr,
    modulus: f64,
    spec: &SampleSpec,
) -> Result<BamCertificate> {
    check_unit_interval(modulus, "contraction modulus")?;
    if spec.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: spec.dim() });
    }
    let mut worst: f64 = 0.0;
    let mut at: Option<(Vector, Vector)> = None;
    for (x, y) in spec.sample_pairs() {
        let d = x.dist(&y);
        if d < PAIR_SKIP {
            continue;
        }
        let ratio = op.eval(&x)?.dist(&op.eval(&y)?) / d;
        if ratio > worst {
            worst = ratio;
            at = Some((x, y));
        }
    }
    if worst > modulus + RATIO_TOL {
        let (x, y) = at.expect("a ratio exceeded the claim");
        return Err(Error::NotContractive { ratio: worst, x, y });
    }

    let mut x = spec.center.clone();
    let mut converged = false;
    for _ in 0..PICARD_MAX_STEPS {
        let next = op.eval(&x)?;
        let step = next.dist(&x);
        x = next;
        if step <= 1e-12 * (1.0 + x.norm()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Unsupported(
            "fixed-point iteration did not settle within the step budget".into(),
        ));
    }
    BamCertificate::new(ConvexSet::singleton(x), modulus, Provenance::Contraction)
}

fn fixed_space_of(a: &Matrix) -> numkit::Basis {
    let shifted = a.sub(&Matrix::identity(a.rows()));
    numkit::nullspace(&shifted, numkit::DEFAULT_RANK_TOL)
}

fn off_fix_norm(a: &Matrix, fix: &numkit::Basis) -> f64 {
    let p_perp = Matrix::identity(a.rows()).sub(&fix.projector_matrix());
    operator_norm(&a.mul(&p_perp), 1e-13).clamp(0.0, 1.0)
}

/// Certificate for an averaged linear map: `A = (1 - a) I + a R` for some
/// nonexpansive `R` and `a` in `(0, 1)`. The interpolation factor is found
/// on a grid; the contraction factor is the norm of `A` restricted to the
/// complement of its fixed space, which is strictly below one for averaged
/// maps in finite dimension.
pub fn from_averaged_linear(a: &Matrix) -> Result<BamCertificate> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidArgument(format!(
            "averaged operator must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let id = Matrix::identity(a.rows());
    let averaged = (1..100).map(|k| k as f64 / 100.0).any(|alpha| {
        let r = a.sub(&id.scale(1.0 - alpha)).scale(1.0 / alpha);
        operator_norm(&r, 1e-13) <= 1.0 + 1e-10
    });
    if !averaged {
        return Err(Error::NotAveraged);
    }
    let fix = fixed_space_of(a);
    let gamma = off_fix_norm(a, &fix);
    BamCertificate::new(
        ConvexSet::linear(LinearSubspace::from_basis(fix)),
        gamma,
        Provenance::AveragedLinear,
    )
}

/// Certificate for a normal matrix. Normality makes the fixed space reduce
/// the matrix, so the factor is again the norm off the fixed space; it is
/// below one exactly when every eigenvalue other than one lies strictly
/// inside the unit circle. Otherwise the obstructing eigenvalue is
/// reported.
pub fn normal_matrix_bam(a: &Matrix, tol: f64) -> Result<BamCertificate> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidArgument(format!(
            "normal operator must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let at = a.transpose();
    let defect = at.mul(a).sub(&a.mul(&at)).frobenius_norm();
    let scale = 1.0 + a.frobenius_norm().powi(2);
    if defect > tol * scale {
        return Err(Error::NotNormal { defect });
    }

    let fix = fixed_space_of(a);
    let p_perp = Matrix::identity(a.rows()).sub(&fix.projector_matrix());
    let restricted = a.mul(&p_perp);
    let gamma = operator_norm(&restricted, 1e-13);
    if gamma >= 1.0 - 1e-10 {
        // Surface the eigenvalue that blocks convergence: the top right
        // singular direction of the restriction is an eigenvector of the
        // normal matrix up to the imaginary pairing.
        let svd = jacobi_svd(&restricted);
        let w = svd.v.col(0);
        let aw = a.mul_vec(&w);
        let re = w.dot(&aw);
        let im = aw.axpy(-re, &w).norm();
        return Err(Error::SpectrumRejected { re, im, modulus: (re * re + im * im).sqrt() });
    }
    BamCertificate::new(
        ConvexSet::linear(LinearSubspace::from_basis(fix)),
        gamma.clamp(0.0, 1.0),
        Provenance::NormalMatrix,
    )
}

// ── iteration traces ───────────────────────────────────────────────────────

/// Orbit of an iteration annotated with distances to the fixed set and
/// their ratios against the certified geometric envelope.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iterates: Vec<Vector>,
    pub errors: Vec<f64>,
    /// `errors[k] / (gamma^k errors[0])`; at most one for a valid
    /// certificate, and zero once the iterate has landed on the fixed set.
    pub bound_ratios: Vec<f64>,
}

/// Runs `steps` applications of `op` from `x0` and scores each iterate
/// against the certificate's geometric decay bound.
pub fn iterate(
    op: &OperatorExpr,
    cert: &BamCertificate,
    x0: &Vector,
    steps: usize,
) -> Result<IterationTrace> {
    let mut iterates = Vec::with_capacity(steps + 1);
    iterates.push(x0.clone());
    for _ in 0..steps {
        let next = op.eval(iterates.last().expect("nonempty"))?;
        iterates.push(next);
    }
    let mut errors = Vec::with_capacity(steps + 1);
    for x in &iterates {
        errors.push(x.dist(&cert.fixed_set.project(x)?));
    }
    let atol = 1e-12 * (1.0 + errors[0]);
    let mut bound_ratios = Vec::with_capacity(steps + 1);
    let mut envelope = errors[0];
    for err in &errors {
        let ratio = if envelope > atol {
            err / envelope
        } else if *err <= atol {
            0.0
        } else {
            f64::INFINITY
        };
        bound_ratios.push(ratio);
        envelope *= cert.gamma;
    }
    Ok(IterationTrace { iterates, errors, bound_ratios })
}

// ── pointwise composition diagnostics ──────────────────────────────────────

/// The two direction cosines that drive the composition constant at a
/// specific point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDiagnostics {
    pub beta1: f64,
    pub beta2: f64,
}

/// Measures, at one point, the cosines relating `x` and `G1 x` to the
/// intersection of two affine fixed sets: at least one of them is bounded
/// by `sqrt((1 + c_F) / 2)` whenever all four defining vectors are nonzero.
/// Returns `None` when any of them vanishes.
pub fn point_diagnostics(
    g1: &OperatorExpr,
    u1: &AffineSubspace,
    u2: &AffineSubspace,
    x: &Vector,
) -> Result<Option<PointDiagnostics>> {
    let w = intersect_affine(u1, u2, MEMBERSHIP_TOL)?.ok_or(Error::EmptyIntersection)?;
    let wx = w.project(x);
    let g = g1.eval(x)?;
    let tiny = 1e-12 * (1.0 + x.norm().max(g.norm()));

    let dir_g = g.sub(&wx);
    let dir_x = x.sub(&wx);
    let num1 = u2.project(&g).sub(&wx);
    let num2 = u1.project(x).sub(&wx);
    if dir_g.norm() <= tiny || dir_x.norm() <= tiny || num1.norm() <= tiny || num2.norm() <= tiny
    {
        return Ok(None);
    }
    Ok(Some(PointDiagnostics {
        beta1: num1.norm() / dir_g.norm(),
        beta2: num2.norm() / dir_x.norm(),
    }))
}

// ── tests ──────────────────────────────────────────────────────────────────
