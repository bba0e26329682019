//! Circumcenters of finite point sets and circumcenter maps of operator
//! families.
//!
//! The circumcenter of points `p_0, …, p_{m-1}` is the unique point of their
//! affine hull equidistant to all of them, when such a point exists. It is
//! computed from the Gram system of the differences `p_i - p_0`; existence
//! is decided by two diagnostics, the least-squares inconsistency of that
//! system (`hull_residual`) and the distance spread of the candidate
//! (`spread`).
//!
//! A circumcenter map sends `x` to the circumcenter of its orbit under a
//! finite family of operators. For families of reflectors across affine
//! subspaces with a common point the orbit lies on a sphere around every
//! point of the common intersection, so the map is well defined everywhere.

use crate::bam::{self, BamCertificate, CertifyOutcome, ProductSpaceSpec, Provenance};
use crate::numkit::{self, operator_norm, Matrix, Vector};
use crate::operators::{check_property, OperatorExpr, PropKind, SampleSpec};
use crate::sets::{intersect_affine, AffineSubspace, ConvexSet, LinearSubspace};
use crate::{Error, Result};

/// Reflector families derived from a list of affine subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Identity plus one reflector per subspace.
    AllReflectors,
    /// Identity plus the left-to-right partial products of the reflectors.
    Cumulative,
    /// Products over all index subsets taken in increasing order.
    PowerSetProducts,
    /// Products over all index subsets of the palindromic list
    /// `U_1, …, U_m, …, U_1`.
    SymmetricProduct,
}

/// Provenance of a suite-built operator family.
#[derive(Debug, Clone)]
pub struct SuiteMeta {
    pub subspaces: Vec<AffineSubspace>,
    pub kind: SuiteKind,
}

// ── point circumcenters ────────────────────────────────────────────────────

/// Circumcenter computation outcome. `candidate` is always the solution of
/// the Gram least-squares system; `point` is `Some` only when the candidate
/// is genuinely equidistant (both diagnostics under tolerance).
#[derive(Debug, Clone)]
pub struct CCResult {
    pub point: Option<Vector>,
    pub candidate: Vector,
    /// Least-squares inconsistency of the equidistance system, scaled to
    /// length units.
    pub hull_residual: f64,
    /// Max minus min distance from the candidate to the points.
    pub spread: f64,
}

/// Existence tolerance scaled to the diameter of the point set.
pub fn default_cc_tol(points: &[Vector]) -> f64 {
    let mut diameter: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            diameter = diameter.max(p.dist(q));
        }
    }
    1e-8 * (1.0 + diameter)
}

fn dedupe(points: &[Vector]) -> Vec<Vector> {
    let scale = 1.0 + points.iter().map(Vector::norm).fold(0.0, f64::max);
    let tol = 1e-12 * scale;
    let mut kept: Vec<Vector> = Vec::new();
    for p in points {
        if kept.iter().all(|q| q.dist(p) > tol) {
            kept.push(p.clone());
        }
    }
    kept
}

/// Circumcenter of a finite point set. Coincident points are collapsed
/// before solving. The Gram system `G a = b` with
/// `G_ij = <p_i - p_0, p_j - p_0>` and `b_i = |p_i - p_0|^2 / 2` is solved
/// in the least-squares sense with a minimum-norm solution, which keeps the
/// candidate inside the affine hull even for affinely dependent points.
pub fn circumcenter(points: &[Vector], tol: f64) -> Result<CCResult> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("circumcenter of zero points".into()));
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
    }
    let pts = dedupe(points);
    if pts.len() == 1 {
        return Ok(CCResult {
            point: Some(pts[0].clone()),
            candidate: pts[0].clone(),
            hull_residual: 0.0,
            spread: 0.0,
        });
    }

    let p0 = &pts[0];
    let diffs: Vec<Vector> = pts[1..].iter().map(|p| p.sub(p0)).collect();
    let m = diffs.len();
    let mut gram = Matrix::zeros(m, m);
    let mut rhs = Vector::zeros(m);
    for i in 0..m {
        for j in 0..m {
            gram.set(i, j, diffs[i].dot(&diffs[j]));
        }
        rhs.set(i, 0.5 * diffs[i].dot(&diffs[i]));
    }
    let (alpha, residual) = numkit::solve_least_squares(&gram, &rhs, numkit::DEFAULT_RANK_TOL)?;

    let mut candidate = p0.clone();
    for (a, d) in alpha.entries().iter().zip(&diffs) {
        candidate = candidate.axpy(*a, d);
    }

    let max_diff = diffs.iter().map(Vector::norm).fold(0.0, f64::max);
    let hull_residual = residual / (1.0 + max_diff);

    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for p in &pts {
        let d = candidate.dist(p);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let spread = hi - lo;

    let point = (spread <= tol && hull_residual <= tol).then(|| candidate.clone());
    Ok(CCResult { point, candidate, hull_residual, spread })
}

// ── operator families ──────────────────────────────────────────────────────

/// A finite family of operators on a common space, with cached structural
/// facts about it.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    ops: Vec<OperatorExpr>,
    contains_id: bool,
    all_isometries: bool,
    suite: Option<SuiteMeta>,
}

/// Exact isometries recognizable from the expression tree alone.
fn structurally_isometric(op: &OperatorExpr) -> bool {
    match op {
        OperatorExpr::Identity { .. } => true,
        OperatorExpr::Reflector(ConvexSet::Affine(_)) => true,
        OperatorExpr::Compose(ops) => ops.iter().all(structurally_isometric),
        OperatorExpr::ShiftConjugate { base, .. } => structurally_isometric(base),
        _ => false,
    }
}

impl OperatorSet {
    pub fn new(ops: Vec<OperatorExpr>) -> Result<Self> {
        Self::build(ops, None)
    }

    fn build(ops: Vec<OperatorExpr>, suite: Option<SuiteMeta>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument("operator family must be nonempty".into()));
        }
        let dim = ops[0].dim();
        for op in &ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: op.dim() });
            }
        }

        let id_probe = SampleSpec::new(2718, 32, Vector::zeros(dim), 1.0)?;
        let mut contains_id = false;
        for op in &ops {
            if matches!(op, OperatorExpr::Identity { .. }) {
                contains_id = true;
                break;
            }
            let mut is_id = true;
            for x in id_probe.samples() {
                if op.eval(&x)?.dist(&x) > 1e-10 {
                    is_id = false;
                    break;
                }
            }
            if is_id {
                contains_id = true;
                break;
            }
        }

        // Structure decides exact isometries for free; opaque operators are
        // checked on 500 sampled pairs.
        let iso_probe = SampleSpec::new(314, 500, Vector::zeros(dim), 1.0)?;
        let mut all_isometries = true;
        for op in &ops {
            if structurally_isometric(op) {
                continue;
            }
            if !check_property(op, PropKind::Isometry, None, &iso_probe)?.passed {
                all_isometries = false;
                break;
            }
        }

        Ok(Self { ops, contains_id, all_isometries, suite })
    }

    pub fn ops(&self) -> &[OperatorExpr] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn contains_id(&self) -> bool {
        self.contains_id
    }

    pub fn all_isometries(&self) -> bool {
        self.all_isometries
    }

    pub fn suite(&self) -> Option<&SuiteMeta> {
        self.suite.as_ref()
    }
}

/// Circumcenter map of the family: the circumcenter of
/// `{op(x) : op in set}`. With `tol = None` the existence tolerance scales
/// with the orbit diameter. An orbit without a circumcenter comes back with
/// `point` empty and the residuals as diagnosis.
pub fn cc_map_eval(set: &OperatorSet, x: &Vector, tol: Option<f64>) -> Result<CCResult> {
    let mut orbit = Vec::with_capacity(set.len());
    for op in set.ops() {
        orbit.push(op.eval(x)?);
    }
    let tol = tol.unwrap_or_else(|| default_cc_tol(&orbit));
    circumcenter(&orbit, tol)
}

/// [`cc_map_eval`] for callers that need the value: the improper case
/// becomes an error carrying the witness spread.
pub fn cc_map_point(set: &OperatorSet, x: &Vector, tol: Option<f64>) -> Result<Vector> {
    let r = cc_map_eval(set, x, tol)?;
    r.point.ok_or(Error::ImproperCircumcenter { spread: r.spread })
}

// ── reflection suites ──────────────────────────────────────────────────────

const MAX_SUITE_FACTORS: usize = 12;

fn product_over(indices: &[usize], reflectors: &[OperatorExpr], dim: usize) -> Result<OperatorExpr> {
    match indices.len() {
        0 => OperatorExpr::identity(dim),
        1 => Ok(reflectors[indices[0]].clone()),
        _ => {
            // Apply the smallest index first: composition lists run right to
            // left.
            let chain: Vec<OperatorExpr> =
                indices.iter().rev().map(|&i| reflectors[i].clone()).collect();
            OperatorExpr::compose(chain)
        }
    }
}

fn common_intersection(subspaces: &[AffineSubspace]) -> Result<AffineSubspace> {
    let mut common = subspaces[0].clone();
    for s in &subspaces[1..] {
        common = intersect_affine(&common, s, crate::sets::MEMBERSHIP_TOL)?
            .ok_or(Error::EmptyIntersection)?;
    }
    Ok(common)
}

/// Builds the reflector family of the given kind over affine subspaces with
/// a common point. The common point requirement is what puts every orbit on
/// a sphere and makes the circumcenter map total.
pub fn build_reflection_suite(
    subspaces: &[AffineSubspace],
    kind: SuiteKind,
) -> Result<OperatorSet> {
    if subspaces.is_empty() {
        return Err(Error::InvalidArgument("suite needs at least one subspace".into()));
    }
    let dim = subspaces[0].ambient_dim();
    for s in subspaces {
        if s.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: s.ambient_dim() });
        }
    }
    common_intersection(subspaces)?;

    let factors: Vec<AffineSubspace> = match kind {
        SuiteKind::SymmetricProduct => {
            let mut pal = subspaces.to_vec();
            pal.extend(subspaces[..subspaces.len() - 1].iter().rev().cloned());
            pal
        }
        _ => subspaces.to_vec(),
    };
    let reflectors: Vec<OperatorExpr> = factors
        .iter()
        .map(|s| OperatorExpr::reflector(ConvexSet::Affine(s.clone())))
        .collect();
    let m = reflectors.len();

    let ops = match kind {
        SuiteKind::AllReflectors => {
            let mut ops = vec![OperatorExpr::identity(dim)?];
            ops.extend(reflectors.iter().cloned());
            ops
        }
        SuiteKind::Cumulative => {
            let mut ops = vec![OperatorExpr::identity(dim)?];
            for k in 1..=m {
                let prefix: Vec<usize> = (0..k).collect();
                ops.push(product_over(&prefix, &reflectors, dim)?);
            }
            ops
        }
        SuiteKind::PowerSetProducts | SuiteKind::SymmetricProduct => {
            if m > MAX_SUITE_FACTORS {
                return Err(Error::InvalidArgument(format!(
                    "power set over {m} factors exceeds the limit of {MAX_SUITE_FACTORS}"
                )));
            }
            let mut ops = Vec::with_capacity(1 << m);
            for mask in 0u32..(1 << m) {
                let indices: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                ops.push(product_over(&indices, &reflectors, dim)?);
            }
            ops
        }
    };

    OperatorSet::build(ops, Some(SuiteMeta { subspaces: subspaces.to_vec(), kind }))
}

// ── contraction rates of projection products ───────────────────────────────

/// Norm of the product `P_m ⋯ P_1` restricted to the orthogonal complement
/// of the common intersection: the linear convergence rate of the cyclic
/// projection product onto `∩ U_i`. Strictly below one in finite dimension;
/// needs at least two factors.
pub fn map_rate(pars: &[LinearSubspace]) -> Result<f64> {
    if pars.len() < 2 {
        return Err(Error::InvalidArgument(
            "the product rate needs at least two subspaces".into(),
        ));
    }
    let dim = pars[0].ambient_dim();
    for p in pars {
        if p.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.ambient_dim() });
        }
    }
    let mut common = pars[0].clone();
    for p in &pars[1..] {
        common = common.intersect(p, numkit::DEFAULT_RANK_TOL)?;
    }
    let mut product = Matrix::identity(dim).sub(&common.projector_matrix());
    for p in pars {
        product = p.projector_matrix().mul(&product);
    }
    Ok(operator_norm(&product, 1e-13).clamp(0.0, 1.0))
}

// ── suite certificates ─────────────────────────────────────────────────────

/// Rate certificate for the circumcenter map of a reflection suite. Covers
/// the kinds whose family contains every increasing-index product: the map
/// then contracts at the cyclic-projection rate (squared for the palindromic
/// ordering). A single subspace degenerates to `{Id, R}` for every kind and
/// gets factor zero. Families missing some products (AllReflectors or
/// Cumulative over several subspaces) carry no such formula and are
/// rejected; certify those empirically instead.
pub fn crm_certificate(subspaces: &[AffineSubspace], kind: SuiteKind) -> Result<BamCertificate> {
    if subspaces.is_empty() {
        return Err(Error::InvalidArgument("suite needs at least one subspace".into()));
    }
    let dim = subspaces[0].ambient_dim();
    for s in subspaces {
        if s.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: s.ambient_dim() });
        }
    }
    let fix = common_intersection(subspaces)?;
    let gamma = if subspaces.len() == 1 {
        0.0
    } else {
        let pars: Vec<LinearSubspace> = subspaces.iter().map(|s| s.par().clone()).collect();
        match kind {
            SuiteKind::PowerSetProducts => map_rate(&pars)?,
            SuiteKind::SymmetricProduct => {
                let rate = map_rate(&pars)?;
                rate * rate
            }
            SuiteKind::AllReflectors | SuiteKind::Cumulative => {
                return Err(Error::Unsupported(
                    "no closed-form rate for this suite kind over several subspaces".into(),
                ))
            }
        }
    };
    BamCertificate::new(ConvexSet::Affine(fix), gamma, Provenance::TheoremCompose2)
}

/// Certificate for the circumcenter map of a family built by
/// [`build_reflection_suite`]: the rate theorem when the kind supports it,
/// otherwise empirical certification against the recorded intersection.
pub fn suite_certificate(set: &OperatorSet, spec: &SampleSpec) -> Result<BamCertificate> {
    let meta = set
        .suite()
        .ok_or_else(|| Error::Unsupported("the family records no suite construction".into()))?;
    match crm_certificate(&meta.subspaces, meta.kind) {
        Ok(cert) => Ok(cert),
        Err(Error::Unsupported(_)) => {
            let fix = common_intersection(&meta.subspaces)?;
            let op = OperatorExpr::circumcenter_of(set.clone());
            match bam::certify_empirical(&op, &ConvexSet::Affine(fix), spec)? {
                CertifyOutcome::Certified(cert) => Ok(cert),
                CertifyOutcome::Refuted(v) => Err(Error::InvalidArgument(format!(
                    "the suite map fails certification: {} with magnitude {:.3e}",
                    v.kind, v.magnitude
                ))),
            }
        }
        Err(e) => Err(e),
    }
}

/// How a list of circumcenter maps is assembled into one operator.
#[derive(Debug, Clone, PartialEq)]
pub enum AssemblyMode {
    /// Apply the parts in list order.
    Compose,
    /// Blend the parts with the given convex weights.
    Combine(Vec<f64>),
}

/// Assembles the circumcenter maps of `parts` into one operator with a
/// certificate. Each part is certified on its own (rate theorem when
/// available, else empirically over the standard box), then the pieces are
/// chained through the composition bound or the product-space combination
/// bound; the certified fixed set is the intersection of the parts'.
pub fn cc_compose_combine(
    parts: &[OperatorSet],
    mode: &AssemblyMode,
) -> Result<(OperatorExpr, BamCertificate)> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("assembly of zero parts".into()));
    }
    let dim = parts[0].ambient_dim();
    for p in parts {
        if p.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.ambient_dim() });
        }
    }
    let spec = SampleSpec::standard(dim);
    let mut certs = Vec::with_capacity(parts.len());
    for part in parts {
        certs.push(suite_certificate(part, &spec)?);
    }
    let subspaces = certs
        .iter()
        .map(|c| c.affine_fixed_set())
        .collect::<Result<Vec<AffineSubspace>>>()?;

    match mode {
        AssemblyMode::Compose => {
            let op = if parts.len() == 1 {
                OperatorExpr::circumcenter_of(parts[0].clone())
            } else {
                // Composition lists run right to left; the first part acts
                // first.
                let chain: Vec<OperatorExpr> = parts
                    .iter()
                    .rev()
                    .map(|p| OperatorExpr::circumcenter_of(p.clone()))
                    .collect();
                OperatorExpr::compose(chain)?
            };
            let (cert, _) = bam::compose_chain(&certs, &subspaces)?;
            Ok((op, cert))
        }
        AssemblyMode::Combine(weights) => {
            let ops: Vec<OperatorExpr> =
                parts.iter().map(|p| OperatorExpr::circumcenter_of(p.clone())).collect();
            let op = OperatorExpr::convex_combo(weights.clone(), ops)?;
            let product = ProductSpaceSpec::new(weights.clone(), dim)?;
            let cert = bam::combine_n_product(&certs, &product)?;
            Ok((op, cert))
        }
    }
}

// ── tests ──────────────────────────────────────────────────────────────────
