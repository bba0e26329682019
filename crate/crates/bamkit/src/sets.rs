//! Projectable convex sets.
//!
//! Every variant carries an exact nearest-point map. Construction validates
//! nonemptiness, so a projector always has somewhere to land. Membership is
//! decided at an absolute tolerance, [`MEMBERSHIP_TOL`], throughout.

use crate::numkit::{
    self, composite_drop_tol, operator_norm, orthonormalize, Basis, Matrix, Vector,
};
use crate::{Error, Result};

/// Absolute tolerance for membership decisions.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

// ── linear and affine subspaces ────────────────────────────────────────────

/// Linear subspace represented by an orthonormal basis. The empty basis is
/// the zero subspace.
#[derive(Debug, Clone)]
pub struct LinearSubspace {
    basis: Basis,
}

impl LinearSubspace {
    pub fn from_basis(basis: Basis) -> Self {
        Self { basis }
    }

    /// Span of arbitrary vectors; near-dependent directions are dropped at
    /// a tolerance scaled to the data.
    pub fn from_spanning(vectors: &[Vector]) -> Result<Self> {
        Ok(Self { basis: orthonormalize(vectors, composite_drop_tol(vectors))? })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { basis: Basis::empty(ambient_dim, numkit::DEFAULT_RANK_TOL) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { basis: Basis::full(ambient_dim, numkit::DEFAULT_RANK_TOL) }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn project(&self, x: &Vector) -> Vector {
        self.basis.project(x)
    }

    pub fn projector_matrix(&self) -> Matrix {
        self.basis.projector_matrix()
    }

    pub fn complement(&self) -> LinearSubspace {
        Self { basis: self.basis.complement() }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.basis.contains(x, tol)
    }

    pub fn intersect(&self, other: &LinearSubspace, tol: f64) -> Result<LinearSubspace> {
        Ok(Self { basis: numkit::subspace_intersection(&self.basis, &other.basis, tol)? })
    }
}

/// Affine subspace `anchor + par`.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    anchor: Vector,
    par: LinearSubspace,
}

impl AffineSubspace {
    pub fn new(anchor: Vector, par: LinearSubspace) -> Result<Self> {
        if anchor.dim() != par.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: par.ambient_dim(), got: anchor.dim() });
        }
        Ok(Self { anchor, par })
    }

    /// The single point `{anchor}` as a degenerate affine subspace.
    pub fn point(anchor: Vector) -> Self {
        let par = LinearSubspace::zero(anchor.dim());
        Self { anchor, par }
    }

    /// Linear subspace through the origin.
    pub fn through_origin(par: LinearSubspace) -> Self {
        let anchor = Vector::zeros(par.ambient_dim());
        Self { anchor, par }
    }

    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }

    pub fn par(&self) -> &LinearSubspace {
        &self.par
    }

    pub fn ambient_dim(&self) -> usize {
        self.anchor.dim()
    }

    pub fn dim(&self) -> usize {
        self.par.dim()
    }

    pub fn project(&self, x: &Vector) -> Vector {
        self.anchor.add(&self.par.project(&x.sub(&self.anchor)))
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.project(x).dist(x) <= tol
    }

    pub fn translate(&self, z: &Vector) -> Result<Self> {
        Self::new(self.anchor.add(z), self.par.clone())
    }
}

// ── balls, segments, cones ─────────────────────────────────────────────────

/// Closed ball with strictly positive radius.
#[derive(Debug, Clone)]
pub struct Ball {
    center: Vector,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument("ball radius must be finite and > 0".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn project(&self, x: &Vector) -> Vector {
        let d = x.sub(&self.center);
        let n = d.norm();
        if n <= self.radius {
            x.clone()
        } else {
            self.center.axpy(self.radius / n, &d)
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.dist(&self.center) <= self.radius + tol
    }
}

/// Intersection of two closed balls, rejected at construction when empty.
#[derive(Debug, Clone)]
pub struct TwoBallIntersection {
    first: Ball,
    second: Ball,
}

impl TwoBallIntersection {
    pub fn new(first: Ball, second: Ball) -> Result<Self> {
        if first.center.dim() != second.center.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.center.dim(),
                got: second.center.dim(),
            });
        }
        let gap = first.center.dist(&second.center);
        if gap > first.radius + second.radius {
            return Err(Error::EmptySet(format!(
                "balls at distance {gap} with radii {} and {} do not meet",
                first.radius, second.radius
            )));
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> &Ball {
        &self.first
    }

    pub fn second(&self) -> &Ball {
        &self.second
    }

    /// Nearest point of the lens. Either single-ball projection that is
    /// feasible wins; otherwise the answer lies on the sphere-sphere rim and
    /// is found in closed form (in the plane the rim is the two lens
    /// corners).
    pub fn project(&self, x: &Vector) -> Vector {
        let p1 = self.first.project(x);
        if self.second.contains(&p1, MEMBERSHIP_TOL) {
            return p1;
        }
        let p2 = self.second.project(x);
        if self.first.contains(&p2, MEMBERSHIP_TOL) {
            return p2;
        }
        let axis = self.second.center.sub(&self.first.center);
        let d = axis.norm();
        if d <= 1e-15 {
            // Concentric balls always resolve through the feasibility
            // branches above.
            return p1;
        }
        let u = axis.scale(1.0 / d);
        let a = (d * d + self.first.radius * self.first.radius
            - self.second.radius * self.second.radius)
            / (2.0 * d);
        let rim_center = self.first.center.axpy(a, &u);
        let rim_radius = (self.first.radius * self.first.radius - a * a).max(0.0).sqrt();
        let rel = x.sub(&rim_center);
        let w = rel.axpy(-rel.dot(&u), &u);
        let nw = w.norm();
        if nw > 1e-14 {
            return rim_center.axpy(rim_radius / nw, &w);
        }
        // x sits on the axis: every rim point ties, pick a deterministic
        // perpendicular direction.
        let k = (0..u.dim())
            .min_by(|&i, &j| u.entry(i).abs().partial_cmp(&u.entry(j).abs()).unwrap())
            .unwrap();
        let e = Vector::unit(u.dim(), k);
        let perp = e.axpy(-e.dot(&u), &u);
        rim_center.axpy(rim_radius / perp.norm(), &perp)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.first.contains(x, tol) && self.second.contains(x, tol)
    }
}

/// Closed line segment between two points (possibly equal).
#[derive(Debug, Clone)]
pub struct Segment {
    start: Vector,
    end: Vector,
}

impl Segment {
    pub fn new(start: Vector, end: Vector) -> Result<Self> {
        if start.dim() != end.dim() {
            return Err(Error::DimensionMismatch { expected: start.dim(), got: end.dim() });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> &Vector {
        &self.start
    }

    pub fn end(&self) -> &Vector {
        &self.end
    }

    pub fn project(&self, x: &Vector) -> Vector {
        let d = self.end.sub(&self.start);
        let len2 = d.dot(&d);
        if len2 <= 1e-30 {
            return self.start.clone();
        }
        let t = (x.sub(&self.start).dot(&d) / len2).clamp(0.0, 1.0);
        self.start.axpy(t, &d)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.project(x).dist(x) <= tol
    }
}

/// Nonnegative orthant intersected with the centered ball of the given
/// radius. Projection clamps negatives first and then rescales radially;
/// for a cone and a centered ball those two steps compose to the exact
/// nearest point of the intersection.
#[derive(Debug, Clone)]
pub struct OrthantBall {
    dim: usize,
    radius: f64,
}

impl OrthantBall {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument("radius must be finite and > 0".into()));
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn project(&self, x: &Vector) -> Vector {
        let clamped =
            Vector::new(x.entries().iter().map(|&e| e.max(0.0)).collect()).expect("finite");
        let n = clamped.norm();
        if n <= self.radius {
            clamped
        } else {
            clamped.scale(self.radius / n)
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.entries().iter().all(|&e| e >= -tol) && x.norm() <= self.radius + tol
    }
}

// ── the convex set sum type ────────────────────────────────────────────────

/// Closed convex sets with exact nearest-point maps.
#[derive(Debug, Clone)]
pub enum ConvexSet {
    Affine(AffineSubspace),
    Ball(Ball),
    /// Nonnegative orthant of the given dimension.
    Orthant { dim: usize },
    Singleton(Vector),
    TwoBallIntersection(TwoBallIntersection),
    Segment(Segment),
    OrthantBall(OrthantBall),
}

impl ConvexSet {
    pub fn affine(anchor: Vector, par: LinearSubspace) -> Result<Self> {
        Ok(Self::Affine(AffineSubspace::new(anchor, par)?))
    }

    pub fn linear(par: LinearSubspace) -> Self {
        Self::Affine(AffineSubspace::through_origin(par))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        Ok(Self::Ball(Ball::new(center, radius)?))
    }

    pub fn orthant(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(Self::Orthant { dim })
    }

    pub fn singleton(point: Vector) -> Self {
        Self::Singleton(point)
    }

    pub fn two_ball_intersection(first: Ball, second: Ball) -> Result<Self> {
        Ok(Self::TwoBallIntersection(TwoBallIntersection::new(first, second)?))
    }

    pub fn segment(start: Vector, end: Vector) -> Result<Self> {
        Ok(Self::Segment(Segment::new(start, end)?))
    }

    pub fn orthant_ball(dim: usize, radius: f64) -> Result<Self> {
        Ok(Self::OrthantBall(OrthantBall::new(dim, radius)?))
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Affine(a) => a.ambient_dim(),
            Self::Ball(b) => b.center.dim(),
            Self::Orthant { dim } => *dim,
            Self::Singleton(p) => p.dim(),
            Self::TwoBallIntersection(t) => t.first.center.dim(),
            Self::Segment(s) => s.start.dim(),
            Self::OrthantBall(ob) => ob.dim,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: x.dim() });
        }
        Ok(())
    }

    /// Nearest point of the set.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        Ok(match self {
            Self::Affine(a) => a.project(x),
            Self::Ball(b) => b.project(x),
            Self::Orthant { .. } => {
                Vector::new(x.entries().iter().map(|&e| e.max(0.0)).collect())?
            }
            Self::Singleton(p) => p.clone(),
            Self::TwoBallIntersection(t) => t.project(x),
            Self::Segment(s) => s.project(x),
            Self::OrthantBall(ob) => ob.project(x),
        })
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        Ok(match self {
            Self::Affine(a) => a.contains(x, tol),
            Self::Ball(b) => b.contains(x, tol),
            Self::Orthant { .. } => x.entries().iter().all(|&e| e >= -tol),
            Self::Singleton(p) => p.dist(x) <= tol,
            Self::TwoBallIntersection(t) => t.contains(x, tol),
            Self::Segment(s) => s.contains(x, tol),
            Self::OrthantBall(ob) => ob.contains(x, tol),
        })
    }

    /// The set shifted by `z`, for the variants closed under translation.
    pub fn translate(&self, z: &Vector) -> Result<ConvexSet> {
        if z.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: z.dim() });
        }
        Ok(match self {
            Self::Affine(a) => Self::Affine(a.translate(z)?),
            Self::Ball(b) => Self::Ball(Ball::new(b.center.add(z), b.radius)?),
            Self::Singleton(p) => Self::Singleton(p.add(z)),
            Self::TwoBallIntersection(t) => Self::TwoBallIntersection(TwoBallIntersection::new(
                Ball::new(t.first.center.add(z), t.first.radius)?,
                Ball::new(t.second.center.add(z), t.second.radius)?,
            )?),
            Self::Segment(s) => Self::Segment(Segment::new(s.start.add(z), s.end.add(z))?),
            Self::Orthant { .. } | Self::OrthantBall(_) => {
                return Err(Error::Unsupported(
                    "translated cones leave the representable family".into(),
                ))
            }
        })
    }

    /// Affine view of the variants that are affine subspaces in disguise.
    pub fn as_affine(&self) -> Option<AffineSubspace> {
        match self {
            Self::Affine(a) => Some(a.clone()),
            Self::Singleton(p) => Some(AffineSubspace::point(p.clone())),
            _ => None,
        }
    }
}

// ── principal angles ───────────────────────────────────────────────────────

/// Cosine of the Friedrichs angle together with the dimension of the
/// intersection it was measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedrichsResult {
    pub cosine: f64,
    pub dim_intersection: usize,
}

fn quotient_basis(space: &LinearSubspace, w: &LinearSubspace, tol: f64) -> Result<Basis> {
    if space.dim() == 0 {
        return Ok(Basis::empty(space.ambient_dim(), tol.max(1e-12)));
    }
    let deflated: Vec<Vector> =
        space.basis().columns().iter().map(|c| c.sub(&w.project(c))).collect();
    orthonormalize(&deflated, tol.max(1e-12))
}

/// Cosine of the Friedrichs angle between two linear subspaces: the largest
/// singular value of `AᵀB` where `A`, `B` are orthonormal bases of the
/// subspaces with their common part removed. Zero when either quotient is
/// trivial. Always strictly below one in finite dimension.
pub fn friedrichs_cosine(
    u: &LinearSubspace,
    v: &LinearSubspace,
    tol: f64,
) -> Result<FriedrichsResult> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: u.ambient_dim(), got: v.ambient_dim() });
    }
    let w = u.intersect(v, tol)?;
    let qu = quotient_basis(u, &w, tol)?;
    let qv = quotient_basis(v, &w, tol)?;
    if qu.is_empty() || qv.is_empty() {
        return Ok(FriedrichsResult { cosine: 0.0, dim_intersection: w.dim() });
    }
    let a = Matrix::from_cols(qu.columns())?;
    let b = Matrix::from_cols(qv.columns())?;
    let m = a.transpose().mul(&b);
    Ok(FriedrichsResult {
        cosine: operator_norm(&m, 1e-13).clamp(0.0, 1.0),
        dim_intersection: w.dim(),
    })
}

// ── affine intersection ────────────────────────────────────────────────────

/// Intersection of two affine subspaces, or `None` when the feasibility
/// residual of the anchor least-squares problem exceeds `tol`. The anchor of
/// the result is the least-squares meeting point; its direction space is the
/// intersection of the two direction spaces.
pub fn intersect_affine(
    a: &AffineSubspace,
    b: &AffineSubspace,
    tol: f64,
) -> Result<Option<AffineSubspace>> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim(), got: b.ambient_dim() });
    }
    let ka = a.dim();
    let kb = b.dim();
    if ka + kb == 0 {
        return Ok(if a.anchor.dist(&b.anchor) <= tol {
            Some(AffineSubspace::point(a.anchor.clone()))
        } else {
            None
        });
    }

    let n = a.ambient_dim();
    let mut m = Matrix::zeros(n, ka + kb);
    for (j, c) in a.par.basis().columns().iter().enumerate() {
        for i in 0..n {
            m.set(i, j, c.entry(i));
        }
    }
    for (j, c) in b.par.basis().columns().iter().enumerate() {
        for i in 0..n {
            m.set(i, ka + j, -c.entry(i));
        }
    }
    let rhs = b.anchor.sub(&a.anchor);
    let (st, residual) = numkit::solve_least_squares(&m, &rhs, numkit::DEFAULT_RANK_TOL)?;
    if residual > tol {
        return Ok(None);
    }
    let mut za = a.anchor.clone();
    for (j, c) in a.par.basis().columns().iter().enumerate() {
        za = za.axpy(st.entry(j), c);
    }
    let mut zb = b.anchor.clone();
    for (j, c) in b.par.basis().columns().iter().enumerate() {
        zb = zb.axpy(st.entry(ka + j), c);
    }
    let anchor = za.add(&zb).scale(0.5);
    let par = a.par.intersect(&b.par, numkit::DEFAULT_RANK_TOL)?;
    Ok(Some(AffineSubspace::new(anchor, par)?))
}

// ── tests ──────────────────────────────────────────────────────────────────
