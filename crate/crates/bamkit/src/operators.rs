//! Operator expression trees and sampled property checks.
//!
//! An [`OperatorExpr`] is a small closed language of self-maps of `R^n`:
//! projectors and reflectors of convex sets, linear maps, relaxations toward
//! the identity, shift conjugations, compositions, convex combinations, and
//! circumcenter maps of operator families. Evaluation is exact arithmetic on
//! the tree; no operator is ever materialized as a matrix unless it started
//! as one.
//!
//! Property checks are sampled: they draw deterministic pseudo-random pairs
//! from a box and compare difference ratios. A passing report is evidence,
//! not proof; a failing report carries a concrete witness pair.

use crate::circumcenter::{self, OperatorSet};
use crate::numkit::{Matrix, Vector};
use crate::sets::ConvexSet;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tolerance for sampled ratio comparisons.
pub const RATIO_TOL: f64 = 1e-9;

/// Pairs closer than this are skipped when forming difference ratios.
pub const PAIR_SKIP: f64 = 1e-8;

/// Default number of sampled pairs for property checks.
pub const DEFAULT_SAMPLE_COUNT: usize = 2000;

// ── expression trees ───────────────────────────────────────────────────────

/// Self-maps of `R^n` built from closed-form pieces.
#[derive(Debug, Clone)]
pub enum OperatorExpr {
    Identity {
        dim: usize,
    },
    /// Nearest-point map of the set.
    Projector(ConvexSet),
    /// `2 P - Id` for the nearest-point map `P` of the set.
    Reflector(ConvexSet),
    /// `(1 - gamma) base + gamma Id`.
    Averaged { base: Box<OperatorExpr>, gamma: f64 },
    LinearMap(Matrix),
    /// `x -> base(x + shift) - shift`.
    ShiftConjugate { base: Box<OperatorExpr>, shift: Vector },
    /// Composition applied right to left: `Compose([f, g])` is `f ∘ g`.
    Compose(Vec<OperatorExpr>),
    ConvexCombo { weights: Vec<f64>, ops: Vec<OperatorExpr> },
    /// Circumcenter of the orbit of `x` under the family.
    CircumcenterOf(OperatorSet),
}

impl OperatorExpr {
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(Self::Identity { dim })
    }

    pub fn projector(set: ConvexSet) -> Self {
        Self::Projector(set)
    }

    pub fn reflector(set: ConvexSet) -> Self {
        Self::Reflector(set)
    }

    pub fn averaged(base: OperatorExpr, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && (0.0..=1.0).contains(&gamma)) {
            return Err(Error::InvalidArgument(format!(
                "relaxation weight {gamma} outside [0, 1]"
            )));
        }
        Ok(Self::Averaged { base: Box::new(base), gamma })
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::InvalidArgument(format!(
                "linear operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self::LinearMap(matrix))
    }

    pub fn shift_conjugate(base: OperatorExpr, shift: Vector) -> Result<Self> {
        if shift.dim() != base.dim() {
            return Err(Error::DimensionMismatch { expected: base.dim(), got: shift.dim() });
        }
        Ok(Self::ShiftConjugate { base: Box::new(base), shift })
    }

    pub fn compose(ops: Vec<OperatorExpr>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument("composition of zero operators".into()));
        }
        let dim = ops[0].dim();
        for op in &ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: op.dim() });
            }
        }
        Ok(Self::Compose(ops))
    }

    /// Convex combination; weights must be nonnegative and sum to one to
    /// within `1e-12`.
    pub fn convex_combo(weights: Vec<f64>, ops: Vec<OperatorExpr>) -> Result<Self> {
        if ops.is_empty() || weights.len() != ops.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} operators",
                weights.len(),
                ops.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument("combination weights must be >= 0".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {sum}, not 1")));
        }
        let dim = ops[0].dim();
        for op in &ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: op.dim() });
            }
        }
        Ok(Self::ConvexCombo { weights, ops })
    }

    pub fn circumcenter_of(set: OperatorSet) -> Self {
        Self::CircumcenterOf(set)
    }

    /// Ambient dimension of the space the operator acts on.
    pub fn dim(&self) -> usize {
        match self {
            Self::Identity { dim } => *dim,
            Self::Projector(c) | Self::Reflector(c) => c.ambient_dim(),
            Self::Averaged { base, .. } => base.dim(),
            Self::LinearMap(m) => m.rows(),
            Self::ShiftConjugate { base, .. } => base.dim(),
            Self::Compose(ops) => ops[0].dim(),
            Self::ConvexCombo { ops, .. } => ops[0].dim(),
            Self::CircumcenterOf(s) => s.ambient_dim(),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        match self {
            Self::Identity { .. } => Ok(x.clone()),
            Self::Projector(c) => c.project(x),
            Self::Reflector(c) => Ok(c.project(x)?.scale(2.0).sub(x)),
            Self::Averaged { base, gamma } => {
                Ok(base.eval(x)?.scale(1.0 - gamma).axpy(*gamma, x))
            }
            Self::LinearMap(m) => Ok(m.mul_vec(x)),
            Self::ShiftConjugate { base, shift } => Ok(base.eval(&x.add(shift))?.sub(shift)),
            Self::Compose(ops) => {
                let mut v = x.clone();
                for op in ops.iter().rev() {
                    v = op.eval(&v)?;
                }
                Ok(v)
            }
            Self::ConvexCombo { weights, ops } => {
                let mut acc = Vector::zeros(x.dim());
                for (w, op) in weights.iter().zip(ops) {
                    acc = acc.axpy(*w, &op.eval(x)?);
                }
                Ok(acc)
            }
            Self::CircumcenterOf(s) => circumcenter::cc_map_point(s, x, None),
        }
    }
}

/// Conjugation by a translation: the returned operator acts like `op` moved
/// so that the point `-shift` becomes the origin. Fixed points move by
/// `-shift`.
pub fn conjugate_shift(op: OperatorExpr, shift: Vector) -> Result<OperatorExpr> {
    OperatorExpr::shift_conjugate(op, shift)
}

// ── sampling ───────────────────────────────────────────────────────────────

/// Deterministic uniform samples from an axis-aligned box.
#[derive(Debug, Clone)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    pub center: Vector,
    pub half_width: f64,
}

impl SampleSpec {
    pub fn new(seed: u64, count: usize, center: Vector, half_width: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be >= 1".into()));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument("box half-width must be finite and > 0".into()));
        }
        Ok(Self { seed, count, center, half_width })
    }

    /// Default check budget: 2000 draws from the centered box of half-width 2.
    pub fn standard(dim: usize) -> Self {
        Self {
            seed: 7,
            count: DEFAULT_SAMPLE_COUNT,
            center: Vector::zeros(dim),
            half_width: 2.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vector {
        let mut v = self.center.clone();
        for i in 0..v.dim() {
            let r: f64 = rng.random();
            v.set(i, self.center.entry(i) + (2.0 * r - 1.0) * self.half_width);
        }
        v
    }

    /// `count` points of the box.
    pub fn samples(&self) -> Vec<Vector> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count).map(|_| self.draw(&mut rng)).collect()
    }

    /// `count` pairs of points of the box (two draws per pair).
    pub fn sample_pairs(&self) -> Vec<(Vector, Vector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count).map(|_| (self.draw(&mut rng), self.draw(&mut rng))).collect()
    }
}

// ── property checks ────────────────────────────────────────────────────────

/// Distance-ratio properties decidable (or refutable) by sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropKind {
    /// `|Gx - Gy| <= |x - y|` for all pairs.
    Nonexpansive,
    /// `|Gx - y| <= |x - y|` for fixed points `y`.
    Quasinonexpansive,
    /// `|Gx - y| < |x - y|` for fixed `y` and non-fixed `x`. Sampling can
    /// only refute this, never confirm it.
    StrictlyQuasinonexpansive,
    /// `|Gx - Gy| = |x - y|` for all pairs.
    Isometry,
}

impl std::fmt::Display for PropKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Nonexpansive => "nonexpansive",
            Self::Quasinonexpansive => "quasinonexpansive",
            Self::StrictlyQuasinonexpansive => "strictly_quasinonexpansive",
            Self::Isometry => "isometry",
        };
        f.write_str(name)
    }
}

/// A sampled pair together with its distance ratio.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x: Vector,
    pub y: Vector,
    pub ratio: f64,
}

/// Outcome of a sampled property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: PropKind,
    pub passed: bool,
    /// Largest ratio seen (for isometry: the ratio farthest from one).
    pub worst_ratio: f64,
    /// The pair achieving `worst_ratio`, or the refuting pair.
    pub witness: Option<Witness>,
    /// True when `passed` only means "not refuted".
    pub refutation_only: bool,
}

/// Checks a distance-ratio property on sampled pairs. Quasinonexpansive
/// variants require `fixed_set`; the `y` side of each pair is then the
/// projection of a fresh sample onto that set.
pub fn check_property(
    op: &OperatorExpr,
    prop: PropKind,
    fixed_set: Option<&ConvexSet>,
    spec: &SampleSpec,
) -> Result<PropertyReport> {
    if spec.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: spec.dim() });
    }
    let quasi = matches!(
        prop,
        PropKind::Quasinonexpansive | PropKind::StrictlyQuasinonexpansive
    );
    let fix = if quasi {
        Some(fixed_set.ok_or_else(|| {
            Error::InvalidArgument(format!("property {prop} needs a fixed set"))
        })?)
    } else {
        None
    };

    let mut worst: Option<Witness> = None;
    let mut refuted: Option<Witness> = None;

    for (x, raw_y) in spec.sample_pairs() {
        let y = match fix {
            Some(c) => c.project(&raw_y)?,
            None => raw_y,
        };
        let denom = x.dist(&y);
        if denom < PAIR_SKIP {
            continue;
        }
        let gx = op.eval(&x)?;
        let num = match prop {
            PropKind::Nonexpansive | PropKind::Isometry => gx.dist(&op.eval(&y)?),
            _ => gx.dist(&y),
        };
        let ratio = num / denom;

        let beats = match (&worst, prop) {
            (None, _) => true,
            (Some(w), PropKind::Isometry) => (ratio - 1.0).abs() > (w.ratio - 1.0).abs(),
            (Some(w), _) => ratio > w.ratio,
        };
        if beats {
            worst = Some(Witness { x: x.clone(), y: y.clone(), ratio });
        }

        if prop == PropKind::StrictlyQuasinonexpansive && refuted.is_none() {
            // Only clearly non-fixed x refute strictness; near-fixed points
            // have ratios that approach one for honest operators too.
            let margin = 1e-2 * (1.0 + denom);
            let off_fix = fix.map(|c| Ok::<_, Error>(c.project(&x)?.dist(&x))).transpose()?;
            if ratio >= 1.0 - RATIO_TOL && off_fix.unwrap_or(0.0) >= margin {
                refuted = Some(Witness { x, y, ratio });
            }
        }
    }

    let (passed, witness) = match prop {
        PropKind::Nonexpansive | PropKind::Quasinonexpansive => {
            let w = worst.expect("sample budget is nonzero");
            (w.ratio <= 1.0 + RATIO_TOL, Some(w))
        }
        PropKind::Isometry => {
            let w = worst.expect("sample budget is nonzero");
            ((w.ratio - 1.0).abs() <= RATIO_TOL, Some(w))
        }
        PropKind::StrictlyQuasinonexpansive => match refuted {
            Some(w) => (false, Some(w)),
            None => (true, worst),
        },
    };

    Ok(PropertyReport {
        property: prop,
        passed,
        worst_ratio: witness.as_ref().map_or(0.0, |w| w.ratio),
        witness,
        refutation_only: prop == PropKind::StrictlyQuasinonexpansive,
    })
}

// ── tests ──────────────────────────────────────────────────────────────────
