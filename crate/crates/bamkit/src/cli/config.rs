//! Scenario files: serde models for the JSON document and their resolution
//! into library objects. Sets are built first; operators may reference sets
//! and each other and are resolved to a fixpoint, so declaration order in
//! the file never matters.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::circumcenter::{build_reflection_suite, OperatorSet, SuiteKind};
use crate::numkit::{Matrix, Vector};
use crate::operators::{OperatorExpr, SampleSpec};
use crate::sets::{AffineSubspace, Ball, ConvexSet, LinearSubspace};

use super::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub ambient_dim: usize,
    #[serde(default)]
    pub sets: BTreeMap<String, SetConfig>,
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorConfig>,
    pub task: TaskConfig,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetConfig {
    Linear { spanning: Vec<Vec<f64>> },
    Affine { anchor: Vec<f64>, spanning: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    Orthant,
    Singleton { point: Vec<f64> },
    TwoBallIntersection { first: BallConfig, second: BallConfig },
    Segment { start: Vec<f64>, end: Vec<f64> },
    OrthantBall { radius: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorConfig {
    Identity,
    Projector { set: String },
    Reflector { set: String },
    Averaged { base: String, gamma: f64 },
    Linear { rows: Vec<Vec<f64>> },
    Shift { base: String, shift: Vec<f64> },
    /// Operators listed in application order: the first named acts first.
    Compose { ops: Vec<String> },
    ConvexCombo { weights: Vec<f64>, ops: Vec<String> },
    CircumcenterSuite { subspaces: Vec<String>, suite: SuiteKindConfig },
    CircumcenterOf { ops: Vec<String> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKindConfig {
    AllReflectors,
    Cumulative,
    PowerSetProducts,
    SymmetricProduct,
}

impl From<SuiteKindConfig> for SuiteKind {
    fn from(k: SuiteKindConfig) -> Self {
        match k {
            SuiteKindConfig::AllReflectors => Self::AllReflectors,
            SuiteKindConfig::Cumulative => Self::Cumulative,
            SuiteKindConfig::PowerSetProducts => Self::PowerSetProducts,
            SuiteKindConfig::SymmetricProduct => Self::SymmetricProduct,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskConfig {
    Project {
        set: String,
        point: Vec<f64>,
    },
    Angle {
        first: String,
        second: String,
    },
    Circumcenter {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        tol: Option<f64>,
    },
    Certify {
        operator: String,
        fixed_set: String,
        #[serde(default)]
        samples: Option<SamplesConfig>,
    },
    Iterate {
        operator: String,
        fixed_set: String,
        start: Vec<f64>,
        steps: usize,
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        samples: Option<SamplesConfig>,
    },
    Rate {
        subspaces: Vec<String>,
        #[serde(default)]
        suite: Option<SuiteKindConfig>,
    },
    Compose {
        sets: Vec<String>,
        #[serde(default)]
        gammas: Option<Vec<f64>>,
    },
    Combine {
        sets: Vec<String>,
        weights: Vec<f64>,
        #[serde(default)]
        gammas: Option<Vec<f64>>,
    },
}

impl TaskConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Project { .. } => "project",
            Self::Angle { .. } => "angle",
            Self::Circumcenter { .. } => "circumcenter",
            Self::Certify { .. } => "certify",
            Self::Iterate { .. } => "iterate",
            Self::Rate { .. } => "rate",
            Self::Compose { .. } => "compose",
            Self::Combine { .. } => "combine",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
}

fn default_seed() -> u64 {
    7
}

fn default_count() -> usize {
    2000
}

fn default_half_width() -> f64 {
    2.0
}

impl SamplesConfig {
    pub fn build(&self, dim: usize, seed_override: Option<u64>) -> Result<SampleSpec, CliError> {
        let center = match &self.center {
            Some(c) => vector(c, dim, "sample box center")?,
            None => Vector::zeros(dim),
        };
        SampleSpec::new(seed_override.unwrap_or(self.seed), self.count, center, self.half_width)
            .map_err(CliError::from)
    }

    pub fn standard() -> Self {
        Self { seed: default_seed(), count: default_count(), center: None, half_width: default_half_width() }
    }
}

// ── resolution ──────────────────────────────────────────────────────────────

/// All named objects of a scenario, built and dimension-checked.
pub struct Scenario {
    pub ambient_dim: usize,
    pub sets: BTreeMap<String, ConvexSet>,
    pub operators: BTreeMap<String, OperatorExpr>,
}

pub fn vector(entries: &[f64], dim: usize, what: &str) -> Result<Vector, CliError> {
    if entries.len() != dim {
        return Err(CliError::Validation(format!(
            "{what} has {} entries, ambient dimension is {dim}",
            entries.len()
        )));
    }
    Vector::new(entries.to_vec()).map_err(CliError::from)
}

fn vectors(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<Vec<Vector>, CliError> {
    rows.iter().map(|r| vector(r, dim, what)).collect()
}

fn build_set(name: &str, cfg: &SetConfig, dim: usize) -> Result<ConvexSet, CliError> {
    let what = |part: &str| format!("set \"{name}\" {part}");
    let set = match cfg {
        SetConfig::Linear { spanning } => {
            let cols = vectors(spanning, dim, &what("spanning vector"))?;
            ConvexSet::linear(LinearSubspace::from_spanning(&cols)?)
        }
        SetConfig::Affine { anchor, spanning } => {
            let anchor = vector(anchor, dim, &what("anchor"))?;
            let cols = vectors(spanning, dim, &what("spanning vector"))?;
            ConvexSet::Affine(AffineSubspace::new(anchor, LinearSubspace::from_spanning(&cols)?)?)
        }
        SetConfig::Ball { center, radius } => {
            ConvexSet::ball(vector(center, dim, &what("center"))?, *radius)?
        }
        SetConfig::Orthant => ConvexSet::orthant(dim)?,
        SetConfig::Singleton { point } => {
            ConvexSet::singleton(vector(point, dim, &what("point"))?)
        }
        SetConfig::TwoBallIntersection { first, second } => {
            let b1 = Ball::new(vector(&first.center, dim, &what("first center"))?, first.radius)?;
            let b2 =
                Ball::new(vector(&second.center, dim, &what("second center"))?, second.radius)?;
            ConvexSet::two_ball_intersection(b1, b2)?
        }
        SetConfig::Segment { start, end } => ConvexSet::segment(
            vector(start, dim, &what("start"))?,
            vector(end, dim, &what("end"))?,
        )?,
        SetConfig::OrthantBall { radius } => ConvexSet::orthant_ball(dim, *radius)?,
    };
    Ok(set)
}

/// The subspace list for a reflection suite: every referenced set must have
/// an affine reading.
pub fn affine_refs(
    names: &[String],
    sets: &BTreeMap<String, ConvexSet>,
) -> Result<Vec<AffineSubspace>, CliError> {
    names
        .iter()
        .map(|name| {
            let set = sets
                .get(name)
                .ok_or_else(|| CliError::Validation(format!("unknown set \"{name}\"")))?;
            set.as_affine().ok_or_else(|| {
                CliError::Validation(format!("set \"{name}\" is not an affine subspace"))
            })
        })
        .collect()
}

enum Build {
    Ready(OperatorExpr),
    /// A named operator dependency exists but is not resolved yet.
    Waiting,
}

fn build_operator(
    cfg: &OperatorConfig,
    dim: usize,
    sets: &BTreeMap<String, ConvexSet>,
    done: &BTreeMap<String, OperatorExpr>,
    declared: &BTreeMap<String, OperatorConfig>,
) -> Result<Build, CliError> {
    let get_set = |name: &String| {
        sets.get(name)
            .cloned()
            .ok_or_else(|| CliError::Validation(format!("unknown set \"{name}\"")))
    };
    // Missing from the document entirely is a hard error; declared but not
    // yet built means try again next pass.
    let get_op = |name: &String| -> Result<Option<OperatorExpr>, CliError> {
        if let Some(op) = done.get(name) {
            return Ok(Some(op.clone()));
        }
        if declared.contains_key(name) {
            return Ok(None);
        }
        Err(CliError::Validation(format!("unknown operator \"{name}\"")))
    };

    let op = match cfg {
        OperatorConfig::Identity => OperatorExpr::identity(dim)?,
        OperatorConfig::Projector { set } => OperatorExpr::projector(get_set(set)?),
        OperatorConfig::Reflector { set } => OperatorExpr::reflector(get_set(set)?),
        OperatorConfig::Averaged { base, gamma } => match get_op(base)? {
            Some(base) => OperatorExpr::averaged(base, *gamma)?,
            None => return Ok(Build::Waiting),
        },
        OperatorConfig::Linear { rows } => {
            OperatorExpr::linear(Matrix::from_rows(rows)?)?
        }
        OperatorConfig::Shift { base, shift } => match get_op(base)? {
            Some(base) => {
                let z = vector(shift, dim, "shift")?;
                crate::operators::conjugate_shift(base, z)?
            }
            None => return Ok(Build::Waiting),
        },
        OperatorConfig::Compose { ops } => {
            let mut resolved = Vec::with_capacity(ops.len());
            for name in ops {
                match get_op(name)? {
                    Some(op) => resolved.push(op),
                    None => return Ok(Build::Waiting),
                }
            }
            // The file lists application order; the expression tree runs
            // right to left.
            resolved.reverse();
            OperatorExpr::compose(resolved)?
        }
        OperatorConfig::ConvexCombo { weights, ops } => {
            let mut resolved = Vec::with_capacity(ops.len());
            for name in ops {
                match get_op(name)? {
                    Some(op) => resolved.push(op),
                    None => return Ok(Build::Waiting),
                }
            }
            OperatorExpr::convex_combo(weights.clone(), resolved)?
        }
        OperatorConfig::CircumcenterSuite { subspaces, suite } => {
            let subs = affine_refs(subspaces, sets)?;
            let family = build_reflection_suite(&subs, (*suite).into())?;
            OperatorExpr::circumcenter_of(family)
        }
        OperatorConfig::CircumcenterOf { ops } => {
            let mut resolved = Vec::with_capacity(ops.len());
            for name in ops {
                match get_op(name)? {
                    Some(op) => resolved.push(op),
                    None => return Ok(Build::Waiting),
                }
            }
            OperatorExpr::circumcenter_of(OperatorSet::new(resolved)?)
        }
    };
    Ok(Build::Ready(op))
}

pub fn resolve(cfg: &ScenarioConfig) -> Result<Scenario, CliError> {
    if cfg.version != 1 {
        return Err(CliError::Validation(format!(
            "unsupported scenario version {}, expected 1",
            cfg.version
        )));
    }
    if cfg.ambient_dim == 0 {
        return Err(CliError::Validation("ambient dimension must be positive".into()));
    }

    let mut sets = BTreeMap::new();
    for (name, set_cfg) in &cfg.sets {
        let set = build_set(name, set_cfg, cfg.ambient_dim)
            .map_err(|e| e.prepend(&format!("set \"{name}\": ")))?;
        sets.insert(name.clone(), set);
    }

    let mut operators: BTreeMap<String, OperatorExpr> = BTreeMap::new();
    let mut pending: Vec<&String> = cfg.operators.keys().collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut next_round = Vec::new();
        for name in pending {
            let op_cfg = &cfg.operators[name];
            match build_operator(op_cfg, cfg.ambient_dim, &sets, &operators, &cfg.operators)
                .map_err(|e| e.prepend(&format!("operator \"{name}\": ")))?
            {
                Build::Ready(op) => {
                    operators.insert(name.clone(), op);
                }
                Build::Waiting => next_round.push(name),
            }
        }
        if next_round.len() == before {
            let names: Vec<&str> = next_round.iter().map(|s| s.as_str()).collect();
            return Err(CliError::Validation(format!(
                "circular operator references: {}",
                names.join(", ")
            )));
        }
        pending = next_round;
    }

    Ok(Scenario { ambient_dim: cfg.ambient_dim, sets, operators })
}
