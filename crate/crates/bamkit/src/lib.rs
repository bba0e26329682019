//! bamkit: a toolkit for best-approximation mappings on finite-dimensional
//! real inner-product spaces.
//!
//! A best-approximation mapping (BAM) is an operator G whose fixed set is
//! nonempty, closed and convex, which projects onto that set at least as well
//! as the metric projector does (P o G = P on the fixed set), and which pulls
//! every point toward the fixed set by a factor gamma < 1:
//!
//! ```text
//! || G x - P x || <= gamma * || x - P x ||        (P = projector onto Fix G)
//! ```
//!
//! The crate provides dense numeric kernels ([`numkit`]), projectable convex
//! sets and principal angles ([`sets`]), an operator expression tree with
//! sampled property checks ([`operators`]), certified contraction factors for
//! compositions, convex combinations and matrix classes ([`bam`]),
//! circumcenter mappings built from reflection suites ([`circumcenter`]), and
//! a scenario/replication command-line layer ([`cli`]).

pub mod bam;
pub mod circumcenter;
pub mod cli;
pub mod numkit;
pub mod operators;
pub mod sets;

use numkit::Vector;

/// Crate-wide error type. Violations discovered by sampling are *results*,
/// not errors, and live in [`bam::Violation`]; this enum covers invalid
/// inputs and rejections by the certified constructors.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("set construction rejected: {0}")]
    EmptySet(String),

    #[error("the sets have empty intersection")]
    EmptyIntersection,

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("circumcenter does not exist for the evaluated point set (spread {spread:.3e})")]
    ImproperCircumcenter { spread: f64 },

    #[error("matrix is not an averaged operator: no admissible interpolation factor in (0, 1)")]
    NotAveraged,

    #[error("matrix is not normal within tolerance (commutator norm {defect:.3e})")]
    NotNormal { defect: f64 },

    #[error(
        "spectrum rejected: eigenvalue {re:.6}{im:+.6}i (modulus {modulus:.6}) obstructs convergence"
    )]
    SpectrumRejected { re: f64, im: f64, modulus: f64 },

    #[error("sampled Lipschitz ratio {ratio:.6} exceeds the claimed modulus")]
    NotContractive { ratio: f64, x: Vector, y: Vector },
}

pub type Result<T> = std::result::Result<T, Error>;
