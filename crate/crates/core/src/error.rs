use thiserror::Error;

use crate::contact_norden::ClassTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bilinear form is degenerate (smallest |eigenvalue| = {0:e})")]
    Degenerate(f64),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {0} is out of range")]
    BadIndex(usize),
    #[error("section is degenerate (denominator {0:e})")]
    DegenerateSection(f64),
    #[error("section vectors are linearly dependent")]
    DependentVectors,
    #[error("class {0} is given only by conditions and has no closed-form representative")]
    NotConstructive(ClassTag),
    #[error("nabla xi system is inconsistent (least-squares residual {0:e})")]
    Inconsistent(f64),
    #[error("normal is not time-like: g'(N, N) = {0}")]
    NotTimelike(f64),
    #[error("metric restricted to the tangent space is degenerate")]
    DegenerateTangentMetric,
    #[error("section does not have the requested kind")]
    WrongSectionKind,
    #[error("solver radicand {radicand:e} is outside the solvable branch")]
    DegenerateFlat {
        radicand: f64,
        /// `Some((0, 0))` when the ambient is flat and the F0 hypersurface is the answer.
        resolution: Option<(f64, f64)>,
    },
    #[error("tolerances must be positive (abs {abs_tol}, rel {rel_tol})")]
    InvalidTolerance { abs_tol: f64, rel_tol: f64 },
    #[error("angle t = {0} must lie in (-pi/2, pi/2)")]
    InvalidAngle(f64),
    #[error("angle mismatch between structure (t = {structure}) and scalars (t = {scalars})")]
    AngleMismatch { structure: f64, scalars: f64 },
    #[error("operator is not self-adjoint (residual {0:e})")]
    NotSelfAdjoint(f64),
    #[error("rank {0} is not supported (expected 1..=4)")]
    UnsupportedRank(usize),
    #[error("dimension {0} exceeds the supported envelope")]
    UnsupportedDimension(usize),
}
