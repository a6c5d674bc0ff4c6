//! Error types for every module, plus a crate-wide umbrella error.

use thiserror::Error;

use crate::linalg::LinalgError;

/// Invalid graph descriptions and enumeration failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge `{0}` joins two vertices of the same color")]
    NonBipartiteEdge(String),
    #[error("boundary vertices do not share one color")]
    BoundaryColorMismatch,
    #[error("boundary vertex `{0}` does not have degree one")]
    BoundaryDegreeNotOne(String),
    #[error("boundary order does not list the boundary vertices exactly once: {0}")]
    BoundaryOrderMismatch(String),
    #[error("inconsistent embedding: {0}")]
    EmbeddingInconsistent(String),
    #[error("graph admits no perfect orientation")]
    NotPerfectlyOrientable,
    #[error("enumeration exceeded the cap of {0} items")]
    EnumerationLimitExceeded(usize),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("not a perfect orientation: {0}")]
    NotPerfectOrientation(String),
}

/// Le-diagram and permutation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositroidError {
    #[error("invalid Young shape: {0}")]
    InvalidShape(String),
    #[error("filling violates the Le-property at row {row}, column {col}")]
    InvalidLeFilling { row: usize, col: usize },
    #[error("diagram is reducible: {0}")]
    ReducibleDiagram(String),
    #[error("strand from boundary vertex {0} revisits an edge side")]
    StrandTraceDiverges(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Weight calculus and move failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("face weight system has no solution in the chosen gauge")]
    InconsistentFaceSystem,
    #[error("gauge transformations act on internal vertices only (`{0}` is a boundary vertex)")]
    BoundaryVertexGauge(String),
    #[error("weight of `{0}` is zero")]
    ZeroWeight(String),
    #[error("weight missing for `{0}`")]
    MissingWeight(String),
    #[error("move does not apply at this site: {0}")]
    MoveSiteMismatch(String),
    #[error("move changed the represented point")]
    CertificationFailed,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Kasteleyn signature and matrix failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KasteleynError {
    #[error("no signature satisfies the face conditions")]
    NoSignature,
    #[error("subset has {got} elements, expected {expected}")]
    BadSubsetSize { expected: usize, got: usize },
    #[error("singular pivot while reducing the Kasteleyn matrix")]
    SingularPivot,
    #[error("signature is not Kasteleyn at {0} face(s)")]
    NotKasteleyn(usize),
    #[error("signature missing for edge `{0}`")]
    MissingSignature(String),
    #[error("graph must have black boundary vertices for this operation")]
    NeedsBlackBoundary,
    #[error("vertex gauge must take one value on all boundary vertices")]
    GaugeNotBoundaryConstant,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Geometric signature failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("vertex `{0}` has no coordinates")]
    MissingCoordinates(String),
    #[error("no valid gauge ray among the scanned candidates")]
    NoValidRay,
    #[error("a gauge ray passes through vertex or endpoint `{0}`")]
    SharedVertexOnRay(String),
    #[error("winding requires consecutive edges")]
    NotConsecutive,
    #[error("straight-line layout failed: {0}")]
    LayoutFailed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Relation-system failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("system of relations is singular for this boundary data")]
    SingularSystem,
    #[error("boundary data has the wrong shape: {0}")]
    BadBoundaryShape(String),
    #[error(transparent)]
    Kasteleyn(#[from] KasteleynError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<LinalgError> for RelationError {
    fn from(_: LinalgError) -> Self {
        RelationError::SingularSystem
    }
}

/// KP construction failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KpError {
    #[error("phases must be finite and strictly increasing")]
    InvalidPhases,
    #[error("representative matrix must be k x n with k < n matching the phases")]
    BadMatrix,
    #[error("numeric overflow while evaluating the tau function")]
    NumericOverflow,
    #[error("dressing system is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("internal vertex `{0}` has degree above three")]
    DegreeTooHigh(String),
    #[error("no admissible normalization time in the scan budget")]
    NoGoodTimeInBudget,
    #[error("divisor point of `{0}` sits at a double point")]
    DivisorAtDoublePoint(String),
    #[error("divisor count check failed: {0}")]
    CountMismatch(String),
    #[error("{what} residual {value:e} exceeds tolerance")]
    Residual { what: String, value: f64 },
    #[error("positroid cell is reducible")]
    Reducible,
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Kasteleyn(#[from] KasteleynError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Whether a failure reflects bad input or a broken internal invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Invariant,
}

/// Umbrella error for callers that drive several modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Positroid(#[from] PositroidError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Kasteleyn(#[from] KasteleynError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Kp(#[from] KpError),
    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    /// Classifies the error for exit-code purposes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Kasteleyn(KasteleynError::NoSignature)
            | Error::Weight(WeightError::CertificationFailed)
            | Error::Kp(KpError::CountMismatch(_)) => ErrorClass::Invariant,
            _ => ErrorClass::Validation,
        }
    }
}
