use thiserror::Error;

use crate::matroid::SubSimplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("point {0:?} is not in the ground set")]
    PointOutsideGround(Vec<usize>),

    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<usize>),

    #[error("ground set of {size} points exceeds the configured limit {limit}")]
    GroundTooLarge { size: usize, limit: usize },

    #[error("simplices are disjoint: meet anchor {anchor:?} would have size {size}")]
    DisjointSimplices { anchor: Vec<usize>, size: i64 },

    #[error("malformed set system: {0}")]
    MalformedBlocks(String),

    #[error("budget of {budget} exceeded while {what}")]
    BudgetExceeded { what: String, budget: u64 },

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("random sample stayed singular after {0} retries")]
    SingularSample(usize),

    #[error("non-generic family: intersection at {point:?} has dimension {dim}")]
    NonGenericFamily { point: Vec<usize>, dim: usize },

    #[error("non-generic hyperplane sample: {0}")]
    NonGenericHyperplanes(String),

    #[error("not a representation of the flag matroid: {0}")]
    NotRepresentation(String),

    #[error("weight collision: independence verdicts disagree across seeds for {0:?}")]
    WeightCollision(Vec<Vec<usize>>),

    #[error("symbolic mode is limited to n <= {limit}, got n = {n}")]
    SymbolicTooLarge { n: usize, limit: usize },

    #[error("expected {expected} holes, got {got}")]
    WrongHoleCount { expected: usize, got: usize },

    #[error("holes are not a basis: simplex {witness} is overfull")]
    NotBasis { witness: SubSimplex },

    #[error("malformed tiling: {0}")]
    MalformedTiling(String),

    #[error("malformed routing: {0}")]
    MalformedRouting(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("not a triangulation: {0}")]
    NotTriangulation(String),

    #[error("non-generic weights: edge ({0}, {1}) is tight outside a tree")]
    NonGenericWeights(usize, usize),

    #[error("malformed floors: {0}")]
    MalformedFloors(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::PointOutsideGround(_) => "point_outside_ground",
            Error::DuplicatePoint(_) => "duplicate_point",
            Error::GroundTooLarge { .. } => "ground_too_large",
            Error::DisjointSimplices { .. } => "disjoint_simplices",
            Error::MalformedBlocks(_) => "malformed_blocks",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::AmbientMismatch(..) => "ambient_mismatch",
            Error::NonSquare { .. } => "non_square",
            Error::MalformedMatrix(_) => "malformed_matrix",
            Error::SingularSample(_) => "singular_sample",
            Error::NonGenericFamily { .. } => "non_generic_family",
            Error::NonGenericHyperplanes(_) => "non_generic_hyperplanes",
            Error::NotRepresentation(_) => "not_representation",
            Error::WeightCollision(_) => "weight_collision",
            Error::SymbolicTooLarge { .. } => "symbolic_too_large",
            Error::WrongHoleCount { .. } => "wrong_hole_count",
            Error::NotBasis { .. } => "not_basis",
            Error::MalformedTiling(_) => "malformed_tiling",
            Error::MalformedRouting(_) => "malformed_routing",
            Error::MalformedTree(_) => "malformed_tree",
            Error::NotTriangulation(_) => "not_triangulation",
            Error::NonGenericWeights(..) => "non_generic_weights",
            Error::MalformedFloors(_) => "malformed_floors",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
        }
    }
}
