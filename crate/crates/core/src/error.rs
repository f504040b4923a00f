use thiserror::Error;

use crate::io::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live over different generator lists")]
    MismatchedVariables,

    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),

    #[error("generator {0} must have positive degree")]
    ZeroDegreeGenerator(String),

    #[error("slot collision: generator {0} already occupies that slot")]
    SlotCollision(String),

    #[error("degree {degree} is outside 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("{what} is not homogeneous (degrees {degrees:?})")]
    Inhomogeneous { what: String, degrees: Vec<u32> },

    #[error("{what} has degree {found}, expected {expected}")]
    WrongDegree {
        what: String,
        expected: u32,
        found: u32,
    },

    #[error("not a homomorphism: relation `{relation}` maps to `{image}`")]
    NotHomomorphism { relation: String, image: String },

    #[error("restriction map is not surjective in degree {degree} (rank {rank}, target rank {target})")]
    NotSurjective {
        degree: usize,
        rank: usize,
        target: usize,
    },

    #[error("invalid diagonal: ({generator}⊗1)·Δ - (1⊗{generator})·Δ = {residual}")]
    InvalidDiagonal { generator: String, residual: String },

    #[error("invalid diagonal: component of bidegree (d, 0) is {found}, expected {expected}")]
    DiagonalNormalization { found: String, expected: String },

    #[error("group generated by the action exceeds {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("dimension must be ≥ 1")]
    DimensionTooSmall,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("not a nested-Hilbert class: degree {degree} component `{component}` lies outside the model")]
    NotInModel { degree: usize, component: String },

    #[error(
        "image of the push-pull operator differs from the generated subring in degree {degree}: \
         image rank {image_rank}, closure rank {closure_rank}, witness `{witness}`"
    )]
    ImageClosureMismatch {
        degree: usize,
        image_rank: usize,
        closure_rank: usize,
        witness: String,
    },

    #[error("push-pull rules are inconsistent in degree {degree}: {detail}")]
    InconsistentOperator { degree: usize, detail: String },

    #[error("chosen generators do not generate the subring: first failing degree {degree}")]
    InsufficientGenerators { degree: usize },

    #[error("model check failed: {0}")]
    ModelCheck(String),

    #[error("unknown built-in variety `{0}`")]
    UnknownBuiltin(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True when the failure is a mathematical inconsistency rather than bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::ImageClosureMismatch { .. }
                | Error::InconsistentOperator { .. }
                | Error::ModelCheck(_)
                | Error::NotSurjective { .. }
        )
    }
}
