use thiserror::Error;

/// Errors surfaced by lattice algebra, analysis, constructions and verification.
///
/// The variant names double as the machine-readable error names written by the
/// CLI, so renaming a variant is a breaking change of the JSON interface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GsiError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("incompatible ambient groups: {0}")]
    IncompatibleAmbient(String),
    #[error("intersection is not a full-rank lattice")]
    EmptyIntersectionRank,
    #[error("not a sublattice: {0}")]
    NotASublattice(String),
    #[error("unsupported group model: {0}")]
    UnsupportedModel(String),
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("{divisor} does not divide {modulus}")]
    NotADivisor { modulus: u64, divisor: u64 },
    #[error("frequency {alpha} is not in the dual lattice of layer {layer}")]
    FrequencyNotInDualLattice { layer: usize, alpha: String },
    #[error("frequency {0} is not in any dual lattice of the system")]
    FrequencyNotInAnyDualLattice(String),
    #[error("function cannot be evaluated: {0}")]
    NonEvaluable(String),
    #[error("full-family w-function is neither computable nor supplied")]
    TargetUnknown,
    #[error("tiling violation in layer {layer}: {witness}")]
    TilingViolation { layer: usize, witness: String },
    #[error("insufficient volume: {0}")]
    InsufficientVolume(String),
    #[error("condition number bound exceeded for matrix {index}: ratio {ratio} > {bound}")]
    ConditionExceeded { index: usize, ratio: f64, bound: f64 },
    #[error("subgroup chain is not strictly decreasing at position {0}")]
    ChainNotStrict(usize),
    #[error("subgroup at position {0} does not have finite index")]
    NotFiniteIndex(usize),
    #[error("not a refinement of layer {layer}: {witness}")]
    NotARefinement { layer: usize, witness: String },
    #[error("model too large: {0}")]
    ModelTooLarge(String),
    #[error("blind spot intersects the spectrum support: {0}")]
    BlindSpotViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GsiError {
    /// Stable error name used in JSON error objects.
    pub fn name(&self) -> &'static str {
        match self {
            GsiError::SingularMatrix => "SingularMatrix",
            GsiError::IncompatibleAmbient(_) => "IncompatibleAmbient",
            GsiError::EmptyIntersectionRank => "EmptyIntersectionRank",
            GsiError::NotASublattice(_) => "NotASublattice",
            GsiError::UnsupportedModel(_) => "UnsupportedModel",
            GsiError::VariantMismatch(_) => "VariantMismatch",
            GsiError::NotADivisor { .. } => "NotADivisor",
            GsiError::FrequencyNotInDualLattice { .. } => "FrequencyNotInDualLattice",
            GsiError::FrequencyNotInAnyDualLattice(_) => "FrequencyNotInAnyDualLattice",
            GsiError::NonEvaluable(_) => "NonEvaluable",
            GsiError::TargetUnknown => "TargetUnknown",
            GsiError::TilingViolation { .. } => "TilingViolation",
            GsiError::InsufficientVolume(_) => "InsufficientVolume",
            GsiError::ConditionExceeded { .. } => "ConditionExceeded",
            GsiError::ChainNotStrict(_) => "ChainNotStrict",
            GsiError::NotFiniteIndex(_) => "NotFiniteIndex",
            GsiError::NotARefinement { .. } => "NotARefinement",
            GsiError::ModelTooLarge(_) => "ModelTooLarge",
            GsiError::BlindSpotViolation(_) => "BlindSpotViolation",
            GsiError::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, GsiError>;
