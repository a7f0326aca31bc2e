use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid coefficient ring Z/{p}^{k}: {reason}")]
    InvalidRing { p: u64, k: u32, reason: String },

    #[error("NotAUnit: {value} has positive valuation in Z/{modulus}")]
    NotAUnit { value: u64, modulus: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("coefficient rings differ: Z/{left} vs Z/{right}")]
    RingMismatch { left: u64, right: u64 },

    #[error("invalid module exponent {exponent} (must lie in 1..={k})")]
    InvalidExponent { exponent: u32, k: u32 },

    #[error(
        "morphism is not well defined at ({row}, {col}): entry {entry} needs valuation >= {required}"
    )]
    IllDefinedMorphism {
        row: usize,
        col: usize,
        entry: u64,
        required: u32,
    },

    #[error("NotAComplex: composite of consecutive differentials is nonzero")]
    NotAComplex,

    #[error("ActionsDoNotCommute: x_{i} and x_{j} do not commute")]
    ActionsDoNotCommute { i: usize, j: usize },

    #[error("ActionNotInRadical: x_{index} is not nilpotent on the module")]
    ActionNotInRadical { index: usize },

    #[error("action sequence is empty (n must be at least 1)")]
    EmptySequence,

    #[error("matrix is not invertible over Z/{modulus}")]
    NotInvertible { modulus: u64 },

    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),

    #[error("DegreeBudgetExceeded: quotient not seen to vanish up to degree {bound}; raise the degree bound")]
    DegreeBudgetExceeded { bound: i32 },

    #[error("sequence is not regular on the base ring (H_{index} nonzero in degree {degree})")]
    NotRegular { index: usize, degree: i32 },

    #[error("p-monomial ideal is not cofinite: no pure power of X_{variable}")]
    NotCofinite { variable: usize },

    #[error("enumeration bound exceeded: {size} elements > {bound}")]
    EnumerationBoundExceeded { size: u128, bound: u128 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
