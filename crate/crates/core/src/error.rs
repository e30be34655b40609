//! Error type shared by every module of the crate.

/// Errors produced by algebra, module, frame, perturbation, tensor and
/// fusion operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    /// Two elements live over different block signatures.
    #[error("incompatible signatures: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    /// A block index fell outside `0..num_blocks`.
    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndexOutOfRange { index: usize, blocks: usize },

    /// An operation required a Hermitian matrix block.
    #[error("block {block} must be Hermitian (deviation {deviation:.3e}, tolerance {tol:.3e})")]
    HermitianRequired {
        block: usize,
        deviation: f64,
        tol: f64,
    },

    /// An operation required a positive element or operator.
    #[error("not positive: block {block} has eigenvalue {eigenvalue:.6e}")]
    NotPositive { block: usize, eigenvalue: f64 },

    /// Inversion of a (numerically) singular element or operator.
    #[error("not invertible: block {block} has spectral floor {floor:.3e} below threshold {threshold:.3e}")]
    NotInvertible {
        block: usize,
        floor: f64,
        threshold: f64,
    },

    /// Two module values live over different spaces.
    #[error("module spaces differ: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    /// A coefficient sequence does not match the frame's index set.
    #[error("family length {got} does not match expected length {expected}")]
    LengthMismatch { got: usize, expected: usize },

    /// The family fails the lower frame inequality.
    #[error("not a frame: optimal lower bound {lower:.3e} is at or below tolerance {tol:.3e}")]
    NotAFrame { lower: f64, tol: f64 },

    /// A self-adjoint operator was required.
    #[error("not self-adjoint: block {block} deviates by {deviation:.3e}")]
    NotSelfAdjoint { block: usize, deviation: f64 },

    /// A surjective operator was required.
    #[error("not surjective: block {block} has minimal singular value {sigma_min:.3e}")]
    NotSurjective { block: usize, sigma_min: f64 },

    /// A matrix block has the wrong dimensions.
    #[error("shape mismatch for {what}: expected {expected}, got {got}")]
    ShapeMismatch {
        what: String,
        expected: String,
        got: String,
    },

    /// A family of operators or elements was empty.
    #[error("family must be nonempty")]
    EmptyFamily,

    /// A conjugator supposed to be unitary was not.
    #[error("{what} at block {block} is not unitary (deviation {deviation:.3e})")]
    NotUnitary {
        what: String,
        block: usize,
        deviation: f64,
    },

    /// A block homomorphism or module transport map is malformed.
    #[error("incompatible map: {reason}")]
    IncompatibleMap { reason: String },

    /// A claimed submodule projection is not Hermitian idempotent.
    #[error("invalid projection at block {block}: {reason} (deviation {deviation:.3e})")]
    InvalidProjection {
        block: usize,
        reason: &'static str,
        deviation: f64,
    },

    /// A central weight must be strictly positive in every block.
    #[error("invalid weight: entry {index}, block {block} has value {value}")]
    InvalidWeight {
        index: usize,
        block: usize,
        value: f64,
    },

    /// The weighted projection system fails the fusion lower bound.
    #[error("not a fusion frame: induced lower bound {lower:.3e}")]
    NotAFusionFrame { lower: f64 },

    /// A dual-check precondition failed (distinct from the check itself
    /// returning false).
    #[error("dual precondition failed: {reason}")]
    DualPrecondition { reason: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
