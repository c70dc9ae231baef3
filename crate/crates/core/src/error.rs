use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("homogeneity check failed: {0}")]
    NotHomogeneous(String),
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,
    #[error("witness set construction failed: {0}")]
    Witness(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("dimension differs between two general samples ({first} vs {second})")]
    InconsistentDimension { first: usize, second: usize },
    #[error("kernel dimension is indeterminate ({reason})")]
    IndeterminateKernel {
        reason: String,
        singular_values: Vec<f64>,
    },
    #[error("pseudo-witness set is not complete; membership needs every slice point")]
    IncompleteWitness,
    #[error("path tracking failed: {0}")]
    Tracking(String),
}

impl Error {
    /// Whether the error comes from malformed input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownVariable { .. }
                | Error::NegativeExponent { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidProblem(_)
                | Error::NotHomogeneous(_)
                | Error::IncompleteWitness
        )
    }
}
