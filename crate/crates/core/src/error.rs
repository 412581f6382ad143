use thiserror::Error;

/// Errors raised across the crate. Each message names the module and the
/// invariant that failed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MajoranaError {
    #[error("algebra: parse error: {0}")]
    Parse(String),

    #[error("model_builders: invalid model: {0}")]
    InvalidSpec(String),

    #[error("fock_rep: operator touches site {max_site} but only {modes} modes ({} generators) are available", 2 * .modes)]
    Dimension { max_site: usize, modes: usize },

    #[error("{module}: operator is not Hermitian (defect {defect:e})")]
    NotHermitian { module: &'static str, defect: f64 },

    #[error("spectral: operator is not quadratic, offending monomial {monomial}")]
    NotQuadratic { monomial: String },

    #[error("spectral: quadratic form is gapless or empty")]
    Gapless,

    #[error("{module}: domain error: {reason}")]
    Domain { module: &'static str, reason: String },

    #[error("zero_modes: obstruction at order {order}: least-squares residual {residual:e} exceeds {tolerance:e}; unresolved component {component}")]
    Obstruction {
        order: usize,
        residual: f64,
        tolerance: f64,
        component: String,
    },

    #[error("zero_modes: kernel dimension {dim} < 2 contradicts the odd-generator-count argument")]
    KernelTooSmall { dim: usize },

    #[error("{module}: contract violated: {reason}")]
    Contract { module: &'static str, reason: String },

    #[error("edge_index: ambiguous clustering: {reason}")]
    AmbiguousClustering { reason: String },
}

impl MajoranaError {
    /// Whether the failure is an internal-consistency breach rather than a
    /// numerical contract violation or bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, MajoranaError::KernelTooSmall { .. })
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            MajoranaError::Parse(_) | MajoranaError::InvalidSpec(_) | MajoranaError::Dimension { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, MajoranaError>;
