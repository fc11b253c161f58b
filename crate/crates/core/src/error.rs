use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid modulus {0}: expected a prime below 2^31")]
    InvalidModulus(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("family condition violated: {0}")]
    FamilyCondition(String),

    #[error("degree {degree} too small: plane model needs degree >= {min}")]
    Degree { degree: u32, min: u32 },

    #[error("exponent bound exceeded: (p-1)*d + d = {0} does not fit below 2^31")]
    ExponentOverflow(u64),

    #[error("monomial x^{i} y^{j} is outside the adjoint basis (i + j <= {max})")]
    Basis { i: u32, j: u32, max: u32 },

    #[error("monomial x^{i} y^{j} is not a p-th power (p = {p})")]
    NotPthPower { i: u32, j: u32, p: u32 },

    #[error(
        "Cartier image of column x^{col_i} y^{col_j} hits x^{row_a} y^{row_b}, outside the adjoint span \
         (singular model or coefficients outside the prime field?)"
    )]
    Consistency {
        col_i: u32,
        col_j: u32,
        row_a: u32,
        row_b: u32,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("closed form inconsistent: {0}")]
    FormulaMismatch(String),

    #[error("genus {genus} exceeds the guard {max} (raise --max-genus to override)")]
    GenusGuard { genus: usize, max: usize },

    #[error("extension degree {0} exceeds the scan limit of 4")]
    ScanLimit(u32),

    #[error("{}:{line}: {msg}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        msg: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
