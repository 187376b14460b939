use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("unsupported spin value {0}; expected 1/2, 1 or 3/2")]
    UnsupportedSpin(String),
    #[error("dimension mismatch: {what} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("state {0} is not defined for this spin")]
    NoSuchEigenstate(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdeError {
    #[error("noise path needs at least one step")]
    ZeroSteps,
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("non-finite coefficients at step {step}; state = {state:?}")]
    NonFinite { step: usize, state: Vec<f64> },
    #[error("Hamiltonian is not Hermitian (deviation {0:.3e})")]
    NonHermitianHamiltonian(f64),
    #[error("all Kraus branch probabilities are non-positive")]
    DegenerateBranches,
    #[error(
        "physicality failure at step {step}: min eigenvalue {min_eigenvalue:.3e}, trace error {trace_error:.3e}; state = {state:?}"
    )]
    Unphysical {
        step: usize,
        min_eigenvalue: f64,
        trace_error: f64,
        state: Vec<f64>,
    },
    #[error("model {model} is not available for spin {spin}")]
    UnsupportedModel { model: String, spin: String },
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),
    #[error("trajectory {index} failed: {source}")]
    Trajectory {
        index: usize,
        #[source]
        source: Box<SdeError>,
    },
    #[error(transparent)]
    Spin(#[from] SpinError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("trajectory contains no samples")]
    EmptyTrajectory,
    #[error("no input trajectories")]
    NoInput,
    #[error("need at least {min} bins, got {got}")]
    TooFewBins { min: usize, got: usize },
    #[error("vicinity half-width {half_width} is not below half the minimum eigenvalue gap {half_gap}")]
    OverlappingVicinities { half_width: f64, half_gap: f64 },
    #[error("trajectory spans zero time")]
    ZeroDuration,
    #[error("record is missing the {0} series")]
    MissingSeries(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("key '{key}'{}: {message}", .line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Key {
        key: String,
        line: Option<usize>,
        message: String,
    },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{path} line {line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Sde(#[from] SdeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{failed} of {total} validation checks failed")]
    ValidationFailed { failed: usize, total: usize },
}

impl RunError {
    /// 1 for bad input, 2 for numerical failure, 3 for failed validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::File { .. } | RunError::Format { .. } => 1,
            RunError::Sde(SdeError::InvalidParams(_))
            | RunError::Sde(SdeError::UnsupportedModel { .. })
            | RunError::Sde(SdeError::InvalidInitialState(_)) => 1,
            RunError::Sde(_) | RunError::Analysis(_) => 2,
            RunError::ValidationFailed { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::File { .. } => "file",
            RunError::Format { .. } => "format",
            RunError::Sde(_) => "numerical",
            RunError::Analysis(_) => "analysis",
            RunError::ValidationFailed { .. } => "validation",
        }
    }
}
