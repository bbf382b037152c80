use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("CollinearPeriods: periods {0} and {1} are linearly dependent over the reals")]
    CollinearPeriods(String, String),
    #[error("ToleranceUnreachable: {0}")]
    ToleranceUnreachable(String),
    #[error("PoleAtLatticePoint: argument {0} is a lattice point")]
    PoleAtLatticePoint(String),
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("DivisorMismatch: {zeros} zeros but {poles} poles")]
    DivisorMismatch { zeros: usize, poles: usize },
    #[error("NotPrincipal: sum of poles minus zeros {0} is not a lattice point")]
    NotPrincipal(String),
    #[error("DivisionByZeroGerm: divisor jet has vanishing constant term")]
    DivisionByZeroGerm,
    #[error("StepUnderflow: step size {h:e} too small at t = {t}")]
    StepUnderflow { t: f64, h: f64 },
    #[error("MaxStepsExceeded: {0} steps taken")]
    MaxStepsExceeded(usize),
    #[error("RhsFailure at t = {t}: {source}")]
    RhsFailure { t: f64, source: Box<Error> },
    #[error("ParameterCollision: {0}")]
    ParameterCollision(String),
    #[error("ContourBlocked: {0}")]
    ContourBlocked(String),
    #[error("DegenerateCriticalPoint: {0}")]
    DegenerateCriticalPoint(String),
    #[error("LatticeDegenerate: Im(omega2) = {0} fell to or below 0.05")]
    LatticeDegenerate(f64),
    #[error("DegenerateTriangle: branch points are collinear or coincide")]
    DegenerateTriangle,
    #[error("PoleHit: {0}")]
    PoleHit(String),
    #[error("BranchPathCrossesSingularity: segment to {0} passes a cube root of unity")]
    BranchPathCrossesSingularity(String),
    #[error("SingularPoint: {0}")]
    SingularPoint(String),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("ParseError: {0}")]
    ParseError(String),
    #[error("SchemaError: {0}")]
    SchemaError(String),
    #[error("ValidationError: {0}")]
    ValidationError(String),
    #[error("IoError: {0}")]
    IoError(String),
}

impl Error {
    /// The bare variant name, used as the CLI's error label on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::CollinearPeriods(..) => "CollinearPeriods",
            Error::ToleranceUnreachable(_) => "ToleranceUnreachable",
            Error::PoleAtLatticePoint(_) => "PoleAtLatticePoint",
            Error::NoConvergence(_) => "NoConvergence",
            Error::DivisorMismatch { .. } => "DivisorMismatch",
            Error::NotPrincipal(_) => "NotPrincipal",
            Error::DivisionByZeroGerm => "DivisionByZeroGerm",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::MaxStepsExceeded(_) => "MaxStepsExceeded",
            Error::RhsFailure { .. } => "RhsFailure",
            Error::ParameterCollision(_) => "ParameterCollision",
            Error::ContourBlocked(_) => "ContourBlocked",
            Error::DegenerateCriticalPoint(_) => "DegenerateCriticalPoint",
            Error::LatticeDegenerate(_) => "LatticeDegenerate",
            Error::DegenerateTriangle => "DegenerateTriangle",
            Error::PoleHit(_) => "PoleHit",
            Error::BranchPathCrossesSingularity(_) => "BranchPathCrossesSingularity",
            Error::SingularPoint(_) => "SingularPoint",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::ParseError(_) => "ParseError",
            Error::SchemaError(_) => "SchemaError",
            Error::ValidationError(_) => "ValidationError",
            Error::IoError(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
