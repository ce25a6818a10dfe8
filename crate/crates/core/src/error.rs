use thiserror::Error;

/// Errors raised by the numerical toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("exponent is not log-Hölder continuous: {0}")]
    NotLogHoelder(String),

    #[error("theta {theta} outside the admissible range (0, {max})")]
    ThetaOutOfRange { theta: f64, max: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("interval ({a}, {b}) is not inside the grid")]
    IntervalOutOfGrid { a: f64, b: f64 },

    #[error("boundary samples {boundary:.3e} exceed 1e-8 of the peak {peak:.3e}")]
    DecayViolation { boundary: f64, peak: f64 },

    #[error("search budget is zero")]
    BudgetZero,

    #[error("no upper bound available: {0}")]
    NoUpperBoundAvailable(String),

    #[error("inconsistent norm bracket: lower {lower} exceeds upper {upper}")]
    InconsistentBracket { lower: f64, upper: f64 },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("unbounded variation: {0}")]
    UnboundedVariation(String),

    #[error("symbol is not in Wiener form: {0}")]
    NotInWienerForm(String),

    #[error("symbol is not in SO^3: {0}")]
    NotInSO3(String),

    #[error("no multiplier bound available: {0}")]
    NoMultiplierBound(String),

    #[error("symbol does not vanish at infinity: {0}")]
    NonDecaying(String),

    #[error("bad interpolation decomposition: {0}")]
    BadDecomposition(String),

    #[error("eta {0} outside (0, 1]")]
    EtaOutOfRange(f64),

    #[error("limits at -inf and +inf differ: {minus} vs {plus}")]
    NotDotContinuous { minus: String, plus: String },

    #[error("oracle dimension {0} exceeds the budget of 64")]
    BudgetExceeded(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by malformed input text rather than by the mathematics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Json(_) | Error::Csv(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
