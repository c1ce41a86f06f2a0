use crate::jets::JetError;
use crate::metrics::ChartPoint;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FinslerError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("unknown fixture `{name}`; available: {available}")]
    UnknownFixture { name: String, available: String },
    #[error("invalid parameters for {fixture}: {reason}")]
    InvalidParams { fixture: String, reason: String },
    #[error("{point} lies outside the domain of {fixture}")]
    OutsideDomain { fixture: String, point: ChartPoint },
    #[error("degenerate fundamental tensor at {point}: {reason}")]
    DegenerateMetric { point: ChartPoint, reason: String },
    #[error("fixture {fixture} rejected: {reason} at {witness}")]
    FixtureInvalid {
        fixture: String,
        reason: String,
        witness: ChartPoint,
    },
    #[error("sampling gave up after {tries} draws with {accepted} of {requested} points accepted")]
    SamplingExhausted {
        tries: usize,
        accepted: usize,
        requested: usize,
    },
    #[error("tensor field `{0}` cannot be evaluated on jets")]
    NotJetCapable(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = FinslerError> = std::result::Result<T, E>;
