use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant has a stable machine-readable code (see [`Error::code`]) that
/// the command-line front end emits in its JSON error records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // graph construction
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("edge {0} carries a zero index")]
    ZeroIndex(String),
    #[error("graph is disconnected ({0} vertices unreachable)")]
    Disconnected(usize),
    #[error("bad edge involution: {0}")]
    BadInvolution(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("identifier {0} already in use")]
    DuplicateId(String),
    #[error("integer overflow in index arithmetic")]
    Overflow,

    // moves
    #[error("cannot collapse loop {0}")]
    LoopCollapse(String),
    #[error("edge end {0} does not carry index +-1")]
    NotCollapsible(String),
    #[error("edge end {end} has index not divisible by {n}")]
    IndivisibleEnd { end: String, n: i64 },
    #[error("vertex {0} does not exist")]
    EmptyVertex(String),
    #[error("edge end {0} is not based at the required vertex")]
    NotCoincident(String),
    #[error("index of {over} does not divide index of {end}")]
    NotDivisible { end: String, over: String },
    #[error("edge {0} cannot slide over itself")]
    SelfSlide(String),
    #[error("{0} is not an ascending loop")]
    NotAscendingLoop(String),
    #[error("factor {factor} does not divide the loop index {index}")]
    FactorNotDividing { factor: i64, index: i64 },
    #[error("edge end {end} is not divisible by the induction factor {factor}")]
    EndNotDivisible { end: String, factor: i64 },
    #[error("graph is not reduced")]
    NotReduced,

    // moduli
    #[error("modular group has a non-trivial integral element")]
    IntegralModuli,

    // full reduction
    #[error("malformed admissible path: {0}")]
    MalformedPath(String),
    #[error("path is not admissible")]
    NotAdmissible,
    #[error("path does not have the required shape: {0}")]
    WrongShape(String),

    // slide closure
    #[error("slide closure exceeded the state budget of {0}")]
    StateBudgetExceeded(usize),
    #[error("slide closure reached a collapsible state")]
    CollapsibleStateReached,

    // rewriting
    #[error("strict ascending loop obstructs rewriting at position {0}")]
    AscendingLoopObstruction(usize),
    #[error("no rewrite rule matches at position {0}")]
    NoPattern(usize),
    #[error("normalization exceeded {0} rewrite steps")]
    NonTerminating(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier for machine consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::ZeroIndex(_) => "ZeroIndex",
            Error::Disconnected(_) => "Disconnected",
            Error::BadInvolution(_) => "BadInvolution",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::DuplicateId(_) => "DuplicateId",
            Error::Overflow => "Overflow",
            Error::LoopCollapse(_) => "LoopCollapse",
            Error::NotCollapsible(_) => "NotCollapsible",
            Error::IndivisibleEnd { .. } => "IndivisibleEnd",
            Error::EmptyVertex(_) => "EmptyVertex",
            Error::NotCoincident(_) => "NotCoincident",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::SelfSlide(_) => "SelfSlide",
            Error::NotAscendingLoop(_) => "NotAscendingLoop",
            Error::FactorNotDividing { .. } => "FactorNotDividing",
            Error::EndNotDivisible { .. } => "EndNotDivisible",
            Error::NotReduced => "NotReduced",
            Error::IntegralModuli => "IntegralModuli",
            Error::MalformedPath(_) => "MalformedPath",
            Error::NotAdmissible => "NotAdmissible",
            Error::WrongShape(_) => "WrongShape",
            Error::StateBudgetExceeded(_) => "StateBudgetExceeded",
            Error::CollapsibleStateReached => "CollapsibleStateReached",
            Error::AscendingLoopObstruction(_) => "AscendingLoopObstruction",
            Error::NoPattern(_) => "NoPattern",
            Error::NonTerminating(_) => "NonTerminating",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
