use thiserror::Error;

/// Errors raised by the channel model, the protocol tables and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed probability fell outside its tolerance band.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A two-state chain with no transitions at all.
    #[error("degenerate chain: {0}")]
    DegenerateChain(String),

    /// The protocol was asked to do something the retransmission table never allows.
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Transition matrix failed its own consistency checks.
    #[error("construction error: {0}")]
    Construction(String),

    #[error("steady-state solver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
