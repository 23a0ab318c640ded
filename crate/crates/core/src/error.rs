use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exponential routine was asked to run beyond its configured size.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The structure cannot be destroyed by deleting arcs (single-node digraph).
    #[error("no arc set blocks every {0}")]
    Unblockable(String),

    #[error("tightening oracle violated its contract: {0}")]
    OracleContract(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
