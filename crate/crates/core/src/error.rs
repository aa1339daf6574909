use thiserror::Error;

use crate::graphcore::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("invalid cyclic quotient 1/{n}(1,{q}): {reason}")]
    InvalidCyclicQuot { n: String, q: String, reason: &'static str },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("chain is not of class T")]
    NotClassT,
    #[error("branch at {0} is not a chain attached by an end")]
    BranchNotChain(VertexId),
    #[error("not a fiber: {0}")]
    NotAFiber(String),
    #[error("no contractible (-1)-curve")]
    NoContractible,
    #[error("invalid complement search: {0}")]
    InvalidSearch(String),
    #[error("unclassifiable fiber graph: {0}")]
    Unclassifiable(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
