// SPDX-License-Identifier: Apache-2.0

use crate::graph::Node;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Node, n: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(Node),
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(Node, Node),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(Node, Node),
    #[error("invalid edge weight {0}: weights must be finite and positive")]
    InvalidWeight(f64),
    #[error("{0} requires an undirected graph")]
    Directed(&'static str),
    #[error("{0} requires a connected graph")]
    Disconnected(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for failures caused by malformed input files or I/O.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io(_))
    }
}
