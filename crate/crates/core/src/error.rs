use thiserror::Error;

/// Malformed graph6, edge-list, descriptor or certificate input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{what}: instance of size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("clique enumeration overflow: more than {cap} cliques")]
    CliqueOverflow { cap: usize },

    #[error("vertex {vertex} lies in more than one class")]
    OverlappingClasses { vertex: usize },

    #[error("vertex {vertex} is not covered by any class")]
    UncoveredVertex { vertex: usize },

    #[error("input contains K_{k}: {witness:?}")]
    ContainsClique { k: usize, witness: Vec<usize> },

    #[error("graph is not {k}-saturated: adding {u}-{v} creates no K_{k}")]
    NotSaturated { k: usize, u: usize, v: usize },

    #[error("non-edge {u}-{v} completes to K_{k} entirely outside the designated set")]
    CompletionOutsideDesignated { k: usize, u: usize, v: usize },

    #[error("colouring search exhausted its budget of {budget} nodes")]
    BudgetExhausted { budget: u64 },

    #[error("invalid parameters: violated {0}")]
    InvalidParams(String),

    #[error("coverage audit failed: {0}")]
    Audit(String),

    #[error("{0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
