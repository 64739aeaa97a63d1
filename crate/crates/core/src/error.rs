use thiserror::Error;

/// Errors raised by the library.
///
/// Refutations from the exceptional-graph recognizer are *not* errors; they
/// are ordinary values (see [`crate::families::Refutation`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("graph order {order} exceeds the supported maximum of {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// The search exhausted its node-expansion budget before reaching a
    /// verdict. This is never reported as "no cycle".
    #[error("search budget of {budget} node expansions exhausted{}", graph.as_ref().map(|g| format!(" on graph {g}")).unwrap_or_default())]
    Indeterminate { budget: u64, graph: Option<String> },

    /// An internal consistency check failed (e.g. the derived special
    /// catalog does not have the expected shape).
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }

    /// Attach the offending graph (as graph6) to an `Indeterminate` error.
    pub fn with_graph(self, g6: String) -> Self {
        match self {
            Error::Indeterminate { budget, graph: None } => Error::Indeterminate {
                budget,
                graph: Some(g6),
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
