use thiserror::Error;

pub type Result<T, E = OppError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OppError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("non-manifold mesh: {0}")]
    NonManifold(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    /// Collision constraints contradict the existing dependencies.
    #[error("collision constraints form a cycle through elements {0:?}; the orientation is unprintable")]
    CollisionCycle(Vec<usize>),

    #[error("graph contains a cycle")]
    Cyclic,

    #[error("exact path cover oracle refused a graph with {nodes} nodes (limit {limit})")]
    OracleTooLarge { nodes: usize, limit: usize },

    #[error("graph text, line {line}: {message}")]
    GraphParse { line: usize, message: String },
}
