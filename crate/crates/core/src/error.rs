use thiserror::Error;

use crate::mdp::State;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid MDP: {0}")]
    InvalidMdp(String),

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("state {state} is terminal")]
    TerminalState { state: State },

    #[error("action {action} out of range for state {state} ({available} available)")]
    InvalidAction {
        state: State,
        action: usize,
        available: usize,
    },

    #[error("objective not registered with this agent: {0}")]
    UnknownObjective(String),

    #[error("improper policy: no path to a terminal state from {stuck:?}")]
    ImproperPolicy { stuck: Vec<State> },

    #[error("policy undefined at reachable state {state}")]
    PartialPolicy { state: State },

    #[error("iteration cap {cap} reached (residual {residual:.3e})")]
    NonConvergence { cap: usize, residual: f64 },

    #[error("policy enumeration cap {cap} exceeded ({needed} policies)")]
    EnumerationCapExceeded { cap: usize, needed: f64 },

    #[error("agent tables do not match environment shape: {0}")]
    ShapeMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
