//! Tabular time-adaptive MDPs.
//!
//! An episodic MDP is paired with a family of objectives f(R, T) over the
//! episode's total reward and length; a different objective can be active
//! each episode. Two ensemble learners build a library of policies across
//! time scales — one per discount factor, one per step horizon — and pick
//! the library entry that maximizes the active objective at episode start,
//! switching objectives without relearning. A time-indexed Q-learning
//! baseline and exact dynamic-programming solvers round out the toolkit.

pub mod agents;
pub mod envs;
pub mod episode;
pub mod error;
pub mod mdp;
pub mod objective;
pub mod oracle;
pub mod trace;

pub use episode::{run_episode, Agent, Transition, DEFAULT_MAX_STEPS};
pub use error::{Error, Result};
pub use mdp::{Action, Outcome, State, TaMdp};
pub use objective::{standard_objectives, NamedObjective, Objective};
pub use trace::EpisodeTrace;
