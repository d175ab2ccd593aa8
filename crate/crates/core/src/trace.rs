use serde::{Deserialize, Serialize};

use crate::mdp::{Action, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub state: State,
    pub action: Action,
    pub reward: f64,
}

/// Record of one episode: the visited (state, action, reward) sequence,
/// its totals, and the active objective's outcome. `terminated` is false
/// when the episode was cut off at the step cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeTrace {
    pub steps: Vec<TraceStep>,
    pub total_reward: f64,
    pub length: u32,
    pub outcome: f64,
    pub terminated: bool,
}

impl EpisodeTrace {
    /// Recomputes R and T from the step list; used by consistency checks.
    pub fn recompute_totals(&self) -> (f64, u32) {
        let r: f64 = self.steps.iter().map(|s| s.reward).sum();
        (r, self.steps.len() as u32)
    }
}
