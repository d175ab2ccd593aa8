//! Learning agents and snapshot (de)serialization.

pub mod ige;
pub mod nse;
pub mod tqlearn;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::episode::{Agent, Transition};
use crate::error::Result;
use crate::mdp::{Action, State};
use crate::objective::Objective;

pub use ige::{gamma_ladder, GammaModule, IgeAgent};
pub use nse::{NStepModule, NseAgent};
pub use tqlearn::{phi_reward, TimeQAgent};

/// Any of the three learners, as stored in snapshot files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "algo")]
pub enum AgentSnapshot {
    Ige(IgeAgent),
    Nse(NseAgent),
    TimeQ(TimeQAgent),
}

impl AgentSnapshot {
    pub fn algo_name(&self) -> &'static str {
        match self {
            AgentSnapshot::Ige(_) => "ige",
            AgentSnapshot::Nse(_) => "nse",
            AgentSnapshot::TimeQ(_) => "tqlearn",
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AgentSnapshot> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

impl Agent for AgentSnapshot {
    fn begin_episode(&mut self, start: State, objective: &Objective) -> Result<()> {
        match self {
            AgentSnapshot::Ige(a) => a.begin_episode(start, objective),
            AgentSnapshot::Nse(a) => a.begin_episode(start, objective),
            AgentSnapshot::TimeQ(a) => a.begin_episode(start, objective),
        }
    }

    fn act(&mut self, state: State, rng: &mut dyn rand::RngCore) -> Action {
        match self {
            AgentSnapshot::Ige(a) => a.act(state, rng),
            AgentSnapshot::Nse(a) => a.act(state, rng),
            AgentSnapshot::TimeQ(a) => a.act(state, rng),
        }
    }

    fn observe(&mut self, transition: &Transition) {
        match self {
            AgentSnapshot::Ige(a) => a.observe(transition),
            AgentSnapshot::Nse(a) => a.observe(transition),
            AgentSnapshot::TimeQ(a) => a.observe(transition),
        }
    }

    fn set_alpha(&mut self, alpha: f64) {
        match self {
            AgentSnapshot::Ige(a) => a.set_alpha(alpha),
            AgentSnapshot::Nse(a) => a.set_alpha(alpha),
            AgentSnapshot::TimeQ(a) => a.set_alpha(alpha),
        }
    }

    fn set_epsilon(&mut self, epsilon: f64) {
        match self {
            AgentSnapshot::Ige(a) => a.set_epsilon(epsilon),
            AgentSnapshot::Nse(a) => a.set_epsilon(epsilon),
            AgentSnapshot::TimeQ(a) => a.set_epsilon(epsilon),
        }
    }
}
