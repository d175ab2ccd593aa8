//! Environment specification files.
//!
//! One JSON document per environment: a name, the named objectives, and
//! either a grid description or an explicit transition table. Loading and
//! saving round-trip losslessly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::envs::grid::GridSpec;
use crate::error::Result;
use crate::mdp::{ActionNode, Outcome, StateNode, TaMdp};
use crate::objective::NamedObjective;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableOutcome {
    pub next: usize,
    pub prob: f64,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableAction {
    pub name: String,
    pub outcomes: Vec<TableOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableState {
    pub name: String,
    pub terminal: bool,
    #[serde(default)]
    pub actions: Vec<TableAction>,
}

/// Explicit-table form of an environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub start: usize,
    pub states: Vec<TableState>,
}

impl TableSpec {
    pub fn build(&self, name: &str, objectives: Vec<NamedObjective>) -> Result<TaMdp> {
        let states = self
            .states
            .iter()
            .map(|st| StateNode {
                name: st.name.clone(),
                terminal: st.terminal,
                actions: st
                    .actions
                    .iter()
                    .map(|a| ActionNode {
                        name: a.name.clone(),
                        outcomes: a
                            .outcomes
                            .iter()
                            .map(|o| Outcome { next: o.next, prob: o.prob, reward: o.reward })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        TaMdp::new(name, self.start, states, objectives)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MdpSpec {
    Grid(GridSpec),
    Table(TableSpec),
}

/// On-disk environment document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvFile {
    pub name: String,
    pub objectives: Vec<NamedObjective>,
    pub env: MdpSpec,
}

impl EnvFile {
    pub fn build(&self) -> Result<TaMdp> {
        match &self.env {
            MdpSpec::Grid(spec) => {
                let mdp = spec.build(self.objectives.clone())?;
                // keep the document's name
                TaMdp::new(
                    self.name.clone(),
                    mdp.start_state(),
                    mdp.states().to_vec(),
                    self.objectives.clone(),
                )
            }
            MdpSpec::Table(spec) => spec.build(&self.name, self.objectives.clone()),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<EnvFile> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(format!("{}\n", serde_json::to_string_pretty(self)?))
    }
}

/// The two shipped environments by name.
pub fn builtin(name: &str) -> Option<EnvFile> {
    use crate::objective::standard_objectives;
    match name {
        "paper_grid" => Some(EnvFile {
            name: "paper_grid".into(),
            objectives: standard_objectives(),
            env: MdpSpec::Grid(crate::envs::grid::paper_grid_spec()),
        }),
        "circular" => Some(EnvFile {
            name: "circular".into(),
            objectives: standard_objectives(),
            env: MdpSpec::Table(crate::envs::circular::circular_spec()),
        }),
        _ => None,
    }
}

/// Resolves an environment argument: a builtin name first, then a path.
pub fn resolve(name_or_path: &str) -> Result<EnvFile> {
    if let Some(b) = builtin(name_or_path) {
        return Ok(b);
    }
    EnvFile::load(name_or_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs_round_trip() {
        for name in ["paper_grid", "circular"] {
            let file = builtin(name).unwrap();
            let text = file.to_json_string().unwrap();
            let back: EnvFile = serde_json::from_str(&text).unwrap();
            assert_eq!(file, back);
            back.build().unwrap();
        }
    }
}
