//! Tabular MDP with terminal states and an attached family of objectives.

use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::NamedObjective;

pub type State = usize;
pub type Action = usize;

/// One possible result of taking an action: successor state, probability,
/// and the reward collected on that transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub next: State,
    pub prob: f64,
    pub reward: f64,
}

#[derive(Debug, Clone)]
pub struct ActionNode {
    pub name: String,
    pub outcomes: Vec<Outcome>,
}

#[derive(Debug, Clone)]
pub struct StateNode {
    pub name: String,
    pub terminal: bool,
    pub actions: Vec<ActionNode>,
}

/// A time-adaptive MDP: a finite MDP plus an ordered list of named
/// objectives, one of which is active per episode. Immutable after
/// construction and safe to share across concurrent runs.
#[derive(Debug, Clone)]
pub struct TaMdp {
    name: String,
    start: State,
    states: Vec<StateNode>,
    objectives: Vec<NamedObjective>,
}

pub const PROB_TOLERANCE: f64 = 1e-9;

impl TaMdp {
    pub fn new(
        name: impl Into<String>,
        start: State,
        states: Vec<StateNode>,
        objectives: Vec<NamedObjective>,
    ) -> Result<Self> {
        let mdp = TaMdp { name: name.into(), start, states, objectives };
        mdp.validate()?;
        Ok(mdp)
    }

    fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::InvalidMdp("no states".into()));
        }
        if self.start >= n {
            return Err(Error::InvalidMdp(format!("start state {} out of range", self.start)));
        }
        if self.states[self.start].terminal {
            return Err(Error::InvalidMdp("start state is terminal".into()));
        }
        for (s, node) in self.states.iter().enumerate() {
            if node.terminal && !node.actions.is_empty() {
                return Err(Error::InvalidMdp(format!(
                    "terminal state {s} ({}) has outgoing transitions",
                    node.name
                )));
            }
            if !node.terminal && node.actions.is_empty() {
                return Err(Error::InvalidMdp(format!(
                    "non-terminal state {s} ({}) has no actions",
                    node.name
                )));
            }
            for (a, act) in node.actions.iter().enumerate() {
                let mut total = 0.0;
                for o in &act.outcomes {
                    if o.next >= n {
                        return Err(Error::InvalidMdp(format!(
                            "transition ({s},{a}) targets missing state {}",
                            o.next
                        )));
                    }
                    if o.prob < 0.0 || !o.prob.is_finite() {
                        return Err(Error::InvalidMdp(format!(
                            "transition ({s},{a}) has invalid probability {}",
                            o.prob
                        )));
                    }
                    total += o.prob;
                }
                if (total - 1.0).abs() > PROB_TOLERANCE {
                    return Err(Error::InvalidMdp(format!(
                        "transition row ({s},{a}) sums to {total}, expected 1"
                    )));
                }
            }
        }
        for named in &self.objectives {
            named.objective.validate()?;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn start_state(&self) -> State {
        self.start
    }

    pub fn is_terminal(&self, s: State) -> bool {
        self.states[s].terminal
    }

    pub fn num_actions(&self, s: State) -> usize {
        self.states[s].actions.len()
    }

    pub fn outcomes(&self, s: State, a: Action) -> &[Outcome] {
        &self.states[s].actions[a].outcomes
    }

    pub fn state_name(&self, s: State) -> &str {
        &self.states[s].name
    }

    pub fn action_name(&self, s: State, a: Action) -> &str {
        &self.states[s].actions[a].name
    }

    pub fn states(&self) -> &[StateNode] {
        &self.states
    }

    pub fn objectives(&self) -> &[NamedObjective] {
        &self.objectives
    }

    pub fn objective_named(&self, name: &str) -> Option<&NamedObjective> {
        self.objectives.iter().find(|o| o.name == name)
    }

    pub fn terminal_states(&self) -> Vec<State> {
        (0..self.num_states()).filter(|&s| self.is_terminal(s)).collect()
    }

    /// Samples one transition. Fails on terminal states and out-of-range
    /// actions; episode loops should stop before re-entering a terminal.
    pub fn step<R: Rng + ?Sized>(
        &self,
        s: State,
        a: Action,
        rng: &mut R,
    ) -> Result<(State, f64, bool)> {
        if s >= self.num_states() || self.is_terminal(s) {
            return Err(Error::TerminalState { state: s });
        }
        let available = self.num_actions(s);
        if a >= available {
            return Err(Error::InvalidAction { state: s, action: a, available });
        }
        let outcomes = self.outcomes(s, a);
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = outcomes.len() - 1;
        for (i, o) in outcomes.iter().enumerate() {
            acc += o.prob;
            if u < acc {
                chosen = i;
                break;
            }
        }
        let o = &outcomes[chosen];
        Ok((o.next, o.reward, self.is_terminal(o.next)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn deterministic_chain() -> TaMdp {
        // s0 -> s1 (r = -1) -> terminal s2 (r = 1)
        let states = vec![
            StateNode {
                name: "s0".into(),
                terminal: false,
                actions: vec![ActionNode {
                    name: "a".into(),
                    outcomes: vec![Outcome { next: 1, prob: 1.0, reward: -1.0 }],
                }],
            },
            StateNode {
                name: "s1".into(),
                terminal: false,
                actions: vec![ActionNode {
                    name: "a".into(),
                    outcomes: vec![Outcome { next: 2, prob: 1.0, reward: 1.0 }],
                }],
            },
            StateNode { name: "s2".into(), terminal: true, actions: vec![] },
        ];
        TaMdp::new("chain", 0, states, vec![]).unwrap()
    }

    #[test]
    fn deterministic_step() {
        let env = deterministic_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (next, r, terminal) = env.step(0, 0, &mut rng).unwrap();
        assert_eq!((next, r, terminal), (1, -1.0, false));
        let (next, r, terminal) = env.step(1, 0, &mut rng).unwrap();
        assert_eq!((next, r, terminal), (2, 1.0, true));
    }

    #[test]
    fn step_rejects_terminal_state_and_bad_action() {
        let env = deterministic_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(env.step(2, 0, &mut rng), Err(Error::TerminalState { state: 2 })));
        assert!(matches!(
            env.step(0, 3, &mut rng),
            Err(Error::InvalidAction { state: 0, action: 3, available: 1 })
        ));
    }

    #[test]
    fn validation_catches_bad_rows() {
        let states = vec![
            StateNode {
                name: "s0".into(),
                terminal: false,
                actions: vec![ActionNode {
                    name: "a".into(),
                    outcomes: vec![Outcome { next: 1, prob: 0.5, reward: 0.0 }],
                }],
            },
            StateNode { name: "g".into(), terminal: true, actions: vec![] },
        ];
        assert!(TaMdp::new("bad", 0, states, vec![]).is_err());
    }

    #[test]
    fn validation_rejects_terminal_start() {
        let states = vec![StateNode { name: "g".into(), terminal: true, actions: vec![] }];
        assert!(TaMdp::new("bad", 0, states, vec![]).is_err());
    }
}
