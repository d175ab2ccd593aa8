//! Time-dependent Q-learning baseline.
//!
//! One Q-table per objective, with the in-episode time step as an extra
//! state dimension. The reward signal is zero everywhere except on entering
//! a terminal state, where it is the active objective's outcome for the
//! whole episode. That signal depends on the collected return, which is not
//! part of the state, so the problem stays partially observable for this
//! agent; the time dimension only softens it.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::episode::{Agent, Transition};
use crate::error::{Error, Result};
use crate::mdp::{Action, State, TaMdp};
use crate::objective::{NamedObjective, Objective};

/// Terminal-only reward: the objective outcome on termination, zero on
/// every other transition.
pub fn phi_reward(objective: &Objective, total_reward: f64, steps: u32, terminal: bool) -> f64 {
    if terminal {
        objective.evaluate(total_reward, steps as f64)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeQAgent {
    objectives: Vec<NamedObjective>,
    gamma: f64,
    alpha: f64,
    epsilon: f64,
    /// Time indices 0..=t_max; later steps clamp to t_max.
    t_max: usize,
    /// q[k][t][s][a]
    q: Vec<Vec<Vec<Vec<f64>>>>,
    active_objective: usize,
    step_index: u32,
    reward_sum: f64,
}

pub const DEFAULT_GAMMA: f64 = 0.99;

impl TimeQAgent {
    pub fn new(
        env: &TaMdp,
        objectives: Vec<NamedObjective>,
        gamma: f64,
        alpha: f64,
        epsilon: f64,
        t_max: usize,
    ) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::InvalidObjective("baseline needs at least one objective".into()));
        }
        let shape: Vec<usize> = (0..env.num_states()).map(|s| env.num_actions(s)).collect();
        let slice = || -> Vec<Vec<Vec<f64>>> {
            (0..=t_max)
                .map(|_| shape.iter().map(|&n| vec![0.0; n]).collect())
                .collect()
        };
        let q = (0..objectives.len()).map(|_| slice()).collect();
        Ok(TimeQAgent {
            objectives,
            gamma,
            alpha,
            epsilon,
            t_max,
            q,
            active_objective: 0,
            step_index: 0,
            reward_sum: 0.0,
        })
    }

    pub fn objectives(&self) -> &[NamedObjective] {
        &self.objectives
    }

    pub fn active_objective(&self) -> usize {
        self.active_objective
    }

    fn clamp_t(&self, t: u32) -> usize {
        (t as usize).min(self.t_max)
    }

    pub fn q_value(&self, k: usize, t: u32, s: State, a: Action) -> f64 {
        self.q[k][self.clamp_t(t)][s][a]
    }

    /// Standard Q-update on the (objective, time) slice.
    pub fn update(
        &mut self,
        k: usize,
        t: u32,
        s: State,
        a: Action,
        xi: f64,
        next: State,
        terminal: bool,
    ) {
        let bootstrap = if terminal {
            0.0
        } else {
            self.q[k][self.clamp_t(t + 1)][next]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let ti = self.clamp_t(t);
        let cell = &mut self.q[k][ti][s][a];
        *cell += self.alpha * (xi + self.gamma * bootstrap - *cell);
    }
}

impl Agent for TimeQAgent {
    fn begin_episode(&mut self, _start: State, objective: &Objective) -> Result<()> {
        let k = self
            .objectives
            .iter()
            .position(|o| &o.objective == objective)
            .ok_or_else(|| Error::UnknownObjective(format!("{objective:?}")))?;
        self.active_objective = k;
        self.step_index = 0;
        self.reward_sum = 0.0;
        Ok(())
    }

    fn act(&mut self, state: State, rng: &mut dyn RngCore) -> Action {
        let row = &self.q[self.active_objective][self.clamp_t(self.step_index)][state];
        if rng.gen::<f64>() < self.epsilon {
            return rng.gen_range(0..row.len());
        }
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ties: Vec<Action> = (0..row.len()).filter(|&a| row[a] == max).collect();
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        }
    }

    fn observe(&mut self, tr: &Transition) {
        self.reward_sum += tr.reward;
        let steps_taken = self.step_index + 1;
        let objective = self.objectives[self.active_objective].objective.clone();
        let xi = phi_reward(&objective, self.reward_sum, steps_taken, tr.terminal);
        self.update(
            self.active_objective,
            self.step_index,
            tr.state,
            tr.action,
            xi,
            tr.next_state,
            tr.terminal,
        );
        self.step_index = steps_taken;
    }

    fn set_alpha(&mut self, alpha: f64) {
        self.alpha = alpha;
    }

    fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = epsilon;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::circular::{circular, G_R, S_B, S_C};
    use crate::objective::standard_objectives;
    use approx::assert_abs_diff_eq;

    #[test]
    fn phi_is_zero_until_termination() {
        let f1 = Objective::TotalReward;
        assert_eq!(phi_reward(&f1, 123.0, 7, false), 0.0);
        assert_eq!(phi_reward(&f1, 7.0, 3, true), 7.0);
        let f8 = Objective::AverageReward;
        assert_abs_diff_eq!(phi_reward(&f8, 6.0, 3, true), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn terminal_update_writes_outcome() {
        let env = circular();
        let mut agent =
            TimeQAgent::new(&env, standard_objectives(), 0.99, 1.0, 0.0, 50).unwrap();
        agent.update(0, 4, S_C, 0, 5.0, G_R, true);
        assert_eq!(agent.q_value(0, 4, S_C, 0), 5.0);
    }

    #[test]
    fn mid_episode_bootstrap_discounts() {
        let env = circular();
        let mut agent =
            TimeQAgent::new(&env, standard_objectives(), 0.99, 1.0, 0.0, 50).unwrap();
        // converged terminal step first, then the step leading to it
        agent.update(0, 1, S_C, 0, 5.0, G_R, true);
        agent.update(0, 0, S_B, 2, 0.0, S_C, false);
        assert_abs_diff_eq!(agent.q_value(0, 0, S_B, 2), 0.99 * 5.0, epsilon = 1e-12);
    }

    #[test]
    fn objective_slices_are_isolated() {
        let env = circular();
        let mut agent =
            TimeQAgent::new(&env, standard_objectives(), 0.99, 1.0, 0.0, 50).unwrap();
        let before: Vec<Vec<Vec<Vec<f64>>>> = agent.q.clone();
        agent.begin_episode(S_B, &Objective::NegTime).unwrap(); // k = 3
        agent.observe(&Transition {
            state: S_B,
            action: 2,
            reward: 0.0,
            next_state: S_C,
            terminal: false,
        });
        agent.observe(&Transition {
            state: S_C,
            action: 0,
            reward: 1.0,
            next_state: G_R,
            terminal: true,
        });
        for k in 0..agent.objectives.len() {
            if k == 3 {
                continue;
            }
            assert_eq!(agent.q[k], before[k], "slice {k} must be untouched");
        }
        assert_ne!(agent.q[3], before[3]);
        // terminal outcome for -T with T = 2
        assert_eq!(agent.q_value(3, 1, S_C, 0), -2.0);
    }

    #[test]
    fn time_indices_clamp_beyond_t_max() {
        let env = circular();
        let mut agent =
            TimeQAgent::new(&env, standard_objectives(), 0.99, 1.0, 0.0, 3).unwrap();
        agent.update(0, 9, S_C, 0, 1.5, G_R, true);
        assert_eq!(agent.q_value(0, 3, S_C, 0), 1.5);
        assert_eq!(agent.q_value(0, 7, S_C, 0), 1.5);
    }

    #[test]
    fn unknown_objective_is_rejected() {
        let env = circular();
        let mut agent = TimeQAgent::new(
            &env,
            vec![NamedObjective { name: "f1".into(), objective: Objective::TotalReward }],
            0.99,
            1.0,
            0.0,
            10,
        )
        .unwrap();
        let err = agent.begin_episode(S_B, &Objective::NegTime);
        assert!(matches!(err, Err(Error::UnknownObjective(_))));
    }
}
