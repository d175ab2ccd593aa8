//! n-step ensemble.
//!
//! Module n estimates the best total reward collectable within n steps,
//! bootstrapping module n-1 at the successor state. Because plain q-argmax
//! acting would loop forever in cyclic positive-reward MDPs, the greedy
//! action runs through a four-stage filter that prefers horizon-feasible,
//! then richest, then fastest, then highest-total-reward actions. During
//! an episode the active module index counts down toward 1, so the policy
//! "spends" its horizon as it moves.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::episode::{Agent, Transition};
use crate::error::{Error, Result};
use crate::mdp::{Action, State, TaMdp};
use crate::objective::Objective;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NStepModule {
    pub n: usize,
    /// Best total reward within n steps.
    pub q: Vec<Vec<f64>>,
    /// Total reward until termination under the cascade policy.
    pub r_tab: Vec<Vec<f64>>,
    /// Steps until termination under the cascade policy.
    pub t_tab: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NseAgent {
    modules: Vec<NStepModule>,
    alpha: f64,
    epsilon: f64,
    /// Countdown module index, in 1..=M while an episode runs.
    active_n: usize,
}

pub const DEFAULT_MODULES: usize = 20;

impl NseAgent {
    pub fn new(env: &TaMdp, module_count: usize, alpha: f64, epsilon: f64) -> Result<Self> {
        if module_count == 0 {
            return Err(Error::InvalidMdp("module count must be at least 1".into()));
        }
        let shape: Vec<usize> = (0..env.num_states()).map(|s| env.num_actions(s)).collect();
        let table = || -> Vec<Vec<f64>> { shape.iter().map(|&n| vec![0.0; n]).collect() };
        let modules = (1..=module_count)
            .map(|n| NStepModule { n, q: table(), r_tab: table(), t_tab: table() })
            .collect();
        Ok(NseAgent { modules, alpha, epsilon, active_n: 1 })
    }

    pub fn modules(&self) -> &[NStepModule] {
        &self.modules
    }

    pub fn module_count(&self) -> usize {
        self.modules.len()
    }

    pub fn active_module(&self) -> usize {
        self.active_n
    }

    /// Forces the countdown index; mainly for evaluation and tests.
    pub fn set_active_module(&mut self, n: usize) {
        assert!(n >= 1 && n <= self.modules.len());
        self.active_n = n;
    }

    /// The four-stage action filter of module `n` at `s`; returns the full
    /// final tie set (its members carry identical table values).
    pub fn greedy_candidates(&self, n: usize, s: State) -> Vec<Action> {
        let m = &self.modules[n - 1];
        let count = m.q[s].len();
        debug_assert!(count > 0, "greedy action requested at terminal state {s}");
        let mut set: Vec<Action> = (0..count).filter(|&a| m.t_tab[s][a] <= n as f64).collect();
        if set.is_empty() {
            let min_t = (0..count).map(|a| m.t_tab[s][a]).fold(f64::INFINITY, f64::min);
            set = (0..count).filter(|&a| m.t_tab[s][a] == min_t).collect();
        }
        let max_q = set.iter().map(|&a| m.q[s][a]).fold(f64::NEG_INFINITY, f64::max);
        set.retain(|&a| m.q[s][a] == max_q);
        let min_t = set.iter().map(|&a| m.t_tab[s][a]).fold(f64::INFINITY, f64::min);
        set.retain(|&a| m.t_tab[s][a] == min_t);
        let max_r = set.iter().map(|&a| m.r_tab[s][a]).fold(f64::NEG_INFINITY, f64::max);
        set.retain(|&a| m.r_tab[s][a] == max_r);
        set
    }

    /// Deterministic representative of the filtered greedy set, used for
    /// bootstrapping and value read-out.
    pub fn greedy_action(&self, n: usize, s: State) -> Action {
        self.greedy_candidates(n, s)[0]
    }

    /// State values (R_n(s), T_n(s)) through the greedy action.
    pub fn state_values(&self, n: usize, s: State) -> (f64, f64) {
        let a = self.greedy_action(n, s);
        let m = &self.modules[n - 1];
        (m.r_tab[s][a], m.t_tab[s][a])
    }

    /// Picks the episode's starting module: highest objective value on the
    /// module's expected (return, steps), ties toward fewer steps, then the
    /// smaller horizon.
    pub fn select_module(&mut self, start: State, objective: &Objective) -> usize {
        let mut best_n = 1;
        let mut best_value = f64::NEG_INFINITY;
        let mut best_steps = f64::INFINITY;
        for n in 1..=self.modules.len() {
            let (r, t) = self.state_values(n, start);
            let mut value = objective.evaluate(r, t);
            if value.is_nan() {
                value = f64::NEG_INFINITY;
            }
            if value > best_value || (value == best_value && t < best_steps) {
                best_n = n;
                best_value = value;
                best_steps = t;
            }
        }
        self.active_n = best_n;
        best_n
    }

    /// Steps the horizon countdown: the next action comes from the module
    /// one level shorter, floored at module 1.
    pub fn countdown(&mut self) {
        self.active_n = self.active_n.saturating_sub(1).max(1);
    }

    /// Applies the cascade update for every module, ascending so that
    /// module n bootstraps module n-1 as already updated this call.
    pub fn update(&mut self, tr: &Transition) {
        let alpha = self.alpha;
        for i in 0..self.modules.len() {
            let n = i + 1;
            let (b_q, b_r, b_t) = if tr.terminal {
                (0.0, 0.0, 0.0)
            } else if n == 1 {
                // module 1: q stores expected immediate reward only; the
                // reward/step recursions bootstrap from module 1 itself
                let b = self.greedy_action(1, tr.next_state);
                let m = &self.modules[0];
                (0.0, m.r_tab[tr.next_state][b], m.t_tab[tr.next_state][b])
            } else {
                let b = self.greedy_action(n - 1, tr.next_state);
                let m = &self.modules[i - 1];
                (
                    m.q[tr.next_state][b],
                    m.r_tab[tr.next_state][b],
                    m.t_tab[tr.next_state][b],
                )
            };
            let m = &mut self.modules[i];
            m.q[tr.state][tr.action] += alpha * (tr.reward + b_q - m.q[tr.state][tr.action]);
            m.r_tab[tr.state][tr.action] +=
                alpha * (tr.reward + b_r - m.r_tab[tr.state][tr.action]);
            m.t_tab[tr.state][tr.action] +=
                alpha * (1.0 + b_t - m.t_tab[tr.state][tr.action]);
        }
    }
}

impl Agent for NseAgent {
    fn begin_episode(&mut self, start: State, objective: &Objective) -> Result<()> {
        self.select_module(start, objective);
        Ok(())
    }

    fn act(&mut self, state: State, rng: &mut dyn RngCore) -> Action {
        let actions = self.modules[0].q[state].len();
        if rng.gen::<f64>() < self.epsilon {
            return rng.gen_range(0..actions);
        }
        let ties = self.greedy_candidates(self.active_n, state);
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        }
    }

    fn observe(&mut self, tr: &Transition) {
        self.update(tr);
        self.countdown();
    }

    fn set_alpha(&mut self, alpha: f64) {
        self.alpha = alpha;
    }

    fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = epsilon;
    }
}
