//! Independent discount-factor ensemble.
//!
//! Parallel Q-learners over a ladder of discount factors. Each module also
//! tracks the expected total return and expected steps of its own greedy
//! policy; those expectations drive module selection at episode start. All
//! modules learn from every transition (Q-learning is off-policy), but the
//! return/step estimators only update when the taken action is greedy for
//! that module.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::episode::{Agent, Transition};
use crate::error::{Error, Result};
use crate::mdp::{Action, State, TaMdp};
use crate::objective::Objective;

/// One member of the ensemble: a Q-table plus per-state estimates of the
/// greedy policy's total return and steps to termination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaModule {
    pub gamma: f64,
    pub q: Vec<Vec<f64>>,
    pub r_exp: Vec<f64>,
    pub t_exp: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgeAgent {
    modules: Vec<GammaModule>,
    alpha: f64,
    epsilon: f64,
    active: usize,
}

/// The standard discount ladder: `base_count` factors i/(i+1), then `fill`
/// equally spaced factors inserted into every gap between neighbours and
/// between the last base factor and 1 (1 itself excluded).
pub fn gamma_ladder(base_count: usize, fill: usize) -> Vec<f64> {
    assert!(base_count >= 1);
    let base: Vec<f64> = (1..=base_count).map(|i| i as f64 / (i + 1) as f64).collect();
    let mut out = base.clone();
    let mut gaps: Vec<(f64, f64)> = base.windows(2).map(|w| (w[0], w[1])).collect();
    gaps.push((*base.last().unwrap(), 1.0));
    for (lo, hi) in gaps {
        for k in 1..=fill {
            out.push(lo + k as f64 * (hi - lo) / (fill + 1) as f64);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

impl IgeAgent {
    pub fn new(env: &TaMdp, gammas: &[f64], alpha: f64, epsilon: f64) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidMdp("gamma ladder is empty".into()));
        }
        for pair in gammas.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidMdp("gamma ladder must be strictly increasing".into()));
            }
        }
        if gammas[0] <= 0.0 || *gammas.last().unwrap() >= 1.0 {
            return Err(Error::InvalidMdp("discount factors must lie in (0, 1)".into()));
        }
        let shape: Vec<usize> = (0..env.num_states()).map(|s| env.num_actions(s)).collect();
        let modules = gammas
            .iter()
            .map(|&gamma| GammaModule {
                gamma,
                q: shape.iter().map(|&n| vec![0.0; n]).collect(),
                r_exp: vec![0.0; shape.len()],
                t_exp: vec![0.0; shape.len()],
            })
            .collect();
        Ok(IgeAgent { modules, alpha, epsilon, active: 0 })
    }

    pub fn with_default_ladder(env: &TaMdp, alpha: f64, epsilon: f64) -> Result<Self> {
        Self::new(env, &gamma_ladder(14, 2), alpha, epsilon)
    }

    pub fn modules(&self) -> &[GammaModule] {
        &self.modules
    }

    pub fn active_module(&self) -> usize {
        self.active
    }

    /// Greedy module choice for the episode: the module whose expected
    /// (return, steps) maximizes the objective, ties broken toward fewer
    /// expected steps, then the lowest index. NaN objective values (e.g.
    /// average reward on untrained tables) rank below everything.
    pub fn select_module(&mut self, start: State, objective: &Objective) -> usize {
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        let mut best_steps = f64::INFINITY;
        for (i, m) in self.modules.iter().enumerate() {
            let steps = m.t_exp[start];
            let mut value = objective.evaluate(m.r_exp[start], steps);
            if value.is_nan() {
                value = f64::NEG_INFINITY;
            }
            if value > best_value || (value == best_value && steps < best_steps) {
                best = i;
                best_value = value;
                best_steps = steps;
            }
        }
        self.active = best;
        best
    }

    fn greedy_set(module: &GammaModule, s: State) -> Vec<Action> {
        let row = &module.q[s];
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..row.len()).filter(|&a| row[a] == max).collect()
    }

    /// Greedy actions of a module at a state (all ties).
    pub fn greedy_actions(&self, module: usize, s: State) -> Vec<Action> {
        Self::greedy_set(&self.modules[module], s)
    }

    /// Greedy policy of one module over the whole state space (first of
    /// each tie set); terminal states map to None.
    pub fn greedy_policy(&self, module: usize, env: &TaMdp) -> Vec<Option<Action>> {
        (0..env.num_states())
            .map(|s| {
                if env.is_terminal(s) {
                    None
                } else {
                    Some(Self::greedy_set(&self.modules[module], s)[0])
                }
            })
            .collect()
    }
}

impl Agent for IgeAgent {
    fn begin_episode(&mut self, start: State, objective: &Objective) -> Result<()> {
        self.select_module(start, objective);
        Ok(())
    }

    fn act(&mut self, state: State, rng: &mut dyn RngCore) -> Action {
        let actions = self.modules[self.active].q[state].len();
        if rng.gen::<f64>() < self.epsilon {
            return rng.gen_range(0..actions);
        }
        let ties = Self::greedy_set(&self.modules[self.active], state);
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        }
    }

    fn observe(&mut self, tr: &Transition) {
        let alpha = self.alpha;
        for module in &mut self.modules {
            let bootstrap = if tr.terminal {
                0.0
            } else {
                module.q[tr.next_state].iter().copied().fold(f64::NEG_INFINITY, f64::max)
            };
            let delta = tr.reward + module.gamma * bootstrap - module.q[tr.state][tr.action];
            module.q[tr.state][tr.action] += alpha * delta;

            // return/step estimators follow the post-update greedy action
            let row = &module.q[tr.state];
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if row[tr.action] == max {
                let (r_next, t_next) = if tr.terminal {
                    (0.0, 0.0)
                } else {
                    (module.r_exp[tr.next_state], module.t_exp[tr.next_state])
                };
                module.r_exp[tr.state] +=
                    alpha * (tr.reward + r_next - module.r_exp[tr.state]);
                module.t_exp[tr.state] += alpha * (1.0 + t_next - module.t_exp[tr.state]);
            }
        }
    }

    fn set_alpha(&mut self, alpha: f64) {
        self.alpha = alpha;
    }

    fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = epsilon;
    }
}
