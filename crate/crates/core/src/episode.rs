//! Episode execution: drives an agent's hooks against an environment.

use rand::RngCore;

use crate::error::Result;
use crate::mdp::{Action, State, TaMdp};
use crate::objective::Objective;
use crate::trace::{EpisodeTrace, TraceStep};

/// Default cap on episode length. Exploration in cyclic MDPs can otherwise
/// fail to terminate; truncated episodes still score the active objective
/// on their accumulated (R, T).
pub const DEFAULT_MAX_STEPS: u32 = 1000;

#[derive(Debug, Clone, Copy)]
pub struct Transition {
    pub state: State,
    pub action: Action,
    pub reward: f64,
    pub next_state: State,
    pub terminal: bool,
}

/// Hooks every learner implements. `begin_episode` is called once before
/// the first action (module selection happens here), `act` once per step,
/// and `observe` once per transition, in that order.
pub trait Agent {
    fn begin_episode(&mut self, start: State, objective: &Objective) -> Result<()>;
    fn act(&mut self, state: State, rng: &mut dyn RngCore) -> Action;
    fn observe(&mut self, transition: &Transition);
    fn set_alpha(&mut self, alpha: f64);
    fn set_epsilon(&mut self, epsilon: f64);
}

/// Runs a single episode, truncating at `max_steps`. The outcome is the
/// objective evaluated on the accumulated totals whether or not a terminal
/// state was reached.
pub fn run_episode<A, R>(
    agent: &mut A,
    env: &TaMdp,
    objective: &Objective,
    max_steps: u32,
    rng: &mut R,
) -> Result<EpisodeTrace>
where
    A: Agent + ?Sized,
    R: RngCore,
{
    assert!(max_steps >= 1, "max_steps must be at least 1");
    let mut state = env.start_state();
    agent.begin_episode(state, objective)?;

    let mut steps = Vec::new();
    let mut total_reward = 0.0;
    let mut terminated = false;

    for _ in 0..max_steps {
        let action = agent.act(state, rng);
        let (next, reward, terminal) = env.step(state, action, rng)?;
        agent.observe(&Transition { state, action, reward, next_state: next, terminal });
        steps.push(TraceStep { state, action, reward });
        total_reward += reward;
        state = next;
        if terminal {
            terminated = true;
            break;
        }
    }

    let length = steps.len() as u32;
    let outcome = objective.evaluate(total_reward, length as f64);
    Ok(EpisodeTrace { steps, total_reward, length, outcome, terminated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{ActionNode, Outcome, StateNode};
    use crate::objective::Objective;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Picks action 0 everywhere, learns nothing.
    struct FixedAgent;

    impl Agent for FixedAgent {
        fn begin_episode(&mut self, _: State, _: &Objective) -> Result<()> {
            Ok(())
        }
        fn act(&mut self, _: State, _: &mut dyn RngCore) -> Action {
            0
        }
        fn observe(&mut self, _: &Transition) {}
        fn set_alpha(&mut self, _: f64) {}
        fn set_epsilon(&mut self, _: f64) {}
    }

    fn one_step_env() -> TaMdp {
        let states = vec![
            StateNode {
                name: "s0".into(),
                terminal: false,
                actions: vec![ActionNode {
                    name: "a".into(),
                    outcomes: vec![Outcome { next: 1, prob: 1.0, reward: 1.0 }],
                }],
            },
            StateNode { name: "g".into(), terminal: true, actions: vec![] },
        ];
        TaMdp::new("one-step", 0, states, vec![]).unwrap()
    }

    fn self_loop_env() -> TaMdp {
        let states = vec![
            StateNode {
                name: "s0".into(),
                terminal: false,
                actions: vec![ActionNode {
                    name: "stay".into(),
                    outcomes: vec![Outcome { next: 0, prob: 1.0, reward: -1.0 }],
                }],
            },
            StateNode { name: "g".into(), terminal: true, actions: vec![] },
        ];
        TaMdp::new("loop", 0, states, vec![]).unwrap()
    }

    #[test]
    fn greedy_agent_one_step_episode() {
        let env = one_step_env();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trace =
            run_episode(&mut FixedAgent, &env, &Objective::TotalReward, 100, &mut rng).unwrap();
        assert_eq!(trace.total_reward, 1.0);
        assert_eq!(trace.length, 1);
        assert_eq!(trace.outcome, 1.0);
        assert!(trace.terminated);
    }

    #[test]
    fn truncation_at_max_steps() {
        let env = self_loop_env();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trace =
            run_episode(&mut FixedAgent, &env, &Objective::TotalReward, 1, &mut rng).unwrap();
        assert_eq!(trace.length, 1);
        assert!(!trace.terminated);
        assert_eq!(trace.outcome, -1.0);
    }

    #[test]
    fn trace_totals_match_step_list() {
        let env = self_loop_env();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trace =
            run_episode(&mut FixedAgent, &env, &Objective::NegTime, 17, &mut rng).unwrap();
        let (r, t) = trace.recompute_totals();
        assert_eq!(r, trace.total_reward);
        assert_eq!(t, trace.length);
        assert_eq!(trace.outcome, -17.0);
    }
}
