//! Exact dynamic-programming solvers used as ground truth by tests and by
//! environment-spec validation. Everything here recomputes values from the
//! MDP definition and shares no code with the learning agents.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mdp::{Action, Outcome, State, TaMdp};

pub const VI_TOL: f64 = 1e-8;
pub const POLICY_EVAL_TOL: f64 = 1e-10;
pub const ITERATION_CAP: usize = 100_000;

/// Sentinel for states that cannot reach the kept goal in a restricted
/// model; large enough in magnitude to never be chosen, finite so the
/// arithmetic stays NaN-free.
const DEAD_VALUE: f64 = -1e15;

/// Internal array-form copy of an MDP, cheap to transform.
#[derive(Clone)]
struct Model {
    terminal: Vec<bool>,
    outcomes: Vec<Vec<Vec<Outcome>>>,
}

impl Model {
    fn from_env(env: &TaMdp) -> Model {
        let n = env.num_states();
        let mut terminal = Vec::with_capacity(n);
        let mut outcomes = Vec::with_capacity(n);
        for s in 0..n {
            terminal.push(env.is_terminal(s));
            let acts = (0..env.num_actions(s)).map(|a| env.outcomes(s, a).to_vec()).collect();
            outcomes.push(acts);
        }
        Model { terminal, outcomes }
    }

    fn num_states(&self) -> usize {
        self.terminal.len()
    }
}

#[derive(Debug, Clone)]
pub struct ValueIteration {
    /// q\[s\]\[a\]; empty rows at terminal states.
    pub q: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
}

impl ValueIteration {
    pub fn greedy(&self) -> Vec<Option<Action>> {
        self.q
            .iter()
            .map(|row| {
                if row.is_empty() {
                    return None;
                }
                let mut best = 0;
                for (a, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = a;
                    }
                }
                Some(best)
            })
            .collect()
    }
}

fn vi_model(model: &Model, gamma: f64, tol: f64, cap: usize) -> Result<ValueIteration> {
    let n = model.num_states();
    let mut v = vec![0.0; n];
    for s in 0..n {
        if !model.terminal[s] && model.outcomes[s].is_empty() {
            v[s] = DEAD_VALUE;
        }
    }
    let mut residual = f64::INFINITY;
    for it in 0..cap {
        let mut delta: f64 = 0.0;
        for s in 0..n {
            if model.terminal[s] || model.outcomes[s].is_empty() {
                continue;
            }
            let mut best = f64::NEG_INFINITY;
            for acts in &model.outcomes[s] {
                let mut q = 0.0;
                for o in acts {
                    let cont = if model.terminal[o.next] { 0.0 } else { gamma * v[o.next] };
                    q += o.prob * (o.reward + cont);
                }
                best = best.max(q);
            }
            delta = delta.max((best - v[s]).abs());
            v[s] = best;
        }
        residual = delta;
        if delta < tol {
            let iterations = it + 1;
            let q = (0..n)
                .map(|s| {
                    model.outcomes[s]
                        .iter()
                        .map(|acts| {
                            acts.iter()
                                .map(|o| {
                                    let cont = if model.terminal[o.next] {
                                        0.0
                                    } else {
                                        gamma * v[o.next]
                                    };
                                    o.prob * (o.reward + cont)
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect();
            return Ok(ValueIteration { q, iterations, residual });
        }
    }
    Err(Error::NonConvergence { cap, residual })
}

/// Fixed point of the Bellman optimality operator for discount `gamma`.
/// `gamma = 1` is permitted on MDPs whose every cycle loses reward.
pub fn value_iteration_gamma(env: &TaMdp, gamma: f64, tol: f64) -> Result<ValueIteration> {
    vi_model(&Model::from_env(env), gamma, tol, ITERATION_CAP)
}

/// Finite-horizon cascade tables for modules n = 1..=m.
#[derive(Debug, Clone)]
pub struct NStepTables {
    /// Indexed \[n-1\]\[s\]\[a\].
    pub q: Vec<Vec<Vec<f64>>>,
    pub r: Vec<Vec<Vec<f64>>>,
    pub t: Vec<Vec<Vec<f64>>>,
}

impl NStepTables {
    pub fn modules(&self) -> usize {
        self.q.len()
    }

    /// The filtered greedy action of module `n` at `s` (first of the final
    /// tie set; every member carries identical table values).
    pub fn cascade_action(&self, n: usize, s: State) -> Action {
        let i = n - 1;
        cascade(&self.q[i], &self.r[i], &self.t[i], s, n)
    }

    /// State values (R_n(s), T_n(s)) read through the greedy action.
    pub fn state_values(&self, n: usize, s: State) -> (f64, f64) {
        let a = self.cascade_action(n, s);
        (self.r[n - 1][s][a], self.t[n - 1][s][a])
    }
}

/// Four-stage action filter on explicit tables: horizon-feasible actions
/// (fallback: fastest), then highest q, then fewest steps, then highest
/// total reward.
fn cascade(q: &[Vec<f64>], r: &[Vec<f64>], t: &[Vec<f64>], s: State, n: usize) -> Action {
    let count = q[s].len();
    debug_assert!(count > 0, "cascade on terminal state {s}");
    let mut set: Vec<Action> = (0..count).filter(|&a| t[s][a] <= n as f64).collect();
    if set.is_empty() {
        let min_t = (0..count).map(|a| t[s][a]).fold(f64::INFINITY, f64::min);
        set = (0..count).filter(|&a| t[s][a] == min_t).collect();
    }
    let max_q = set.iter().map(|&a| q[s][a]).fold(f64::NEG_INFINITY, f64::max);
    set.retain(|&a| q[s][a] == max_q);
    let min_t = set.iter().map(|&a| t[s][a]).fold(f64::INFINITY, f64::min);
    set.retain(|&a| t[s][a] == min_t);
    let max_r = set.iter().map(|&a| r[s][a]).fold(f64::NEG_INFINITY, f64::max);
    set.retain(|&a| r[s][a] == max_r);
    set[0]
}

/// Exact expectations of the n-step cascade by backward induction over
/// module index: module 1's reward/step tables are a self-consistent
/// fixed point, modules 2..=m each take one pass over module n-1.
pub fn n_step_dp(env: &TaMdp, m: usize) -> Result<NStepTables> {
    assert!(m >= 1);
    let model = Model::from_env(env);
    let n_states = model.num_states();

    let zeros: Vec<Vec<f64>> =
        (0..n_states).map(|s| vec![0.0; model.outcomes[s].len()]).collect();

    // module 1: q is expected immediate reward
    let q1: Vec<Vec<f64>> = (0..n_states)
        .map(|s| {
            model.outcomes[s]
                .iter()
                .map(|acts| acts.iter().map(|o| o.prob * o.reward).sum())
                .collect()
        })
        .collect();
    let mut r1 = zeros.clone();
    let mut t1 = zeros;
    // Iterate to an exact fixed point where possible (deterministic MDPs
    // reach one, which keeps agent-vs-oracle comparisons bitwise); accept a
    // sub-1e-12 residual after a grace period otherwise.
    let mut converged = false;
    let mut residual = f64::INFINITY;
    let mut slack_sweeps = 0;
    for _ in 0..ITERATION_CAP {
        let mut delta: f64 = 0.0;
        for s in 0..n_states {
            for a in 0..model.outcomes[s].len() {
                let mut nr = 0.0;
                let mut nt = 0.0;
                for o in &model.outcomes[s][a] {
                    if model.terminal[o.next] {
                        nr += o.prob * o.reward;
                        nt += o.prob;
                    } else {
                        let b = cascade(&q1, &r1, &t1, o.next, 1);
                        nr += o.prob * (o.reward + r1[o.next][b]);
                        nt += o.prob * (1.0 + t1[o.next][b]);
                    }
                }
                delta = delta.max((nr - r1[s][a]).abs()).max((nt - t1[s][a]).abs());
                r1[s][a] = nr;
                t1[s][a] = nt;
            }
        }
        residual = delta;
        if delta == 0.0 {
            converged = true;
            break;
        }
        if delta < 1e-12 {
            slack_sweeps += 1;
            if slack_sweeps >= 64 {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence { cap: ITERATION_CAP, residual });
    }

    let mut q = vec![q1];
    let mut r = vec![r1];
    let mut t = vec![t1];
    for n in 2..=m {
        let (qp, rp, tp) = (&q[n - 2], &r[n - 2], &t[n - 2]);
        let mut qn = Vec::with_capacity(n_states);
        let mut rn = Vec::with_capacity(n_states);
        let mut tn = Vec::with_capacity(n_states);
        for s in 0..n_states {
            let count = model.outcomes[s].len();
            let mut qrow = Vec::with_capacity(count);
            let mut rrow = Vec::with_capacity(count);
            let mut trow = Vec::with_capacity(count);
            for a in 0..count {
                let mut vq = 0.0;
                let mut vr = 0.0;
                let mut vt = 0.0;
                for o in &model.outcomes[s][a] {
                    if model.terminal[o.next] {
                        vq += o.prob * o.reward;
                        vr += o.prob * o.reward;
                        vt += o.prob;
                    } else {
                        let b = cascade(qp, rp, tp, o.next, n - 1);
                        vq += o.prob * (o.reward + qp[o.next][b]);
                        vr += o.prob * (o.reward + rp[o.next][b]);
                        vt += o.prob * (1.0 + tp[o.next][b]);
                    }
                }
                qrow.push(vq);
                rrow.push(vr);
                trow.push(vt);
            }
            qn.push(qrow);
            rn.push(rrow);
            tn.push(trow);
        }
        q.push(qn);
        r.push(rn);
        t.push(tn);
    }
    Ok(NStepTables { q, r, t })
}

#[derive(Debug, Clone)]
pub struct PolicyValues {
    pub reward: BTreeMap<State, f64>,
    pub steps: BTreeMap<State, f64>,
    pub iterations: usize,
}

/// Evaluates a (possibly partial) deterministic policy: expected total
/// reward and expected steps to termination from every covered state.
/// Fails if the policy's support leaves its domain or cannot reach a
/// terminal state.
pub fn policy_eval(env: &TaMdp, policy: &[Option<Action>]) -> Result<PolicyValues> {
    let model = Model::from_env(env);
    let n = model.num_states();
    assert_eq!(policy.len(), n, "policy length must match the state count");

    let defined: Vec<State> = (0..n).filter(|&s| policy[s].is_some()).collect();
    // closure check: every support successor is terminal or covered
    for &s in &defined {
        let a = policy[s].unwrap();
        if model.terminal[s] {
            return Err(Error::TerminalState { state: s });
        }
        if a >= model.outcomes[s].len() {
            return Err(Error::InvalidAction {
                state: s,
                action: a,
                available: model.outcomes[s].len(),
            });
        }
        for o in &model.outcomes[s][a] {
            if !model.terminal[o.next] && policy[o.next].is_none() {
                return Err(Error::PartialPolicy { state: o.next });
            }
        }
    }

    // absorption check: a terminal must be reachable from every covered state
    let mut reaches = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for &s in &defined {
            if reaches[s] {
                continue;
            }
            let a = policy[s].unwrap();
            let ok = model.outcomes[s][a]
                .iter()
                .any(|o| model.terminal[o.next] || reaches[o.next]);
            if ok {
                reaches[s] = true;
                changed = true;
            }
        }
    }
    let stuck: Vec<State> = defined.iter().copied().filter(|&s| !reaches[s]).collect();
    if !stuck.is_empty() {
        return Err(Error::ImproperPolicy { stuck });
    }

    let mut reward = vec![0.0; n];
    let mut steps = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 0..ITERATION_CAP {
        let mut delta: f64 = 0.0;
        for &s in &defined {
            let a = policy[s].unwrap();
            let mut nr = 0.0;
            let mut nt = 0.0;
            for o in &model.outcomes[s][a] {
                if model.terminal[o.next] {
                    nr += o.prob * o.reward;
                    nt += o.prob;
                } else {
                    nr += o.prob * (o.reward + reward[o.next]);
                    nt += o.prob * (1.0 + steps[o.next]);
                }
            }
            delta = delta.max((nr - reward[s]).abs()).max((nt - steps[s]).abs());
            reward[s] = nr;
            steps[s] = nt;
        }
        residual = delta;
        if delta < POLICY_EVAL_TOL {
            let iterations = it + 1;
            return Ok(PolicyValues {
                reward: defined.iter().map(|&s| (s, reward[s])).collect(),
                steps: defined.iter().map(|&s| (s, steps[s])).collect(),
                iterations,
            });
        }
    }
    Err(Error::NonConvergence { cap: ITERATION_CAP, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub expected_reward: f64,
    pub expected_steps: f64,
    pub policy_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParetoStrategy {
    /// One candidate per terminal: the policy maximizing expected total
    /// reward on the goal-restricted MDP (other goals act as walls).
    PerGoal,
    /// Every deterministic stationary policy (small MDPs only).
    Exhaustive,
    /// Exhaustive when the MDP has at most 12 states, per-goal otherwise.
    Auto,
}

#[derive(Debug, Clone)]
pub struct ParetoOptions {
    pub strategy: ParetoStrategy,
    pub max_policies: usize,
    pub vi_tol: f64,
}

impl Default for ParetoOptions {
    fn default() -> Self {
        ParetoOptions { strategy: ParetoStrategy::Auto, max_policies: 1_000_000, vi_tol: 1e-10 }
    }
}

const POINT_EPS: f64 = 1e-9;

fn dominated(p: &ParetoPoint, q: &ParetoPoint) -> bool {
    q.expected_reward >= p.expected_reward - POINT_EPS
        && q.expected_steps <= p.expected_steps + POINT_EPS
        && (q.expected_reward > p.expected_reward + POINT_EPS
            || q.expected_steps < p.expected_steps - POINT_EPS)
}

fn pareto_filter(mut points: Vec<ParetoPoint>) -> Vec<ParetoPoint> {
    // drop duplicates first so that equal points do not mask each other
    points.sort_by(|a, b| {
        a.expected_steps
            .total_cmp(&b.expected_steps)
            .then(b.expected_reward.total_cmp(&a.expected_reward))
    });
    points.dedup_by(|a, b| {
        (a.expected_reward - b.expected_reward).abs() <= POINT_EPS
            && (a.expected_steps - b.expected_steps).abs() <= POINT_EPS
    });
    let keep: Vec<bool> = points
        .iter()
        .map(|p| !points.iter().any(|q| dominated(p, q)))
        .collect();
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Rebuilds the model with all terminals other than `goal` treated as
/// walls: their incoming probability mass becomes a self-transition that
/// pays the source's ordinary step reward. Actions whose entire mass
/// entered foreign terminals are removed.
fn restrict_to_goal(model: &Model, goal: State) -> Model {
    let n = model.num_states();
    let mut out = Model { terminal: model.terminal.clone(), outcomes: vec![Vec::new(); n] };
    for s in 0..n {
        if model.terminal[s] {
            continue;
        }
        let mut actions = Vec::new();
        for acts in &model.outcomes[s] {
            let step_reward = acts
                .iter()
                .filter(|o| !model.terminal[o.next])
                .map(|o| o.reward)
                .fold(f64::INFINITY, f64::min);
            if step_reward == f64::INFINITY {
                continue; // every outcome entered a foreign terminal
            }
            let mut mass: BTreeMap<State, (f64, f64)> = BTreeMap::new();
            for o in acts {
                let (next, reward) = if model.terminal[o.next] && o.next != goal {
                    (s, step_reward)
                } else {
                    (o.next, o.reward)
                };
                let e = mass.entry(next).or_insert((0.0, reward));
                e.0 += o.prob;
            }
            let outcomes =
                mass.into_iter().map(|(next, (prob, reward))| Outcome { next, prob, reward }).collect();
            actions.push(crate::mdp::ActionNode { name: String::new(), outcomes });
        }
        out.outcomes[s] = actions.into_iter().map(|a| a.outcomes).collect();
    }
    out
}

/// Non-dominated (expected reward, expected steps) pairs over candidate
/// policies from `start`.
pub fn pareto_front(
    env: &TaMdp,
    start: State,
    opts: &ParetoOptions,
) -> Result<Vec<ParetoPoint>> {
    let strategy = match opts.strategy {
        ParetoStrategy::Auto => {
            if env.num_states() <= 12 {
                ParetoStrategy::Exhaustive
            } else {
                ParetoStrategy::PerGoal
            }
        }
        s => s,
    };
    let model = Model::from_env(env);
    let mut points = Vec::new();
    match strategy {
        ParetoStrategy::PerGoal => {
            for g in env.terminal_states() {
                let restricted = restrict_to_goal(&model, g);
                let vi = vi_model(&restricted, 1.0, opts.vi_tol, 2 * ITERATION_CAP)?;
                // evaluate only along states the greedy policy actually visits
                let greedy = vi.greedy();
                let mut policy = vec![None; env.num_states()];
                let mut stack = vec![start];
                let mut seen = vec![false; env.num_states()];
                seen[start] = true;
                while let Some(s) = stack.pop() {
                    if restricted.terminal[s] {
                        continue;
                    }
                    let a = greedy[s].ok_or_else(|| {
                        Error::InvalidMdp(format!("goal {g} unreachable from state {s}"))
                    })?;
                    policy[s] = Some(a);
                    for o in &restricted.outcomes[s][a] {
                        if !seen[o.next] {
                            seen[o.next] = true;
                            stack.push(o.next);
                        }
                    }
                }
                let restricted_env = restricted_to_env(env, &restricted, g)?;
                let values = policy_eval(&restricted_env, &policy)?;
                points.push(ParetoPoint {
                    expected_reward: values.reward[&start],
                    expected_steps: values.steps[&start],
                    policy_id: env.state_name(g).to_string(),
                });
            }
        }
        ParetoStrategy::Exhaustive => {
            let non_terminal: Vec<State> =
                (0..env.num_states()).filter(|&s| !env.is_terminal(s)).collect();
            let mut total: f64 = 1.0;
            for &s in &non_terminal {
                total *= env.num_actions(s) as f64;
            }
            if total > opts.max_policies as f64 {
                return Err(Error::EnumerationCapExceeded {
                    cap: opts.max_policies,
                    needed: total,
                });
            }
            let mut assignment: Vec<usize> = vec![0; non_terminal.len()];
            loop {
                let mut policy = vec![None; env.num_states()];
                for (i, &s) in non_terminal.iter().enumerate() {
                    policy[s] = Some(assignment[i]);
                }
                if let Ok(values) = policy_eval(env, &policy) {
                    let id: Vec<String> =
                        assignment.iter().map(|a| a.to_string()).collect();
                    points.push(ParetoPoint {
                        expected_reward: values.reward[&start],
                        expected_steps: values.steps[&start],
                        policy_id: format!("actions:{}", id.join(",")),
                    });
                }
                // odometer increment
                let mut i = 0;
                loop {
                    if i == non_terminal.len() {
                        return Ok(pareto_filter(points));
                    }
                    assignment[i] += 1;
                    if assignment[i] < env.num_actions(non_terminal[i]) {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
            }
        }
        ParetoStrategy::Auto => unreachable!(),
    }
    Ok(pareto_filter(points))
}

/// Wraps a restricted model back into a TaMdp so `policy_eval` can run on
/// it. Unreachable action-less states become terminal placeholders.
fn restricted_to_env(env: &TaMdp, restricted: &Model, goal: State) -> Result<TaMdp> {
    use crate::mdp::{ActionNode, StateNode};
    let n = restricted.num_states();
    let mut states = Vec::with_capacity(n);
    for s in 0..n {
        let dead = !restricted.terminal[s] && restricted.outcomes[s].is_empty();
        states.push(StateNode {
            name: env.state_name(s).to_string(),
            terminal: restricted.terminal[s] || dead,
            actions: restricted.outcomes[s]
                .iter()
                .enumerate()
                .map(|(a, outs)| ActionNode { name: format!("a{a}"), outcomes: outs.clone() })
                .collect(),
        });
    }
    TaMdp::new(format!("{}@{}", env.name(), env.state_name(goal)), env.start_state(), states, vec![])
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub gamma: f64,
    /// Terminal reached by following the greedy policy's most likely
    /// successor from the start state; None if it cycles.
    pub greedy_goal: Option<State>,
}

/// Solves the MDP for every discount factor and reports which terminal the
/// greedy policy steers to.
pub fn gamma_sweep(env: &TaMdp, gammas: &[f64], start: State) -> Result<Vec<SweepEntry>> {
    let mut entries = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let vi = value_iteration_gamma(env, gamma, VI_TOL)?;
        let greedy = vi.greedy();
        entries.push(SweepEntry { gamma, greedy_goal: rollout_goal(env, &greedy, start) });
    }
    Ok(entries)
}

/// Follows the most likely successor under a policy until a terminal or a
/// step cap; ties break toward the lowest state id.
pub fn rollout_goal(env: &TaMdp, policy: &[Option<Action>], start: State) -> Option<State> {
    let mut s = start;
    for _ in 0..4 * env.num_states() {
        if env.is_terminal(s) {
            return Some(s);
        }
        let a = policy[s]?;
        let outs = env.outcomes(s, a);
        let mut best = &outs[0];
        for o in outs.iter().skip(1) {
            if o.prob > best.prob {
                best = o;
            }
        }
        s = best.next;
    }
    None
}

/// True when a terminal state is reachable from `start` through the full
/// support of the policy's transitions.
pub fn support_reaches_terminal(env: &TaMdp, policy: &[Option<Action>], start: State) -> bool {
    let mut seen = vec![false; env.num_states()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(s) = stack.pop() {
        if env.is_terminal(s) {
            return true;
        }
        let Some(a) = policy[s] else { return false };
        for o in env.outcomes(s, a) {
            if !seen[o.next] {
                seen[o.next] = true;
                stack.push(o.next);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::circular::{circular, A_B, A_C, G_L, G_R, S_A, S_B, S_C};
    use crate::mdp::{ActionNode, StateNode};
    use approx::assert_abs_diff_eq;

    fn chain(rewards: &[f64]) -> TaMdp {
        // deterministic chain s0 -> s1 -> ... -> terminal
        let n = rewards.len();
        let mut states: Vec<StateNode> = (0..n)
            .map(|i| StateNode {
                name: format!("s{i}"),
                terminal: false,
                actions: vec![ActionNode {
                    name: "a".into(),
                    outcomes: vec![Outcome { next: i + 1, prob: 1.0, reward: rewards[i] }],
                }],
            })
            .collect();
        states.push(StateNode { name: "g".into(), terminal: true, actions: vec![] });
        TaMdp::new("chain", 0, states, vec![]).unwrap()
    }

    #[test]
    fn one_step_vi_returns_immediate_rewards() {
        let env = chain(&[0.7]);
        let vi = value_iteration_gamma(&env, 0.5, VI_TOL).unwrap();
        assert_abs_diff_eq!(vi.q[0][0], 0.7, epsilon = 1e-9);
    }

    #[test]
    fn circular_discounted_value_is_geometric() {
        let env = circular();
        let vi = value_iteration_gamma(&env, 0.9, VI_TOL).unwrap();
        // staying forever for +2 per step
        assert_abs_diff_eq!(vi.q[S_B][A_B], 2.0 / (1.0 - 0.9), epsilon = 1e-6);
        let greedy = vi.greedy();
        assert_eq!(greedy[S_B], Some(A_B));
    }

    #[test]
    fn n_step_dp_matches_circular_tables() {
        let env = circular();
        let tables = n_step_dp(&env, 4).unwrap();
        // q rows: [s_a:[a_L], s_b:[a_a, a_b, a_c], s_c:[a_R]]
        let expect_q = [
            [vec![0.0], vec![0.0, 2.0, 0.0], vec![1.0]],
            [vec![0.0], vec![0.0, 2.0, 1.0], vec![1.0]],
            [vec![0.0], vec![0.0, 3.0, 1.0], vec![1.0]],
            [vec![0.0], vec![0.0, 5.0, 1.0], vec![1.0]],
        ];
        let expect_r = [
            [vec![0.0], vec![0.0, 3.0, 1.0], vec![1.0]],
            [vec![0.0], vec![0.0, 3.0, 1.0], vec![1.0]],
            [vec![0.0], vec![0.0, 3.0, 1.0], vec![1.0]],
            [vec![0.0], vec![0.0, 5.0, 1.0], vec![1.0]],
        ];
        let expect_t = [
            [vec![1.0], vec![2.0, 3.0, 2.0], vec![1.0]],
            [vec![1.0], vec![2.0, 3.0, 2.0], vec![1.0]],
            [vec![1.0], vec![2.0, 3.0, 2.0], vec![1.0]],
            [vec![1.0], vec![2.0, 4.0, 2.0], vec![1.0]],
        ];
        for n in 1..=4 {
            for s in [S_A, S_B, S_C] {
                assert_eq!(tables.q[n - 1][s], expect_q[n - 1][s], "q module {n} state {s}");
                assert_eq!(tables.r[n - 1][s], expect_r[n - 1][s], "r module {n} state {s}");
                assert_eq!(tables.t[n - 1][s], expect_t[n - 1][s], "t module {n} state {s}");
            }
        }
        // bold greedy actions at s_b
        assert_eq!(tables.cascade_action(1, S_B), A_C);
        assert_eq!(tables.cascade_action(2, S_B), A_C);
        assert_eq!(tables.cascade_action(3, S_B), A_B);
        assert_eq!(tables.cascade_action(4, S_B), A_B);
    }

    #[test]
    fn n_step_dp_two_step_chain() {
        let env = chain(&[0.25, -0.5, 2.0]);
        let tables = n_step_dp(&env, 2).unwrap();
        assert_eq!(tables.q[1][0][0], 0.25 + (-0.5));
    }

    #[test]
    fn policy_eval_circular_right_policy() {
        let env = circular();
        let mut policy = vec![None; env.num_states()];
        policy[S_B] = Some(A_C);
        policy[S_C] = Some(0);
        let values = policy_eval(&env, &policy).unwrap();
        assert_abs_diff_eq!(values.reward[&S_B], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(values.steps[&S_B], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn policy_eval_rejects_improper_policy() {
        let env = circular();
        let mut policy = vec![None; env.num_states()];
        policy[S_B] = Some(A_B);
        match policy_eval(&env, &policy) {
            Err(Error::ImproperPolicy { stuck }) => assert_eq!(stuck, vec![S_B]),
            other => panic!("expected improper-policy error, got {other:?}"),
        }
    }

    #[test]
    fn pareto_front_circular_single_point() {
        let env = circular();
        let front = pareto_front(&env, S_B, &ParetoOptions::default()).unwrap();
        assert_eq!(front.len(), 1);
        assert_abs_diff_eq!(front[0].expected_reward, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(front[0].expected_steps, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn pareto_front_single_goal_mdp() {
        let env = chain(&[-1.0, 1.0]);
        let front = pareto_front(&env, 0, &ParetoOptions::default()).unwrap();
        assert_eq!(front.len(), 1);
        assert_abs_diff_eq!(front[0].expected_reward, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn rollout_reaches_goal_on_circular() {
        let env = circular();
        let mut policy = vec![None; env.num_states()];
        policy[S_B] = Some(A_C);
        policy[S_C] = Some(0);
        policy[S_A] = Some(0);
        assert_eq!(rollout_goal(&env, &policy, S_B), Some(G_R));
        assert!(support_reaches_terminal(&env, &policy, S_B));
        policy[S_B] = Some(A_B);
        assert_eq!(rollout_goal(&env, &policy, S_B), None);
        assert!(!support_reaches_terminal(&env, &policy, S_B));
        let _ = G_L;
    }
}
