//! The five-state cyclic positive-reward MDP.
//!
//! The agent starts at `s_b` and can stay there for +2 per step, walk two
//! steps left for a terminal reward of 0, or two steps right for 1. Every
//! discounted value function prefers to stay forever, which is exactly the
//! case the n-step ensemble's action filter is built to survive.

use crate::envs::file::{TableAction, TableOutcome, TableSpec, TableState};
use crate::mdp::TaMdp;
use crate::objective::standard_objectives;

pub const S_A: usize = 0;
pub const S_B: usize = 1;
pub const S_C: usize = 2;
pub const G_L: usize = 3;
pub const G_R: usize = 4;

/// Action indices at `s_b`.
pub const A_A: usize = 0;
pub const A_B: usize = 1;
pub const A_C: usize = 2;

pub fn circular_spec() -> TableSpec {
    let one = |next: usize, reward: f64| vec![TableOutcome { next, prob: 1.0, reward }];
    TableSpec {
        start: S_B,
        states: vec![
            TableState {
                name: "s_a".into(),
                terminal: false,
                actions: vec![TableAction { name: "a_L".into(), outcomes: one(G_L, 0.0) }],
            },
            TableState {
                name: "s_b".into(),
                terminal: false,
                actions: vec![
                    TableAction { name: "a_a".into(), outcomes: one(S_A, 0.0) },
                    TableAction { name: "a_b".into(), outcomes: one(S_B, 2.0) },
                    TableAction { name: "a_c".into(), outcomes: one(S_C, 0.0) },
                ],
            },
            TableState {
                name: "s_c".into(),
                terminal: false,
                actions: vec![TableAction { name: "a_R".into(), outcomes: one(G_R, 1.0) }],
            },
            TableState { name: "g_L".into(), terminal: true, actions: vec![] },
            TableState { name: "g_R".into(), terminal: true, actions: vec![] },
        ],
    }
}

pub fn circular() -> TaMdp {
    circular_spec()
        .build("circular", standard_objectives())
        .expect("circular spec is valid")
}
