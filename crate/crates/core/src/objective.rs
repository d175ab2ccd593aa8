//! Episode evaluation functions over total reward R and episode length T.
//!
//! Objectives form a closed, serializable family rather than arbitrary
//! callables so that benchmark configurations and environment files can
//! name them. The nine standard instances f1..f9 are pre-registered.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monotonic evaluation function f(R, T): non-decreasing in the episode
/// return R, non-increasing in the episode length T (on its domain, see
/// [`Objective::monotone_domain`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Objective {
    /// f(R, T) = R
    TotalReward,
    /// f(R, T) = R for T <= threshold, else R - (T - threshold)
    StepPenaltyAfter { threshold: u32 },
    /// f(R, T) = R for T <= threshold, else R - base^(T - threshold)
    ExpPenaltyAfter { threshold: u32, base: f64 },
    /// f(R, T) = -T
    NegTime,
    /// f(R, T) = -T when R > min_reward, else penalty
    ShortestPathAboveReward { min_reward: f64, penalty: f64 },
    /// f(R, T) = R for T <= max_steps, else penalty
    RewardWithinTimeLimit { max_steps: u32, penalty: f64 },
    /// f(R, T) = R / T
    AverageReward,
    /// f(R, T) = R / T when R >= min_reward, else penalty
    AverageRewardAboveThreshold { min_reward: f64, penalty: f64 },
}

impl Objective {
    /// Evaluates the objective. `steps` is real-valued because module
    /// selection feeds expected step counts, not realized integers.
    pub fn evaluate(&self, total_reward: f64, steps: f64) -> f64 {
        let (r, t) = (total_reward, steps);
        match *self {
            Objective::TotalReward => r,
            Objective::StepPenaltyAfter { threshold } => {
                let k = threshold as f64;
                if t <= k {
                    r
                } else {
                    r - (t - k)
                }
            }
            Objective::ExpPenaltyAfter { threshold, base } => {
                let k = threshold as f64;
                if t <= k {
                    r
                } else {
                    r - base.powf(t - k)
                }
            }
            Objective::NegTime => -t,
            Objective::ShortestPathAboveReward { min_reward, penalty } => {
                if r > min_reward {
                    -t
                } else {
                    penalty
                }
            }
            Objective::RewardWithinTimeLimit { max_steps, penalty } => {
                if t <= max_steps as f64 {
                    r
                } else {
                    penalty
                }
            }
            Objective::AverageReward => r / t,
            Objective::AverageRewardAboveThreshold { min_reward, penalty } => {
                if r >= min_reward {
                    r / t
                } else {
                    penalty
                }
            }
        }
    }

    /// Parameter sanity for file-loaded objectives.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidObjective(msg.into()));
        match *self {
            Objective::ExpPenaltyAfter { base, .. } if base <= 1.0 => {
                fail("ExpPenaltyAfter base must exceed 1")
            }
            Objective::ShortestPathAboveReward { penalty, .. } if penalty >= 0.0 => {
                fail("ShortestPathAboveReward penalty must be negative")
            }
            Objective::RewardWithinTimeLimit { max_steps: 0, .. } => {
                fail("RewardWithinTimeLimit max_steps must be at least 1")
            }
            Objective::AverageRewardAboveThreshold { min_reward, penalty }
                if penalty >= 0.0 || min_reward < 0.0 =>
            {
                fail("AverageRewardAboveThreshold needs min_reward >= 0 > penalty")
            }
            _ => Ok(()),
        }
    }

    /// The (R, T) box on which this kind is monotone (non-decreasing in R,
    /// non-increasing in T). Outside the box the formulas can invert: e.g.
    /// -T falls below a fixed penalty once T > -penalty.
    pub fn monotone_domain(&self) -> ((f64, f64), (u32, u32)) {
        const R_FULL: (f64, f64) = (-50.0, 50.0);
        const T_FULL: (u32, u32) = (1, 60);
        match *self {
            Objective::ShortestPathAboveReward { penalty, .. } => {
                let t_hi = (-penalty).floor().max(1.0) as u32;
                (R_FULL, (1, t_hi))
            }
            Objective::RewardWithinTimeLimit { penalty, .. } => ((penalty, 50.0), T_FULL),
            Objective::AverageReward => ((0.0, 50.0), T_FULL),
            _ => (R_FULL, T_FULL),
        }
    }
}

/// A named objective as it appears in environment files and configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedObjective {
    pub name: String,
    #[serde(flatten)]
    pub objective: Objective,
}

/// The nine benchmark objectives in phase order.
pub fn standard_objectives() -> Vec<NamedObjective> {
    let defs: Vec<(&str, Objective)> = vec![
        ("f1", Objective::TotalReward),
        ("f2", Objective::StepPenaltyAfter { threshold: 3 }),
        ("f3", Objective::ExpPenaltyAfter { threshold: 3, base: 1.3 }),
        ("f4", Objective::NegTime),
        (
            "f5",
            Objective::ShortestPathAboveReward { min_reward: 6.5, penalty: -10.0 },
        ),
        (
            "f6",
            Objective::RewardWithinTimeLimit { max_steps: 7, penalty: -10.0 },
        ),
        (
            "f7",
            Objective::RewardWithinTimeLimit { max_steps: 5, penalty: -10.0 },
        ),
        ("f8", Objective::AverageReward),
        (
            "f9",
            Objective::AverageRewardAboveThreshold { min_reward: 6.5, penalty: -1.0 },
        ),
    ];
    defs.into_iter()
        .map(|(name, objective)| NamedObjective { name: name.into(), objective })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn by_name(name: &str) -> Objective {
        standard_objectives()
            .into_iter()
            .find(|o| o.name == name)
            .unwrap()
            .objective
    }

    #[test]
    fn f7_time_limit_boundary() {
        let f7 = by_name("f7");
        assert_eq!(f7.evaluate(5.0, 5.0), 5.0);
        assert_eq!(f7.evaluate(5.0, 6.0), -10.0);
    }

    #[test]
    fn f1_is_identity_on_reward() {
        assert_eq!(by_name("f1").evaluate(3.7, 12.0), 3.7);
    }

    #[test]
    fn f3_exponential_penalty() {
        let f3 = by_name("f3");
        assert_abs_diff_eq!(f3.evaluate(8.0, 5.0), 8.0 - 1.3f64.powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(f3.evaluate(8.0, 5.0), 6.31, epsilon = 1e-12);
    }

    #[test]
    fn f2_f3_step_boundary() {
        let f2 = by_name("f2");
        assert_eq!(f2.evaluate(4.0, 3.0), 4.0);
        assert_eq!(f2.evaluate(4.0, 4.0), 3.0);
        let f3 = by_name("f3");
        assert_eq!(f3.evaluate(4.0, 3.0), 4.0);
        assert_abs_diff_eq!(f3.evaluate(4.0, 4.0), 4.0 - 1.3, epsilon = 1e-12);
    }

    #[test]
    fn f5_f9_reward_threshold_boundary() {
        let f5 = by_name("f5");
        // R = 6.5 is not strictly above the threshold
        assert_eq!(f5.evaluate(6.5, 4.0), -10.0);
        assert_eq!(f5.evaluate(6.5 + 1e-9, 4.0), -4.0);
        let f9 = by_name("f9");
        // R = 6.5 qualifies for f9
        assert_abs_diff_eq!(f9.evaluate(6.5, 3.0), 6.5 / 3.0, epsilon = 1e-12);
        assert_eq!(f9.evaluate(6.5 - 1e-9, 3.0), -1.0);
    }

    #[test]
    fn f4_f8_values() {
        assert_eq!(by_name("f4").evaluate(100.0, 12.0), -12.0);
        assert_abs_diff_eq!(by_name("f8").evaluate(6.0, 3.0), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn f6_limit_is_seven() {
        let f6 = by_name("f6");
        assert_eq!(f6.evaluate(2.0, 7.0), 2.0);
        assert_eq!(f6.evaluate(2.0, 8.0), -10.0);
    }

    #[test]
    fn registry_has_nine_entries_in_order() {
        let names: Vec<String> = standard_objectives().into_iter().map(|o| o.name).collect();
        assert_eq!(names, ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"]);
    }

    #[test]
    fn serde_round_trip() {
        for named in standard_objectives() {
            let text = serde_json::to_string(&named).unwrap();
            let back: NamedObjective = serde_json::from_str(&text).unwrap();
            assert_eq!(named, back);
        }
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(Objective::ExpPenaltyAfter { threshold: 3, base: 0.9 }.validate().is_err());
        assert!(Objective::ShortestPathAboveReward { min_reward: 1.0, penalty: 2.0 }
            .validate()
            .is_err());
        for named in standard_objectives() {
            named.objective.validate().unwrap();
        }
    }
}
