//! Social goals as reward-term substitutions.
//!
//! The substitution is generic over [`RewardValue`] so the same table drives
//! both scalar evaluation and the symbolic reward forms used by the planner.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::gridworld::PhysicalGoal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SocialGoal {
    None,
    Cooperation,
    Conflict,
    Competition,
    Coercion,
    Exchange,
}

impl SocialGoal {
    pub const ALL: [SocialGoal; 6] = [
        SocialGoal::None,
        SocialGoal::Cooperation,
        SocialGoal::Conflict,
        SocialGoal::Competition,
        SocialGoal::Coercion,
        SocialGoal::Exchange,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            SocialGoal::None => "none",
            SocialGoal::Cooperation => "cooperation",
            SocialGoal::Conflict => "conflict",
            SocialGoal::Competition => "competition",
            SocialGoal::Coercion => "coercion",
            SocialGoal::Exchange => "exchange",
        }
    }

    pub fn parse(s: &str) -> Option<SocialGoal> {
        SocialGoal::ALL.into_iter().find(|g| g.name() == s)
    }

    /// Partners a competitor or coercer treats as benign.
    fn benign(self) -> bool {
        matches!(self, SocialGoal::Cooperation | SocialGoal::Exchange | SocialGoal::None)
    }
}

impl std::fmt::Display for SocialGoal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Anything the substitution table can be evaluated over.
pub trait RewardValue:
    Clone + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
}

impl RewardValue for f64 {
    fn zero() -> Self {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct SocialTermInput<T> {
    pub own_social: SocialGoal,
    pub own_physical: PhysicalGoal,
    pub est_other_physical: PhysicalGoal,
    pub est_other_social: SocialGoal,
    pub level: u8,
    /// The partner's reward one level down, as estimated by the actor.
    pub est_other_reward: T,
    /// Physical reward of the actor's own goal.
    pub r_own: T,
    /// Physical reward of the partner's estimated goal.
    pub r_est_other: T,
    pub n_exchange: f64,
}

/// The social term for one cell of the substitution table. `None` marks an
/// impossible interaction (exchange without a willing partner).
pub fn social_term<T: RewardValue>(input: &SocialTermInput<T>) -> Option<T> {
    use SocialGoal::*;
    assert!(input.level >= 1, "social terms start at level 1");
    let r_tilde = || input.est_other_reward.clone();
    let same_goal = input.own_physical == input.est_other_physical;
    let other = input.est_other_social;
    if input.level == 1 {
        return match input.own_social {
            None => Some(T::zero()),
            Cooperation => Some(input.r_est_other.clone()),
            Conflict | Competition => Some(-input.r_est_other.clone()),
            Coercion => Some(input.r_own.clone()),
            Exchange => Option::None,
        };
    }
    match input.own_social {
        None => Some(T::zero()),
        Cooperation => Some(r_tilde()),
        Conflict => Some(-r_tilde()),
        Competition => Some(match other {
            Coercion if same_goal => r_tilde(),
            Coercion => -r_tilde(),
            o if o.benign() => r_tilde(),
            _ => -r_tilde(),
        }),
        Coercion => Some(match other {
            Competition if same_goal => r_tilde(),
            Competition => -r_tilde() + input.r_own.clone(),
            o if o.benign() => r_tilde() + input.r_own.clone(),
            _ => -r_tilde() + input.r_own.clone(),
        }),
        Exchange => match other {
            Exchange => Some(input.r_est_other.clone() * input.n_exchange + r_tilde()),
            _ => Option::None,
        },
    }
}

/// Immediate reward: own physical reward plus social term minus action cost.
pub fn compose_reward(r_own: f64, social: f64, cost: f64) -> f64 {
    r_own + social - cost
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose() {
        assert_eq!(compose_reward(1.25, 0.0, 1.0), 0.25);
        assert!((compose_reward(0.0, 0.8, 0.1) - 0.7).abs() < 1e-15);
        assert_eq!(compose_reward(0.75, -0.75, 1.0), -1.0);
    }

    #[test]
    fn names_round_trip() {
        for g in SocialGoal::ALL {
            assert_eq!(SocialGoal::parse(g.name()), Some(g));
            let json = serde_json::to_string(&g).unwrap();
            assert_eq!(json, format!("\"{}\"", g.name()));
        }
    }
}
