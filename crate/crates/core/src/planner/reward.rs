//! Symbolic reward forms.
//!
//! Every reward in the recursion is linear in a handful of physical-reward
//! channels and the two action costs, so the substitution table can be applied
//! once per mind instead of once per state.

use std::ops::{Add, Mul, Neg, Sub};

use crate::gridworld::{action_cost, AgentId, JointAction, PhysicalGoal};
use crate::inference::{Belief, Hypothesis};
use crate::social::{social_term, RewardValue, SocialGoal, SocialTermInput};

/// Physical reward of `goal`, measured with `owner`'s partner as an obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel {
    pub owner: AgentId,
    pub goal: PhysicalGoal,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearReward {
    /// Sorted by channel, no zero weights.
    pub terms: Vec<(Channel, f64)>,
    /// Coefficient on each agent's action cost; `-1` on the actor's own cost
    /// for a plain reward.
    pub cost: [f64; 2],
}

impl LinearReward {
    pub fn physical(owner: AgentId, goal: PhysicalGoal) -> Self {
        LinearReward { terms: vec![(Channel { owner, goal }, 1.0)], cost: [0.0; 2] }
    }

    pub fn action_cost(agent: AgentId) -> Self {
        let mut cost = [0.0; 2];
        cost[agent.index()] = 1.0;
        LinearReward { terms: Vec::new(), cost }
    }

    /// Physical reward minus own action cost: the plain single-agent reward.
    pub fn selfish(agent: AgentId, goal: PhysicalGoal) -> Self {
        LinearReward::physical(agent, goal) - LinearReward::action_cost(agent)
    }

    fn normalized(mut terms: Vec<(Channel, f64)>, cost: [f64; 2]) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Channel, f64)> = Vec::with_capacity(terms.len());
        for (c, w) in terms {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += w,
                _ => out.push((c, w)),
            }
        }
        out.retain(|t| t.1 != 0.0);
        LinearReward { terms: out, cost }
    }

    pub fn weight(&self, c: Channel) -> f64 {
        self.terms.iter().find(|t| t.0 == c).map_or(0.0, |t| t.1)
    }

    pub fn channels(&self) -> impl Iterator<Item = Channel> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// Evaluate given each channel's physical reward on the successor state.
    pub fn eval(&self, channel_reward: impl Fn(Channel) -> f64, joint: JointAction) -> f64 {
        let phys: f64 = self.terms.iter().map(|&(c, w)| w * channel_reward(c)).sum();
        phys + self.cost[0] * action_cost(joint[0]) + self.cost[1] * action_cost(joint[1])
    }

    /// Exact identity for caching.
    pub fn key(&self) -> (Vec<(Channel, u64)>, [u64; 2]) {
        (self.terms.iter().map(|&(c, w)| (c, w.to_bits())).collect(), [self.cost[0].to_bits(), self.cost[1].to_bits()])
    }
}

impl Add for LinearReward {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut t = self.terms;
        t.extend(rhs.terms);
        LinearReward::normalized(t, [self.cost[0] + rhs.cost[0], self.cost[1] + rhs.cost[1]])
    }
}

impl Neg for LinearReward {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Sub for LinearReward {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<f64> for LinearReward {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        let t = self.terms.into_iter().map(|(c, w)| (c, w * k)).collect();
        LinearReward::normalized(t, [self.cost[0] * k, self.cost[1] * k])
    }
}

impl RewardValue for LinearReward {
    fn zero() -> Self {
        LinearReward::default()
    }
}

/// An agent as modeled at some depth of the recursion.
///
/// `beliefs[0]` is this agent's belief about its partner, `beliefs[1]` the
/// partner's belief about this agent as this agent imagines it, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct Mind {
    pub agent: AgentId,
    pub level: u8,
    pub social: SocialGoal,
    pub goal: PhysicalGoal,
    pub beliefs: Vec<Belief>,
}

/// Bit-exact identity of a [`Mind`].
pub type MindKey = (AgentId, u8, SocialGoal, PhysicalGoal, Vec<Vec<(Hypothesis, u64)>>);

impl Mind {
    pub fn plain(agent: AgentId, goal: PhysicalGoal) -> Mind {
        Mind { agent, level: 0, social: SocialGoal::None, goal, beliefs: Vec::new() }
    }

    /// Level 0, or no social goal: planned as a single-agent MDP.
    pub fn is_plain(&self) -> bool {
        self.level == 0 || self.social == SocialGoal::None
    }

    /// The partner one level down under hypothesis `h`.
    pub fn partner(&self, h: &Hypothesis) -> Mind {
        let level = self.level - 1;
        Mind {
            agent: self.agent.other(),
            level,
            social: if level == 0 { SocialGoal::None } else { h.social },
            goal: h.goal,
            beliefs: self.beliefs.get(1..).map(<[Belief]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn key(&self) -> MindKey {
        let beliefs = if self.is_plain() {
            Vec::new()
        } else {
            self.beliefs[..self.level as usize].iter().map(Belief::key).collect()
        };
        (self.agent, self.level, self.social, self.goal, beliefs)
    }

    /// Every hypothesis the mind relies on has a matching belief.
    pub fn is_well_formed(&self) -> bool {
        self.is_plain()
            || (self.beliefs.len() >= self.level as usize
                && self.beliefs[0].hypotheses().iter().all(|h| {
                    let p = self.partner(h);
                    p.is_plain() || p.is_well_formed()
                }))
    }
}

/// Reward of a mind under one partner hypothesis, as a mixture of pure forms.
#[derive(Debug, Clone)]
pub struct HypothesisReward {
    pub hypothesis: Hypothesis,
    /// Belief weight of the hypothesis.
    pub weight: f64,
    /// Pure forms with mixture weights summing to 1.
    pub forms: Vec<(f64, LinearReward)>,
    /// The social term was undefined and dropped.
    pub degraded: bool,
}

impl HypothesisReward {
    pub fn collapsed(&self) -> LinearReward {
        self.forms.iter().fold(LinearReward::zero(), |acc, (w, f)| acc + f.clone() * *w)
    }
}

/// Per-hypothesis reward of a social mind. Plain minds have no hypotheses.
pub fn hypothesis_rewards(mind: &Mind, n_exchange: f64) -> Vec<HypothesisReward> {
    let own = LinearReward::selfish(mind.agent, mind.goal);
    if mind.is_plain() {
        return Vec::new();
    }
    let partner = mind.agent.other();
    mind.beliefs[0]
        .iter()
        .map(|(h, weight)| {
            let r_own = LinearReward::physical(mind.agent, mind.goal);
            let r_other = LinearReward::physical(partner, h.goal);
            let others: Vec<(f64, LinearReward)> = if mind.level == 1 {
                vec![(1.0, LinearReward::zero())]
            } else {
                expected_forms(&mind.partner(&h), n_exchange)
            };
            let mut degraded = false;
            let mut forms = Vec::with_capacity(others.len());
            for (w, r_tilde) in others {
                let input = SocialTermInput {
                    own_social: mind.social,
                    own_physical: mind.goal,
                    est_other_physical: h.goal,
                    est_other_social: h.social,
                    level: mind.level,
                    est_other_reward: r_tilde,
                    r_own: r_own.clone(),
                    r_est_other: r_other.clone(),
                    n_exchange,
                };
                let term = social_term(&input).unwrap_or_else(|| {
                    degraded = true;
                    LinearReward::zero()
                });
                push_form(&mut forms, w, own.clone() + term);
            }
            HypothesisReward { hypothesis: h, weight, forms, degraded }
        })
        .collect()
}

/// The mind's reward averaged over its belief, as weighted pure forms.
pub fn expected_forms(mind: &Mind, n_exchange: f64) -> Vec<(f64, LinearReward)> {
    if mind.is_plain() {
        return vec![(1.0, LinearReward::selfish(mind.agent, mind.goal))];
    }
    let mut out = Vec::new();
    for hr in hypothesis_rewards(mind, n_exchange) {
        for (w, f) in hr.forms {
            push_form(&mut out, hr.weight * w, f);
        }
    }
    out
}

fn push_form(out: &mut Vec<(f64, LinearReward)>, w: f64, f: LinearReward) {
    match out.iter_mut().find(|e| e.1 == f) {
        Some(e) => e.0 += w,
        None => out.push((w, f)),
    }
}

/// Belief mass on hypotheses whose social term had to be dropped.
pub fn degraded_mass(mind: &Mind, n_exchange: f64) -> f64 {
    hypothesis_rewards(mind, n_exchange).iter().filter(|h| h.degraded).fold(0.0, |m, h| m + h.weight)
}
