//! Inverse-planning baseline.
//!
//! Physical goals are inferred by Bayesian inverse planning against a
//! non-social (level-0) partner model. Social goals come from a shallow cue:
//! whether the partner's action moved the observer's goal object closer to or
//! farther from its landmark than the partner standing still would have.
//! Nothing here touches the social reward table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridworld::{goal_distance, transition, Action, AgentId, Grid, PhysicalGoal};
use crate::inference::{log_normalize, Observation};
use crate::planner::{softmax_policy, Planner};
use crate::social::SocialGoal;

/// Relative likelihood of a social type whose family does not match the cue.
pub const CUE_MISS: f64 = 0.8;
/// Distance assigned to an unreachable goal when comparing cues.
const FAR: u32 = 1_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEstimate {
    /// One entry per hypothesized physical goal.
    pub posterior_physical: Vec<f64>,
    /// Indexed by [`SocialGoal::index`].
    pub posterior_social: [f64; 6],
    pub timestep: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cue {
    Closer,
    Farther,
    Neutral,
}

impl Cue {
    pub fn family(self) -> &'static [SocialGoal] {
        match self {
            Cue::Closer => &[SocialGoal::Cooperation, SocialGoal::Exchange],
            Cue::Farther => &[SocialGoal::Conflict, SocialGoal::Competition],
            Cue::Neutral => &[SocialGoal::None, SocialGoal::Coercion],
        }
    }
}

/// Effect of `partner`'s action on how far `owner_goal` is from completion.
pub fn distance_cue(grid: &Grid, obs: &Observation, partner: AgentId, owner_goal: PhysicalGoal) -> Cue {
    let owner = partner.other();
    let mut still = obs.joint;
    still[partner.index()] = Action::Stay;
    let counterfactual = transition(grid, &obs.prev, still);
    let d = |s| goal_distance(grid, s, owner, owner_goal).unwrap_or(FAR);
    let (actual, base) = (d(&obs.next), d(&counterfactual));
    match actual.cmp(&base) {
        std::cmp::Ordering::Less => Cue::Closer,
        std::cmp::Ordering::Greater => Cue::Farther,
        std::cmp::Ordering::Equal => Cue::Neutral,
    }
}

/// Incremental form of [`inverse_planning_estimate`].
pub struct InversePlanner<'p> {
    planner: &'p Planner,
    partner: AgentId,
    own_goal: PhysicalGoal,
    goals: Vec<PhysicalGoal>,
    goal_ll: Vec<f64>,
    social_ll: [f64; 6],
    timestep: usize,
    resets: usize,
}

impl<'p> InversePlanner<'p> {
    /// `partner` is observed; `own_goal` is the observer's goal, used by the
    /// social cue.
    pub fn new(
        planner: &'p Planner,
        partner: AgentId,
        own_goal: PhysicalGoal,
        goals: Vec<PhysicalGoal>,
    ) -> Result<Self> {
        if goals.is_empty() {
            return Err(Error::EmptyHypotheses);
        }
        Ok(InversePlanner {
            planner,
            partner,
            own_goal,
            goal_ll: vec![0.0; goals.len()],
            goals,
            social_ll: [0.0; 6],
            timestep: 0,
            resets: 0,
        })
    }

    pub fn observe(&mut self, obs: &Observation) -> Result<()> {
        let grid = self.planner.grid();
        obs.check(grid).map_err(|_| Error::InconsistentObservation(self.timestep))?;
        let a = obs.joint[self.partner.index()].index();
        let tau = self.planner.config().tau;
        for (ll, &g) in self.goal_ll.iter_mut().zip(&self.goals) {
            let q = self.planner.level0_q(self.partner, g, &obs.prev);
            *ll += softmax_policy(&q, tau)[a].ln();
        }
        let fam = distance_cue(grid, obs, self.partner, self.own_goal).family();
        for x in SocialGoal::ALL {
            if !fam.contains(&x) {
                self.social_ll[x.index()] += CUE_MISS.ln();
            }
        }
        self.timestep += 1;
        Ok(())
    }

    /// Number of times a posterior lost all mass and was reset.
    pub fn resets(&self) -> usize {
        self.resets
    }

    pub fn estimate(&mut self) -> BaselineEstimate {
        let physical = match log_normalize(&self.goal_ll) {
            Some(lw) => lw.iter().map(|x| x.exp()).collect(),
            None => {
                log::warn!("baseline physical posterior lost all mass; reset to uniform");
                self.resets += 1;
                self.goal_ll.iter_mut().for_each(|x| *x = 0.0);
                vec![1.0 / self.goals.len() as f64; self.goals.len()]
            }
        };
        let social = log_normalize(&self.social_ll).expect("cue likelihoods are positive");
        let mut ps = [0.0; 6];
        for (p, l) in ps.iter_mut().zip(social) {
            *p = l.exp();
        }
        BaselineEstimate { posterior_physical: physical, posterior_social: ps, timestep: self.timestep }
    }
}

/// Baseline posteriors after `history`, starting from uniform priors.
pub fn inverse_planning_estimate(
    planner: &Planner,
    partner: AgentId,
    own_goal: PhysicalGoal,
    goals: &[PhysicalGoal],
    history: &[Observation],
) -> Result<BaselineEstimate> {
    if history.is_empty() {
        return Err(Error::Invalid("empty observation history".into()));
    }
    let mut ip = InversePlanner::new(planner, partner, own_goal, goals.to_vec())?;
    for obs in history {
        ip.observe(obs)?;
    }
    Ok(ip.estimate())
}
