//! Bayesian goal inference over a partner's (physical goal, social goal).
//!
//! Weights are kept in log space. Likelihoods come from a [`PartnerModel`],
//! normally the planner's softmax model of the partner one level down.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridworld::{transition, AgentId, Grid, JointAction, PhysicalGoal, WorldState};
use crate::social::SocialGoal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hypothesis {
    pub goal: PhysicalGoal,
    pub social: SocialGoal,
}

/// Normalized distribution over partner hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    hyps: Vec<Hypothesis>,
    log_w: Vec<f64>,
    timestep: usize,
}

impl Belief {
    /// Uniform over the product of the two hypothesis sets.
    pub fn init(goals: &[PhysicalGoal], socials: &[SocialGoal]) -> Result<Belief> {
        let hyps: Vec<_> =
            goals.iter().flat_map(|&goal| socials.iter().map(move |&social| Hypothesis { goal, social })).collect();
        Belief::uniform(hyps)
    }

    pub fn uniform(hyps: Vec<Hypothesis>) -> Result<Belief> {
        if hyps.is_empty() {
            return Err(Error::EmptyHypotheses);
        }
        let lw = -(hyps.len() as f64).ln();
        Ok(Belief { log_w: vec![lw; hyps.len()], hyps, timestep: 0 })
    }

    /// Arbitrary nonnegative weights, renormalized.
    pub fn from_weights(pairs: Vec<(Hypothesis, f64)>) -> Result<Belief> {
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        if pairs.is_empty() || !(total > 0.0) || pairs.iter().any(|p| !(p.1 >= 0.0)) {
            return Err(Error::EmptyHypotheses);
        }
        let (hyps, w): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(Belief { hyps, log_w: w.iter().map(|x| (x / total).ln()).collect(), timestep: 0 })
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hyps
    }

    pub fn len(&self) -> usize {
        self.hyps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyps.is_empty()
    }

    pub fn timestep(&self) -> usize {
        self.timestep
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_w.iter().map(|l| l.exp()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Hypothesis, f64)> + '_ {
        self.hyps.iter().copied().zip(self.log_w.iter().map(|l| l.exp()))
    }

    /// Probability mass grouped by an arbitrary key, in first-seen order.
    pub fn marginal<K: PartialEq + Copy>(&self, key: impl Fn(&Hypothesis) -> K) -> Vec<(K, f64)> {
        let mut out: Vec<(K, f64)> = Vec::new();
        for (h, w) in self.iter() {
            let k = key(&h);
            match out.iter_mut().find(|e| e.0 == k) {
                Some(e) => e.1 += w,
                None => out.push((k, w)),
            }
        }
        out
    }

    pub fn physical_marginal(&self) -> Vec<(PhysicalGoal, f64)> {
        self.marginal(|h| h.goal)
    }

    pub fn social_marginal(&self) -> Vec<(SocialGoal, f64)> {
        self.marginal(|h| h.social)
    }

    /// Bit-exact identity used for cache keys.
    pub fn key(&self) -> Vec<(Hypothesis, u64)> {
        self.hyps.iter().copied().zip(self.log_w.iter().map(|l| l.to_bits())).collect()
    }

    /// Multiply in per-hypothesis log-likelihoods and renormalize. Returns
    /// `false` (and resets to uniform) when every hypothesis lost all mass.
    fn absorb(&mut self, log_lik: &[f64]) -> bool {
        let post: Vec<f64> = self.log_w.iter().zip(log_lik).map(|(a, b)| a + b).collect();
        let ok = match log_normalize(&post) {
            Some(p) => {
                self.log_w = p;
                true
            }
            None => {
                let lw = -(self.hyps.len() as f64).ln();
                self.log_w = vec![lw; self.hyps.len()];
                false
            }
        };
        self.timestep += 1;
        ok
    }
}

/// Shift log weights so they exponentiate to a distribution; `None` when no
/// weight is finite.
pub fn log_normalize(lw: &[f64]) -> Option<Vec<f64>> {
    let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return None;
    }
    let lse = m + lw.iter().map(|l| (l - m).exp()).sum::<f64>().ln();
    Some(lw.iter().map(|l| l - lse).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub prev: WorldState,
    pub joint: JointAction,
    pub next: WorldState,
}

impl Observation {
    pub fn check(&self, grid: &Grid) -> Result<()> {
        if transition(grid, &self.prev, self.joint) == self.next {
            Ok(())
        } else {
            Err(Error::InconsistentObservation(0))
        }
    }
}

/// Probability of the partner's observed action under one hypothesis.
pub trait PartnerModel {
    fn partner(&self) -> AgentId;
    fn likelihood(&mut self, hyp: &Hypothesis, obs: &Observation) -> f64;
}

/// Outcome of an update: the new belief and whether it had to be reset.
#[derive(Debug, Clone)]
pub struct Update {
    pub belief: Belief,
    pub reset: bool,
}

fn log_likelihoods(belief: &Belief, obs: &Observation, model: &mut dyn PartnerModel) -> Vec<f64> {
    belief.hyps.iter().map(|h| model.likelihood(h, obs).ln()).collect()
}

/// Posterior over the joint hypotheses after one observed step.
pub fn joint_update(grid: &Grid, belief: &Belief, obs: &Observation, model: &mut dyn PartnerModel) -> Result<Update> {
    obs.check(grid).map_err(|_| Error::InconsistentObservation(belief.timestep))?;
    let ll = log_likelihoods(belief, obs, model);
    let mut belief = belief.clone();
    let ok = belief.absorb(&ll);
    if !ok {
        log::warn!("belief lost all mass at t={}; reset to uniform", belief.timestep);
    }
    Ok(Update { belief, reset: !ok })
}

/// Rebuild a joint belief as the product of two log-marginals over its support.
fn from_marginals(
    template: &Belief,
    goal_lw: &[(PhysicalGoal, f64)],
    social_lw: &[(SocialGoal, f64)],
) -> Option<Vec<f64>> {
    let lw: Vec<f64> = template
        .hyps
        .iter()
        .map(|h| {
            let g = goal_lw.iter().find(|e| e.0 == h.goal).map_or(f64::NEG_INFINITY, |e| e.1);
            let x = social_lw.iter().find(|e| e.0 == h.social).map_or(f64::NEG_INFINITY, |e| e.1);
            g + x
        })
        .collect();
    log_normalize(&lw)
}

fn ln_pairs<K: Copy>(v: &[(K, f64)]) -> Vec<(K, f64)> {
    v.iter().map(|&(k, w)| (k, w.ln())).collect()
}

/// One-step recursive update of the social-goal marginal. The inner sum over
/// physical goals is weighted by the current physical marginal.
pub fn update_social(grid: &Grid, belief: &Belief, obs: &Observation, model: &mut dyn PartnerModel) -> Result<Update> {
    obs.check(grid).map_err(|_| Error::InconsistentObservation(belief.timestep))?;
    let goals = belief.physical_marginal();
    let socials = belief.social_marginal();
    let mut new_social = Vec::with_capacity(socials.len());
    for &(x, px) in &socials {
        let mut s = 0.0;
        for &(g, pg) in &goals {
            let h = Hypothesis { goal: g, social: x };
            if belief.hyps.contains(&h) {
                s += pg * model.likelihood(&h, obs);
            }
        }
        new_social.push((x, px.ln() + s.ln()));
    }
    finish(belief, &ln_pairs(&goals), &new_social)
}

/// Physical-goal marginal from the whole history: the product of per-step
/// likelihoods, marginalized over social hypotheses under `prior`.
pub fn update_physical(
    grid: &Grid,
    prior: &Belief,
    history: &[Observation],
    model: &mut dyn PartnerModel,
) -> Result<Update> {
    if history.is_empty() {
        return Err(Error::Invalid("empty observation history".into()));
    }
    for (t, obs) in history.iter().enumerate() {
        obs.check(grid).map_err(|_| Error::InconsistentObservation(t))?;
    }
    let goals = prior.physical_marginal();
    let socials = prior.social_marginal();
    let mut new_goal = Vec::with_capacity(goals.len());
    for &(g, pg) in &goals {
        let mut terms = Vec::new();
        for &(x, px) in &socials {
            let h = Hypothesis { goal: g, social: x };
            if !prior.hyps.contains(&h) {
                continue;
            }
            let ll: f64 = history.iter().map(|o| model.likelihood(&h, o).ln()).sum();
            terms.push(ll + px.ln());
        }
        let lse = log_sum_exp(&terms);
        new_goal.push((g, lse + pg.ln()));
    }
    let mut u = finish(prior, &new_goal, &ln_pairs(&socials))?;
    u.belief.timestep = prior.timestep + history.len();
    Ok(u)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn finish(belief: &Belief, goal_lw: &[(PhysicalGoal, f64)], social_lw: &[(SocialGoal, f64)]) -> Result<Update> {
    let mut out = belief.clone();
    out.timestep += 1;
    match from_marginals(belief, goal_lw, social_lw) {
        Some(lw) => {
            out.log_w = lw;
            Ok(Update { belief: out, reset: false })
        }
        None => {
            log::warn!("belief lost all mass at t={}; reset to uniform", out.timestep);
            let lw = -(out.hyps.len() as f64).ln();
            out.log_w = vec![lw; out.hyps.len()];
            Ok(Update { belief: out, reset: true })
        }
    }
}
