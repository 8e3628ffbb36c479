//! Brute-force expectimax, written independently of the planner so the two
//! can be checked against each other on small worlds.
//!
//! Rewards are evaluated as plain scalars through the substitution table; the
//! tree is expanded over every joint action. Only partner policies and node
//! values are memoized, to keep level-2 checks within seconds.

use std::collections::HashMap;

use crate::config::{Lookahead, SolveConfig};
use crate::error::{Error, Result};
use crate::gridworld::{
    action_cost, physical_reward, transition, Action, AgentId, Cell, Grid, JointAction, PhysicalGoal, WorldState,
    N_ACTIONS,
};
use crate::inference::{Belief, Hypothesis};
use crate::planner::{Mind, MindKey, Planner, QRow};
use crate::social::{social_term, SocialGoal, SocialTermInput};

/// Largest world the oracle will expand.
pub const ORACLE_MAX_CELLS: usize = 25;
pub const ORACLE_MAX_DEPTH: u32 = 4;

pub struct Oracle<'g> {
    grid: &'g Grid,
    cfg: SolveConfig,
    /// Depth every partner model is evaluated at.
    depth: u32,
    policies: HashMap<(MindKey, WorldState), QRow>,
    values: HashMap<(MindKey, WorldState, u32), QRow>,
}

impl<'g> Oracle<'g> {
    /// `depth` extra backups after the immediate reward; a planner with
    /// horizon `depth + 1` should agree.
    pub fn new(grid: &'g Grid, cfg: SolveConfig, depth: u32, objects: usize) -> Result<Oracle<'g>> {
        if grid.n_cells() > ORACLE_MAX_CELLS || objects > 1 {
            return Err(Error::OracleTooLarge(grid.n_cells(), ORACLE_MAX_CELLS));
        }
        if depth > ORACLE_MAX_DEPTH {
            return Err(Error::Invalid(format!("oracle depth {depth} above {ORACLE_MAX_DEPTH}")));
        }
        Ok(Oracle { grid, cfg, depth, policies: HashMap::new(), values: HashMap::new() })
    }

    fn r(&self, s: &WorldState, m: &Mind) -> f64 {
        physical_reward(self.grid, s, m.agent, m.goal, self.cfg.rho, self.cfg.delta)
    }

    /// Reward `m` receives when `joint` lands in `next`, averaged over its
    /// belief.
    fn reward(&self, m: &Mind, next: &WorldState, joint: JointAction) -> f64 {
        if m.is_plain() {
            return self.r(next, m) - action_cost(joint[m.agent.index()]);
        }
        m.beliefs[0].iter().map(|(h, w)| w * self.reward_h(m, &h, next, joint)).sum()
    }

    fn softmax(&self, q: &QRow) -> QRow {
        let m = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p = [0.0; N_ACTIONS];
        let mut z = 0.0;
        for k in 0..N_ACTIONS {
            p[k] = ((q[k] - m) / self.cfg.tau).exp();
            z += p[k];
        }
        p.map(|x| x / z)
    }

    /// The partner model an observer attributes to `m` at `s`.
    pub fn policy(&mut self, m: &Mind, s: &WorldState) -> QRow {
        let key = (m.key(), s.clone());
        if let Some(p) = self.policies.get(&key) {
            return *p;
        }
        let q = self.q(m, s, self.depth);
        let p = self.softmax(&q);
        self.policies.insert(key, p);
        p
    }

    /// Action values of `m` at `s` with `d` backups after the immediate reward.
    pub fn q(&mut self, m: &Mind, s: &WorldState, d: u32) -> QRow {
        let key = (m.key(), s.clone(), d);
        if let Some(q) = self.values.get(&key) {
            return *q;
        }
        let me = m.agent.index();
        let mut q = [0.0; N_ACTIONS];
        if m.is_plain() {
            for (k, &a) in Action::ALL.iter().enumerate() {
                let mut joint = [Action::Stay; 2];
                joint[me] = a;
                let next = transition(self.grid, s, joint);
                q[k] = self.reward(m, &next, joint) + self.future(m, &next, d);
            }
        } else {
            let hyps: Vec<_> = m.beliefs[0].iter().collect();
            for (k, &a) in Action::ALL.iter().enumerate() {
                for &(h, w) in &hyps {
                    let partner = m.partner(&h);
                    let psi = self.policy(&partner, s);
                    for (j, &b) in Action::ALL.iter().enumerate() {
                        let mut joint = [b; 2];
                        joint[me] = a;
                        let next = transition(self.grid, s, joint);
                        let here = self.reward_h(m, &h, &next, joint) + self.future(m, &next, d);
                        q[k] += w * psi[j] * here;
                    }
                }
            }
        }
        self.values.insert(key, q);
        q
    }

    /// Reward of `m` under one hypothesis only.
    fn reward_h(&self, m: &Mind, h: &Hypothesis, next: &WorldState, joint: JointAction) -> f64 {
        let own = self.r(next, m) - action_cost(joint[m.agent.index()]);
        let partner = m.partner(h);
        let est_other_reward = if m.level >= 2 { self.reward(&partner, next, joint) } else { 0.0 };
        let input = SocialTermInput {
            own_social: m.social,
            own_physical: m.goal,
            est_other_physical: h.goal,
            est_other_social: h.social,
            level: m.level,
            est_other_reward,
            r_own: self.r(next, m),
            r_est_other: self.r(next, &partner),
            n_exchange: self.cfg.n_exchange,
        };
        own + social_term(&input).unwrap_or(0.0)
    }

    fn future(&mut self, m: &Mind, next: &WorldState, d: u32) -> f64 {
        if d == 0 {
            return 0.0;
        }
        let q = self.q(m, next, d - 1);
        self.cfg.gamma * q.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One-shot oracle evaluation.
pub fn oracle_expectimax(grid: &Grid, cfg: SolveConfig, mind: &Mind, s: &WorldState, depth: u32) -> Result<QRow> {
    let mut o = Oracle::new(grid, cfg, depth, s.objects.len())?;
    Ok(o.q(mind, s, depth))
}

/// Pinned 4x4 world: landmarks in opposite corners, one object in the middle.
pub fn fixture() -> (Grid, WorldState) {
    let grid = Grid::new(4, 4, vec![Cell::new(0, 3), Cell::new(3, 0)]).expect("static grid");
    let s = WorldState::new([Cell::new(0, 0), Cell::new(3, 3)], &[Cell::new(1, 2)]);
    (grid, s)
}

/// Mind used for fixture checks: yellow moves the object to landmark 0 and
/// holds skewed beliefs, so belief weighting is exercised.
pub fn fixture_mind(level: u8, social: SocialGoal) -> Result<Mind> {
    let yellow = PhysicalGoal::new(0, 0);
    let goals = [PhysicalGoal::new(0, 0), PhysicalGoal::new(0, 1)];
    let skewed = |socials: &[SocialGoal]| -> Result<Belief> {
        let mut pairs = Vec::new();
        for (i, &goal) in goals.iter().enumerate() {
            for (j, &social) in socials.iter().enumerate() {
                pairs.push((Hypothesis { goal, social }, 1.0 + i as f64 + 0.5 * j as f64));
            }
        }
        Belief::from_weights(pairs)
    };
    let beliefs = match level {
        0 => Vec::new(),
        1 => vec![skewed(&[SocialGoal::None])?],
        _ => vec![skewed(&SocialGoal::ALL)?, skewed(&[SocialGoal::None])?],
    };
    let social = if level == 0 { SocialGoal::None } else { social };
    Ok(Mind { agent: AgentId::YELLOW, level: level.min(2), social, goal: yellow, beliefs })
}

#[derive(Debug, Clone, Copy)]
pub struct Comparison {
    pub states: usize,
    pub max_abs_diff: f64,
}

/// Planner (exhaustive, horizon `depth + 1`) against the oracle at every
/// state reachable in the fixture.
pub fn compare_on_fixture(level: u8, social: SocialGoal, depth: u32) -> Result<Comparison> {
    let (grid, s0) = fixture();
    let cfg = SolveConfig { horizon: depth + 1, lookahead: Lookahead::Exhaustive, ..SolveConfig::default() };
    let planner = Planner::new(grid.clone(), cfg)?;
    let session = planner.session();
    let mind = fixture_mind(level, social)?;
    let mut oracle = Oracle::new(&grid, cfg, depth, s0.objects.len())?;
    let env = session.envelope(&s0)?;
    let sol = if mind.is_plain() { None } else { Some(session.solve(&mind, &s0)?) };
    let mut max_abs_diff: f64 = 0.0;
    for s in &env.states {
        let p = match &sol {
            None => planner.level0_q(mind.agent, mind.goal, s),
            Some(sol) => sol.q_row(s).ok_or_else(|| Error::Invalid(format!("no values at {s:?}")))?,
        };
        let o = oracle.q(&mind, s, depth);
        for k in 0..N_ACTIONS {
            max_abs_diff = max_abs_diff.max((p[k] - o[k]).abs());
        }
    }
    Ok(Comparison { states: env.len(), max_abs_diff })
}
