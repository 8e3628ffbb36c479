//! Recursive social planning.
//!
//! A [`Mind`] with no social goal (or at level 0) is planned as a single-agent
//! MDP on a relaxed table. A social mind runs value iteration over joint
//! states: its partner is modeled one level down, once per hypothesis, and
//! acts by a softmax over that model's action values. The mind itself acts
//! greedily.

pub mod envelope;
pub mod relaxed;
pub mod reward;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use arrayvec::ArrayVec;
use parking_lot::Mutex;

use crate::config::{Lookahead, SolveConfig};
use crate::error::Result;
use crate::gridworld::{action_cost, Action, AgentId, Grid, JointAction, PhysicalGoal, WorldState, N_ACTIONS};
use crate::inference::{Hypothesis, Observation, PartnerModel};

pub use envelope::{joint_index, Envelope, N_JOINT};
pub use relaxed::{Backups, RelaxedKey, RelaxedTable, RelaxedTerm};
pub use reward::{degraded_mass, expected_forms, hypothesis_rewards, Channel, LinearReward, Mind, MindKey};

pub type QRow = [f64; N_ACTIONS];

/// Boltzmann distribution `exp(q/tau)`, stabilized by subtracting the max.
pub fn softmax_policy(q: &[f64], tau: f64) -> Vec<f64> {
    let m = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = q.iter().map(|x| ((x - m) / tau).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

fn softmax_row(q: &QRow, tau: f64) -> QRow {
    let v = softmax_policy(q, tau);
    let mut out = [0.0; N_ACTIONS];
    out.copy_from_slice(&v);
    out
}

/// Values closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Greedy choice; ties go to the earliest action in [`Action::ALL`].
pub fn argmax_action(q: &QRow) -> Action {
    let m = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = q.iter().position(|&x| x >= m - TIE_TOLERANCE).unwrap_or(N_ACTIONS - 1);
    Action::from_index(k)
}

/// Default bound on states for exhaustive expansion.
pub const EXHAUSTIVE_LIMIT: usize = 200_000;
/// Relaxed tables kept before the cache is flushed.
const TABLE_CACHE_BYTES: usize = 1 << 30;

/// Shared, thread-safe state: the world and the relaxed-table cache.
pub struct Planner {
    grid: Grid,
    cfg: SolveConfig,
    tables: Mutex<(HashMap<RelaxedKey, Arc<RelaxedTable>>, usize)>,
}

impl Planner {
    pub fn new(grid: Grid, cfg: SolveConfig) -> Result<Planner> {
        cfg.validate()?;
        Ok(Planner { grid, cfg, tables: Mutex::new((HashMap::new(), 0)) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SolveConfig {
        &self.cfg
    }

    pub fn session(&self) -> Session<'_> {
        Session {
            planner: self,
            envelopes: RefCell::new(HashMap::new()),
            solves: RefCell::new(HashMap::new()),
            policies: RefCell::new(HashMap::new()),
            heuristics: RefCell::new(HashMap::new()),
            audit: RefCell::new(Audit::default()),
        }
    }

    fn table_backups(&self) -> Backups {
        match self.cfg.lookahead {
            Lookahead::Exhaustive => Backups::Exactly(self.cfg.horizon),
            Lookahead::Envelope { .. } => Backups::Converge,
        }
    }

    pub fn table(&self, key: &RelaxedKey) -> Arc<RelaxedTable> {
        if let Some(t) = self.tables.lock().0.get(key) {
            return t.clone();
        }
        let t = Arc::new(RelaxedTable::build(&self.grid, key));
        let mut guard = self.tables.lock();
        if guard.1 > TABLE_CACHE_BYTES {
            guard.0.clear();
            guard.1 = 0;
        }
        guard.1 += t.footprint();
        guard.0.entry(key.clone()).or_insert(t).clone()
    }

    fn key(
        &self,
        walls: ArrayVec<crate::gridworld::Cell, 3>,
        partner: Option<crate::gridworld::Cell>,
        terms: Vec<RelaxedTerm>,
        own_cost: f64,
        extra_cost: f64,
        backups: Backups,
    ) -> RelaxedKey {
        RelaxedKey {
            walls,
            partner,
            terms,
            own_cost_bits: own_cost.to_bits(),
            extra_cost_bits: extra_cost.to_bits(),
            backups,
            gamma_bits: self.cfg.gamma.to_bits(),
            rho_bits: self.cfg.rho.to_bits(),
            delta_bits: self.cfg.delta.to_bits(),
        }
    }

    /// The single-agent table of `agent` pursuing `goal`, with the partner
    /// frozen where it stands in `s`.
    pub fn level0_table(&self, agent: AgentId, goal: PhysicalGoal, s: &WorldState) -> Arc<RelaxedTable> {
        let o = goal.object.0 as usize;
        let walls = s.objects.iter().enumerate().filter(|&(i, _)| i != o).map(|(_, &c)| c).collect();
        let terms = vec![RelaxedTerm { landmark: goal.landmark, weight_bits: 1f64.to_bits(), actor_blocks: false }];
        let key = self.key(walls, Some(s.agent(agent.other())), terms, 1.0, 0.0, self.table_backups());
        self.table(&key)
    }

    /// Level-0 action values at `s`.
    pub fn level0_q(&self, agent: AgentId, goal: PhysicalGoal, s: &WorldState) -> QRow {
        let t = self.level0_table(agent, goal, s);
        t.q_row(&self.grid, s.agent(agent), s.object(goal.object))
    }

    /// Heuristic value of a pure reward form for `agent` at `s`: stay forever,
    /// plus the best improvement available by working one object alone.
    fn form_heuristic(
        &self,
        agent: AgentId,
        form: &LinearReward,
        s: &WorldState,
        channel_at: &dyn Fn(Channel) -> f64,
    ) -> f64 {
        let g = self.cfg.gamma;
        let k = agent.index();
        let p = agent.other().index();
        let stay_cost = -(form.cost[k] + form.cost[p]) * action_cost(Action::Stay);
        let base: f64 = form.terms.iter().map(|&(c, w)| w * channel_at(c)).sum::<f64>() - stay_cost;
        let baseline = base / (1.0 - g);
        let mut gain: f64 = 0.0;
        let mut objects: ArrayVec<u8, 3> = ArrayVec::new();
        for (c, _) in &form.terms {
            if !objects.contains(&c.goal.object.0) {
                objects.push(c.goal.object.0);
            }
        }
        for o in objects {
            let terms: Vec<RelaxedTerm> = form
                .terms
                .iter()
                .filter(|(c, _)| c.goal.object.0 == o)
                .map(|&(c, w)| RelaxedTerm {
                    landmark: c.goal.landmark,
                    weight_bits: w.to_bits(),
                    actor_blocks: c.owner != agent,
                })
                .collect();
            let walls = s.objects.iter().enumerate().filter(|&(i, _)| i != o as usize).map(|(_, &c)| c).collect();
            let key = self.key(
                walls,
                None,
                terms,
                -form.cost[k],
                -form.cost[p] * action_cost(Action::Stay),
                Backups::Converge,
            );
            let t = self.table(&key);
            let (a, q) = (s.agent(agent), s.objects[o as usize]);
            gain = gain.max(t.value(&self.grid, a, q) - t.stay_value(&self.grid, a, q));
        }
        baseline + gain
    }
}

/// Running record of every distribution the planner hands out.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Audit {
    pub policies: u64,
    pub max_policy_error: f64,
    pub beliefs: u64,
    pub max_belief_error: f64,
    pub non_finite: u64,
    pub unconverged_solves: u64,
    pub max_residual: f64,
}

impl Audit {
    pub fn policy(&mut self, p: &[f64]) {
        self.policies += 1;
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            self.non_finite += 1;
        }
        self.max_policy_error = self.max_policy_error.max((p.iter().sum::<f64>() - 1.0).abs());
    }

    pub fn belief(&mut self, w: &[f64]) {
        self.beliefs += 1;
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            self.non_finite += 1;
        }
        self.max_belief_error = self.max_belief_error.max((w.iter().sum::<f64>() - 1.0).abs());
    }

    pub fn merge(&mut self, o: &Audit) {
        self.policies += o.policies;
        self.beliefs += o.beliefs;
        self.non_finite += o.non_finite;
        self.unconverged_solves += o.unconverged_solves;
        self.max_policy_error = self.max_policy_error.max(o.max_policy_error);
        self.max_belief_error = self.max_belief_error.max(o.max_belief_error);
        self.max_residual = self.max_residual.max(o.max_residual);
    }
}

/// Value iteration result for one social mind over one envelope.
#[derive(Debug)]
pub struct Solution {
    pub envelope: Rc<Envelope>,
    /// Own action values at interior states, expected over partner actions
    /// and hypotheses.
    pub q: Vec<QRow>,
    /// Values used for the final backup, one per envelope state.
    pub v_prev: Vec<f64>,
    pub sweeps: u32,
    pub residual: f64,
    pub converged: bool,
}

impl Solution {
    pub fn q_row(&self, s: &WorldState) -> Option<QRow> {
        self.envelope.index_of(s).filter(|&i| i < self.q.len()).map(|i| self.q[i])
    }
}

type SolveKey = (MindKey, WorldState);

/// Single-threaded solve context. Caches envelopes, solutions and partner
/// policies; call [`Session::clear`] between rollout steps.
pub struct Session<'p> {
    planner: &'p Planner,
    envelopes: RefCell<HashMap<WorldState, Rc<Envelope>>>,
    solves: RefCell<HashMap<SolveKey, Rc<Solution>>>,
    policies: RefCell<HashMap<SolveKey, Rc<Vec<QRow>>>>,
    heuristics: RefCell<HashMap<(AgentId, (Vec<(Channel, u64)>, [u64; 2]), WorldState), Rc<Vec<f64>>>>,
    audit: RefCell<Audit>,
}

impl<'p> Session<'p> {
    pub fn planner(&self) -> &'p Planner {
        self.planner
    }

    pub fn grid(&self) -> &'p Grid {
        &self.planner.grid
    }

    pub fn config(&self) -> &'p SolveConfig {
        &self.planner.cfg
    }

    pub fn audit(&self) -> Audit {
        self.audit.borrow().clone()
    }

    pub fn audit_belief(&self, w: &[f64]) {
        self.audit.borrow_mut().belief(w);
    }

    pub fn clear(&self) {
        self.envelopes.borrow_mut().clear();
        self.solves.borrow_mut().clear();
        self.policies.borrow_mut().clear();
        self.heuristics.borrow_mut().clear();
    }

    pub fn envelope(&self, root: &WorldState) -> Result<Rc<Envelope>> {
        if let Some(e) = self.envelopes.borrow().get(root) {
            return Ok(e.clone());
        }
        let radius = match self.config().lookahead {
            Lookahead::Exhaustive => None,
            Lookahead::Envelope { radius } => Some(radius as u32),
        };
        let e = Rc::new(Envelope::build(self.grid(), root, radius, EXHAUSTIVE_LIMIT)?);
        self.envelopes.borrow_mut().insert(root.clone(), e.clone());
        Ok(e)
    }

    /// Own action values of `mind` at `state`.
    pub fn action_values(&self, mind: &Mind, state: &WorldState) -> Result<QRow> {
        if mind.is_plain() {
            return Ok(self.planner.level0_q(mind.agent, mind.goal, state));
        }
        Ok(self.solve(mind, state)?.q[0])
    }

    /// The mind's greedy action and the values behind it.
    pub fn decide(&self, mind: &Mind, state: &WorldState) -> Result<(Action, QRow)> {
        let q = self.action_values(mind, state)?;
        Ok((argmax_action(&q), q))
    }

    /// Softmax model of `mind` at `state`, as seen by an observer.
    pub fn policy(&self, mind: &Mind, state: &WorldState) -> Result<QRow> {
        Ok(self.interior_policies(mind, state)?[0])
    }

    pub fn value(&self, mind: &Mind, state: &WorldState) -> Result<f64> {
        Ok(self.action_values(mind, state)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Expected action value of a fixed joint action at `state` for a social
    /// mind, averaged over hypotheses: `R + gamma * V(s')`.
    pub fn q_value(&self, mind: &Mind, state: &WorldState, joint: JointAction) -> Result<f64> {
        let sol = self.solve(mind, state)?;
        let env = &sol.envelope;
        let j = joint[0].index() * N_ACTIONS + joint[1].index();
        let next = env.succ[0][j] as usize;
        let n = self.config().n_exchange;
        let mut r = 0.0;
        for hr in hypothesis_rewards(mind, n) {
            let f = hr.collapsed();
            r += hr.weight * f.eval(|c| env.channel(self.grid(), self.config(), c)[next], joint);
        }
        Ok(r + self.config().gamma * sol.v_prev[next])
    }

    /// Softmax policies of `mind` at every interior state of `root`'s envelope.
    fn interior_policies(&self, mind: &Mind, root: &WorldState) -> Result<Rc<Vec<QRow>>> {
        let key = (mind.key(), root.clone());
        if let Some(p) = self.policies.borrow().get(&key) {
            return Ok(p.clone());
        }
        let env = self.envelope(root)?;
        let tau = self.config().tau;
        let rows: Vec<QRow> = if mind.is_plain() {
            env.states[..env.interior]
                .iter()
                .map(|s| softmax_row(&self.planner.level0_q(mind.agent, mind.goal, s), tau))
                .collect()
        } else {
            let sol = self.solve(mind, root)?;
            sol.q.iter().map(|q| softmax_row(q, tau)).collect()
        };
        {
            let mut a = self.audit.borrow_mut();
            for r in &rows {
                a.policy(r);
            }
        }
        let rows = Rc::new(rows);
        self.policies.borrow_mut().insert(key, rows.clone());
        Ok(rows)
    }

    fn heuristic(&self, agent: AgentId, form: &LinearReward, env: &Envelope) -> Rc<Vec<f64>> {
        let key = (agent, form.key(), env.states[0].clone());
        if let Some(h) = self.heuristics.borrow().get(&key) {
            return h.clone();
        }
        let chans: Vec<(Channel, Rc<Vec<f64>>)> =
            form.channels().map(|c| (c, env.channel(self.grid(), self.config(), c))).collect();
        let h: Vec<f64> = (0..env.len())
            .map(|i| {
                let at = |c: Channel| chans.iter().find(|e| e.0 == c).map_or(0.0, |e| e.1[i]);
                self.planner.form_heuristic(agent, form, &env.states[i], &at)
            })
            .collect();
        let h = Rc::new(h);
        self.heuristics.borrow_mut().insert(key, h.clone());
        h
    }

    /// Value iteration for a social mind rooted at `root`.
    pub fn solve(&self, mind: &Mind, root: &WorldState) -> Result<Rc<Solution>> {
        debug_assert!(!mind.is_plain());
        let key = (mind.key(), root.clone());
        if let Some(s) = self.solves.borrow().get(&key) {
            return Ok(s.clone());
        }
        let env = self.envelope(root)?;
        let cfg = *self.config();
        let grid = self.grid();
        let yellow = mind.agent == AgentId::YELLOW;
        let ni = env.interior;

        // Partner models and rewards, one per hypothesis.
        let hrs = hypothesis_rewards(mind, cfg.n_exchange);
        let mut psis = Vec::with_capacity(hrs.len());
        let mut rewards = Vec::with_capacity(hrs.len());
        for hr in &hrs {
            psis.push(self.interior_policies(&mind.partner(&hr.hypothesis), root)?);
            rewards.push(hr.collapsed());
        }
        let mut chans: Vec<Channel> = rewards.iter().flat_map(|r| r.channels()).collect();
        chans.sort();
        chans.dedup();
        let chan_vals: Vec<Rc<Vec<f64>>> = chans.iter().map(|&c| env.channel(grid, &cfg, c)).collect();
        let chan_at = |c: Channel, i: usize| chan_vals[chans.binary_search(&c).expect("channel")][i];

        // Expected immediate reward per (state, own action) and the partner's
        // action mixture per state.
        let mut er = vec![[0.0; N_ACTIONS]; ni];
        let mut mix = vec![[0.0; N_ACTIONS]; ni];
        for s in 0..ni {
            for (h, hr) in hrs.iter().enumerate() {
                let psi = &psis[h][s];
                for aj in 0..N_ACTIONS {
                    mix[s][aj] += hr.weight * psi[aj];
                }
                for ai in 0..N_ACTIONS {
                    let mut acc = 0.0;
                    for aj in 0..N_ACTIONS {
                        let j = joint_index(yellow, ai, aj);
                        let next = env.succ[s][j] as usize;
                        let joint = [Action::from_index(j / N_ACTIONS), Action::from_index(j % N_ACTIONS)];
                        acc += psi[aj] * rewards[h].eval(|c| chan_at(c, next), joint);
                    }
                    er[s][ai] += hr.weight * acc;
                }
            }
        }

        let mut v: Vec<f64> = match cfg.lookahead {
            Lookahead::Exhaustive => vec![0.0; env.len()],
            Lookahead::Envelope { .. } => {
                let mut v = vec![0.0; env.len()];
                for (w, form) in expected_forms(mind, cfg.n_exchange) {
                    let h = self.heuristic(mind.agent, &form, &env);
                    for (x, hx) in v.iter_mut().zip(h.iter()) {
                        *x += w * hx;
                    }
                }
                v
            }
        };
        let backup = |v: &[f64], s: usize| -> QRow {
            let mut q = er[s];
            for (ai, qa) in q.iter_mut().enumerate() {
                let mut fut = 0.0;
                for aj in 0..N_ACTIONS {
                    fut += mix[s][aj] * v[env.succ[s][joint_index(yellow, ai, aj)] as usize];
                }
                *qa += cfg.gamma * fut;
            }
            q
        };
        // Exhaustive: finite-horizon backups from zero. Envelope: a lookahead of
        // uniform depth `radius`, so every leaf sits equally far from the root
        // and a constant heuristic error cannot favor one action over another.
        let (exhaustive, limit) = match cfg.lookahead {
            Lookahead::Exhaustive => (true, cfg.horizon.saturating_sub(1)),
            Lookahead::Envelope { radius } => (false, cfg.horizon.min(radius.max(1) as u32) - 1),
        };
        let mut sweeps = 0;
        let mut residual = 0.0;
        let mut next = v.clone();
        for _ in 0..limit {
            let mut delta: f64 = 0.0;
            for s in 0..ni {
                let best = backup(&v, s).into_iter().fold(f64::NEG_INFINITY, f64::max);
                delta = delta.max((best - v[s]).abs());
                next[s] = best;
            }
            std::mem::swap(&mut v, &mut next);
            sweeps += 1;
            residual = delta;
        }
        let q: Vec<QRow> = (0..ni).map(|s| backup(&v, s)).collect();
        let converged = !exhaustive || residual < cfg.epsilon || cfg.horizon <= 1;
        if !converged {
            let mut a = self.audit.borrow_mut();
            a.unconverged_solves += 1;
            a.max_residual = a.max_residual.max(residual);
        }
        let sol = Rc::new(Solution { envelope: env, q, v_prev: v, sweeps, residual, converged });
        self.solves.borrow_mut().insert(key, sol.clone());
        Ok(sol)
    }
}

/// Likelihood model for a belief held by `observer` about its partner: the
/// partner one level down, with the nested beliefs `observer` attributes to it.
pub struct MindModel<'s, 'p> {
    pub session: &'s Session<'p>,
    /// The observer, whose `beliefs[0]` is being updated.
    pub observer: Mind,
}

impl PartnerModel for MindModel<'_, '_> {
    fn partner(&self) -> AgentId {
        self.observer.agent.other()
    }

    fn likelihood(&mut self, hyp: &Hypothesis, obs: &Observation) -> f64 {
        let partner = self.observer.partner(hyp);
        let a = obs.joint[partner.agent.index()];
        match self.session.policy(&partner, &obs.prev) {
            Ok(p) => p[a.index()],
            Err(e) => {
                log::error!("partner model failed: {e}");
                0.0
            }
        }
    }
}
