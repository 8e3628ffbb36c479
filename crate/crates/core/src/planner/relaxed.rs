//! Dense single-agent tables over (actor cell, object cell).
//!
//! One object is movable; every other object is an immovable wall and the
//! partner, if present, is frozen in place. These back the level-0 model and
//! the boundary heuristic of the envelope planner.

use arrayvec::ArrayVec;

use crate::gridworld::{
    action_cost, geodesic_distance, reward_from_distance, Action, Cell, Dir, Grid, LandmarkId, MAX_OBJECTS, N_ACTIONS,
};

/// How values are initialized and how many backups are run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backups {
    /// Zero start, exactly this many backups.
    Exactly(u32),
    /// Start from the value of staying forever, iterate to a fixed point.
    Converge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelaxedTerm {
    pub landmark: LandmarkId,
    pub weight_bits: u64,
    /// The actor's own body blocks this term's path (it belongs to the partner).
    pub actor_blocks: bool,
}

impl RelaxedTerm {
    pub fn weight(&self) -> f64 {
        f64::from_bits(self.weight_bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelaxedKey {
    pub walls: ArrayVec<Cell, MAX_OBJECTS>,
    pub partner: Option<Cell>,
    pub terms: Vec<RelaxedTerm>,
    pub own_cost_bits: u64,
    /// Constant per-step charge (the partner staying put).
    pub extra_cost_bits: u64,
    pub backups: Backups,
    pub gamma_bits: u64,
    pub rho_bits: u64,
    pub delta_bits: u64,
}

/// Tables cover every (actor, object) placement consistent with the key.
#[derive(Debug)]
pub struct RelaxedTable {
    n: usize,
    walls: ArrayVec<Cell, MAX_OBJECTS>,
    partner: Option<Cell>,
    own_cost: f64,
    extra_cost: f64,
    gamma: f64,
    /// Reward indexed by object cell, or by (actor, object) when the actor
    /// blocks some term.
    reward: Vec<f64>,
    per_actor: bool,
    /// Values used for backups: after `Exactly(h)` this holds the value of
    /// `h - 1` backups, so `q` reproduces the h-th.
    v: Vec<f64>,
    pub sweeps: u32,
    pub residual: f64,
}

/// Cap on backups for `Converge` tables.
pub const RELAX_SWEEPS: u32 = 5000;
const RELAX_TOL: f64 = 1e-11;

impl RelaxedTable {
    pub fn build(grid: &Grid, key: &RelaxedKey) -> RelaxedTable {
        let n = grid.n_cells();
        let gamma = f64::from_bits(key.gamma_bits);
        let rho = f64::from_bits(key.rho_bits);
        let delta = f64::from_bits(key.delta_bits);
        let per_actor = key.terms.iter().any(|t| t.actor_blocks);
        let blocked_static = |c: Cell| key.walls.contains(&c) || key.partner == Some(c);
        let term_reward = |p: Cell, actor: Option<Cell>| -> f64 {
            key.terms
                .iter()
                .map(|t| {
                    let blocker = if t.actor_blocks { actor } else { None };
                    let d = geodesic_distance(grid, p, grid.landmark(t.landmark), |c| {
                        blocked_static(c) || Some(c) == blocker
                    });
                    t.weight() * reward_from_distance(d, rho, delta)
                })
                .sum()
        };
        let reward = if per_actor {
            let mut r = vec![0.0; n * n];
            for a in 0..n {
                for p in 0..n {
                    if a != p {
                        r[a * n + p] = term_reward(grid.cell(p), Some(grid.cell(a)));
                    }
                }
            }
            r
        } else {
            (0..n).map(|p| term_reward(grid.cell(p), None)).collect()
        };
        let mut t = RelaxedTable {
            n,
            walls: key.walls.clone(),
            partner: key.partner,
            own_cost: f64::from_bits(key.own_cost_bits),
            extra_cost: f64::from_bits(key.extra_cost_bits),
            gamma,
            reward,
            per_actor,
            v: vec![0.0; n * n],
            sweeps: 0,
            residual: 0.0,
        };
        t.iterate(grid, key.backups);
        t
    }

    fn valid(&self, grid: &Grid, a: Cell, p: Cell) -> bool {
        a != p && !self.blocked(a) && !self.blocked(p) && grid.contains(a) && grid.contains(p)
    }

    fn blocked(&self, c: Cell) -> bool {
        self.walls.contains(&c) || self.partner == Some(c)
    }

    /// One step of the relaxed dynamics.
    pub fn step(&self, grid: &Grid, a: Cell, p: Cell, act: Action) -> (Cell, Cell) {
        match act {
            Action::Stay => (a, p),
            Action::Push => {
                let hit = Dir::PUSH_ORDER.iter().find_map(|&d| {
                    let c = grid.step(a, d)?;
                    (c == p || self.walls.contains(&c)).then_some((d, c))
                });
                match hit {
                    Some((d, c)) if c == p => match grid.step(p, d) {
                        Some(dest) if !self.blocked(dest) => (p, dest),
                        _ => (a, p),
                    },
                    _ => (a, p),
                }
            }
            _ => match grid.step(a, act.dir().expect("move")) {
                Some(t) if t != p && !self.blocked(t) => (t, p),
                _ => (a, p),
            },
        }
    }

    fn idx(&self, grid: &Grid, a: Cell, p: Cell) -> usize {
        grid.index(a) * self.n + grid.index(p)
    }

    /// Weighted physical reward with the actor at `a` and the object at `p`.
    pub fn reward_at(&self, grid: &Grid, a: Cell, p: Cell) -> f64 {
        if self.per_actor {
            self.reward[self.idx(grid, a, p)]
        } else {
            self.reward[grid.index(p)]
        }
    }

    fn backup(&self, grid: &Grid, v: &[f64], a: Cell, p: Cell, act: Action) -> f64 {
        let (a2, p2) = self.step(grid, a, p, act);
        self.reward_at(grid, a2, p2) - (self.own_cost * action_cost(act) + self.extra_cost)
            + self.gamma * v[self.idx(grid, a2, p2)]
    }

    /// Value of staying put forever from (a, p).
    pub fn stay_value(&self, grid: &Grid, a: Cell, p: Cell) -> f64 {
        (self.reward_at(grid, a, p) - self.own_cost * 0.1 - self.extra_cost) / (1.0 - self.gamma)
    }

    fn iterate(&mut self, grid: &Grid, backups: Backups) {
        let states: Vec<(Cell, Cell, usize)> = grid
            .cells()
            .flat_map(|a| grid.cells().map(move |p| (a, p)))
            .filter(|&(a, p)| self.valid(grid, a, p))
            .map(|(a, p)| (a, p, self.idx(grid, a, p)))
            .collect();
        let (limit, tol) = match backups {
            Backups::Exactly(h) => (h.saturating_sub(1), None),
            Backups::Converge => {
                for &(a, p, i) in &states {
                    self.v[i] = self.stay_value(grid, a, p);
                }
                (RELAX_SWEEPS, Some(RELAX_TOL))
            }
        };
        let n2 = self.n * self.n;
        let succ: Vec<[u32; N_ACTIONS]> = states
            .iter()
            .map(|&(a, p, _)| {
                Action::ALL.map(|act| {
                    let (a2, p2) = self.step(grid, a, p, act);
                    self.idx(grid, a2, p2) as u32
                })
            })
            .collect();
        let mut rew = vec![0.0; n2];
        for &(a, p, i) in &states {
            rew[i] = self.reward_at(grid, a, p);
        }
        let step_cost = Action::ALL.map(|act| self.own_cost * action_cost(act) + self.extra_cost);
        let mut next = self.v.clone();
        for _ in 0..limit {
            let mut delta: f64 = 0.0;
            for (&(_, _, i), nx) in states.iter().zip(&succ) {
                let mut best = f64::NEG_INFINITY;
                for k in 0..N_ACTIONS {
                    let j = nx[k] as usize;
                    best = best.max(rew[j] - step_cost[k] + self.gamma * self.v[j]);
                }
                delta = delta.max((best - self.v[i]).abs());
                next[i] = best;
            }
            std::mem::swap(&mut self.v, &mut next);
            self.sweeps += 1;
            self.residual = delta;
            if tol.is_some_and(|t| delta <= t) {
                break;
            }
        }
    }

    /// Action values with the actor at `a` and the object at `p`.
    pub fn q_row(&self, grid: &Grid, a: Cell, p: Cell) -> [f64; N_ACTIONS] {
        let mut q = [0.0; N_ACTIONS];
        for (k, &act) in Action::ALL.iter().enumerate() {
            q[k] = self.backup(grid, &self.v, a, p, act);
        }
        q
    }

    pub fn value(&self, grid: &Grid, a: Cell, p: Cell) -> f64 {
        self.v[self.idx(grid, a, p)]
    }

    /// Approximate bytes held, for cache accounting.
    pub fn footprint(&self) -> usize {
        (self.reward.len() + self.v.len()) * 8
    }
}
