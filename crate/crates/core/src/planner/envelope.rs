//! Joint state sets explored from a root.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::gridworld::{physical_reward, transition, Action, Grid, WorldState, N_ACTIONS};
use crate::planner::reward::Channel;

pub const N_JOINT: usize = N_ACTIONS * N_ACTIONS;

/// States reachable from a root, in breadth-first order.
#[derive(Debug)]
pub struct Envelope {
    pub states: Vec<WorldState>,
    pub depth: Vec<u32>,
    /// `states[..interior]` have all their successors inside the envelope.
    pub interior: usize,
    /// Successor indices of interior states, by `a_yellow * 6 + a_red`.
    pub succ: Vec<[u32; N_JOINT]>,
    index: HashMap<WorldState, u32>,
    channels: RefCell<HashMap<Channel, Rc<Vec<f64>>>>,
}

impl Envelope {
    /// Breadth-first expansion to `radius` joint steps, or to closure when
    /// `radius` is `None`. Fails past `limit` states.
    pub fn build(grid: &Grid, root: &WorldState, radius: Option<u32>, limit: usize) -> Result<Envelope> {
        let mut states = vec![root.clone()];
        let mut depth = vec![0u32];
        let mut index = HashMap::from([(root.clone(), 0u32)]);
        let mut succ = Vec::new();
        let mut i = 0;
        while i < states.len() {
            if radius.is_some_and(|r| depth[i] >= r) {
                break;
            }
            let mut row = [0u32; N_JOINT];
            for (j, slot) in row.iter_mut().enumerate() {
                let joint = [Action::from_index(j / N_ACTIONS), Action::from_index(j % N_ACTIONS)];
                let next = transition(grid, &states[i], joint);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = states.len() as u32;
                        if states.len() >= limit {
                            return Err(Error::Invalid(format!("more than {limit} reachable states")));
                        }
                        index.insert(next.clone(), id);
                        states.push(next);
                        depth.push(depth[i] + 1);
                        id
                    }
                };
                *slot = id;
            }
            succ.push(row);
            i += 1;
        }
        Ok(Envelope { interior: succ.len(), states, depth, succ, index, channels: RefCell::new(HashMap::new()) })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &WorldState) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    /// Physical reward of a channel at every state, computed once.
    pub fn channel(&self, grid: &Grid, cfg: &SolveConfig, c: Channel) -> Rc<Vec<f64>> {
        if let Some(v) = self.channels.borrow().get(&c) {
            return v.clone();
        }
        let v: Rc<Vec<f64>> = Rc::new(
            self.states.iter().map(|s| physical_reward(grid, s, c.owner, c.goal, cfg.rho, cfg.delta)).collect(),
        );
        self.channels.borrow_mut().insert(c, v.clone());
        v
    }
}

/// Joint index for `own` acting `ai` while the partner acts `aj`.
pub fn joint_index(own_is_yellow: bool, ai: usize, aj: usize) -> usize {
    if own_is_yellow {
        ai * N_ACTIONS + aj
    } else {
        aj * N_ACTIONS + ai
    }
}
