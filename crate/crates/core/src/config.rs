use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How far the planner looks before falling back on a heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lookahead {
    /// Every state reachable from the root, zero-initialized, exactly
    /// `horizon` backups. Only feasible on small worlds.
    Exhaustive,
    /// Joint states within `radius` joint steps of the root; the boundary is
    /// valued by relaxed single-agent tables.
    Envelope { radius: u8 },
}

impl Default for Lookahead {
    fn default() -> Self {
        Lookahead::Envelope { radius: 2 }
    }
}

fn d_gamma() -> f64 {
    0.99
}
fn d_tau() -> f64 {
    0.5
}
fn d_rho() -> f64 {
    1.25
}
fn d_delta() -> f64 {
    5.0
}
fn d_n() -> f64 {
    0.2
}
fn d_horizon() -> u32 {
    20
}
fn d_epsilon() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    #[serde(default = "d_gamma")]
    pub gamma: f64,
    #[serde(default = "d_tau")]
    pub tau: f64,
    #[serde(default = "d_rho")]
    pub rho: f64,
    #[serde(default = "d_delta")]
    pub delta: f64,
    #[serde(default = "d_n")]
    pub n_exchange: f64,
    /// Bellman backups per solve.
    #[serde(default = "d_horizon")]
    pub horizon: u32,
    #[serde(default = "d_epsilon")]
    pub epsilon: f64,
    #[serde(skip)]
    pub lookahead: Lookahead,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            gamma: d_gamma(),
            tau: d_tau(),
            rho: d_rho(),
            delta: d_delta(),
            n_exchange: d_n(),
            horizon: d_horizon(),
            epsilon: d_epsilon(),
            lookahead: Lookahead::default(),
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad("gamma must lie in (0, 1)");
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad("tau must be positive");
        }
        if !(self.rho.is_finite() && self.delta > 0.0 && self.delta.is_finite()) {
            return bad("rho must be finite and delta positive");
        }
        if !(self.n_exchange > 0.0 && self.n_exchange.is_finite()) {
            return bad("n_exchange must be positive");
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    /// Bit pattern of every field, for cache keys.
    pub fn key(&self) -> [u64; 8] {
        let la = match self.lookahead {
            Lookahead::Exhaustive => u64::MAX,
            Lookahead::Envelope { radius } => radius as u64,
        };
        [
            self.gamma.to_bits(),
            self.tau.to_bits(),
            self.rho.to_bits(),
            self.delta.to_bits(),
            self.n_exchange.to_bits(),
            self.horizon as u64,
            self.epsilon.to_bits(),
            la,
        ]
    }
}
