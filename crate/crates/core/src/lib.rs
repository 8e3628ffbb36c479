//! Two-agent gridworld with recursive social planning and goal inference.
//!
//! Agents push objects onto landmarks. Each holds a physical goal and a
//! social goal toward the other (none, cooperation, conflict, competition,
//! coercion, exchange). A level-`l` agent models its partner at level
//! `l - 1`, infers the partner's goals from observed actions, and plans
//! against a softmax model of the partner's behavior.

pub mod baselines;
pub mod config;
pub mod error;
pub mod gridworld;
pub mod harness;
pub mod inference;
pub mod planner;
pub mod rollout;
pub mod scenarios;
pub mod social;

pub use config::{Lookahead, SolveConfig};
pub use error::{Error, Result};
pub use gridworld::{
    action_cost, geodesic_distance, goal_distance, physical_reward, transition, Action, AgentId, Cell, Grid,
    JointAction, LandmarkId, ObjectId, PhysicalGoal, WorldState,
};
pub use inference::{joint_update, update_physical, update_social, Belief, Hypothesis, Observation};
pub use planner::{argmax_action, softmax_policy, Mind, Planner, Session};
pub use rollout::{rollout, Episode, Trace};
pub use scenarios::{canonical_layout, enumerate_scenarios, load_scenario, Layout, ScenarioSpec};
pub use social::{compose_reward, social_term, SocialGoal, SocialTermInput};
