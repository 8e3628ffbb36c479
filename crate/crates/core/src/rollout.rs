//! Episodes: two planning agents act together while yellow watches red.
//!
//! Each agent carries a chain of nested beliefs as long as its level. After
//! every joint step each link is updated with the partner model one level
//! below it, using the chain as it stood before the step. The observer is
//! yellow's chain at level two or more.

use serde::{Deserialize, Serialize};

use crate::baselines::InversePlanner;
use crate::error::{Error, Result};
use crate::gridworld::{
    action_cost, goal_distance, physical_reward, transition, Action, AgentId, Cell, JointAction, LandmarkId,
    PhysicalGoal, WorldState,
};
use crate::inference::{joint_update, Belief, Hypothesis, Observation};
use crate::planner::{degraded_mass, hypothesis_rewards, Audit, LinearReward, Mind, MindModel, Planner, Session};
use crate::scenarios::{Layout, ScenarioSpec, AGENT_NAMES};
use crate::social::{compose_reward, SocialGoal};

pub const MODEL_SOCIAL: &str = "social_mdp";
pub const MODEL_BASELINE: &str = "inverse_planning";
/// Reserved; needs a learned model that is not part of this crate.
pub const MODEL_CUE: &str = "cue_based";
pub const MODELS: [&str; 2] = [MODEL_SOCIAL, MODEL_BASELINE];

/// Lowest level at which the observer reasons about red's social goal.
pub const OBSERVER_LEVEL: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    pub agents: [Cell; 2],
    pub objects: Vec<Cell>,
}

impl From<&WorldState> for StateRecord {
    fn from(s: &WorldState) -> Self {
        StateRecord { agents: s.agents, objects: s.objects.to_vec() }
    }
}

impl StateRecord {
    pub fn to_state(&self) -> WorldState {
        WorldState::new(self.agents, &self.objects)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentReward {
    pub physical: f64,
    pub social: f64,
    pub cost: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub t: usize,
    /// State before the joint action.
    pub state: StateRecord,
    pub joint: JointAction,
    pub rewards: [AgentReward; 2],
    /// Belief mass on which each agent's social term was undefined.
    pub degraded: [f64; 2],
    /// Observer's posterior after this step, per landmark.
    pub posterior_physical: Vec<f64>,
    /// Per social goal, in the order of [`SocialGoal::ALL`].
    pub posterior_social: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    BothGoalsSatisfied,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::MaxSteps => "max_steps",
            Termination::BothGoalsSatisfied => "both_goals_satisfied",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub id: String,
    pub object: String,
    pub landmark: String,
    pub social: SocialGoal,
    pub level: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario: String,
    pub model: String,
    pub landmarks: Vec<String>,
    pub socials: Vec<SocialGoal>,
    pub agents: Vec<AgentRecord>,
    pub steps: Vec<Step>,
    pub final_state: StateRecord,
    pub terminated_reason: Termination,
    pub steps_to_goal: [Option<usize>; 2],
    pub warnings: Vec<String>,
    pub audit: Audit,
}

/// Both traces of one episode: the social observer and the baseline.
#[derive(Debug, Clone)]
pub struct Episode {
    pub social: Trace,
    pub baseline: Trace,
}

impl Episode {
    pub fn trace(&self, model: &str) -> Option<&Trace> {
        match model {
            MODEL_SOCIAL => Some(&self.social),
            MODEL_BASELINE => Some(&self.baseline),
            _ => None,
        }
    }
}

/// Hypotheses about `target` held by a modeler one level above it. Level-0
/// targets have no social goal.
pub fn hypotheses(layout: &Layout, target: AgentId, target_level: u8) -> Result<Belief> {
    let socials: &[SocialGoal] = if target_level == 0 { &[SocialGoal::None] } else { &SocialGoal::ALL };
    let mut hyps = Vec::new();
    for l in 0..layout.grid.landmarks().len() {
        for &social in socials {
            let object = layout.bound_object(target, social);
            hyps.push(Hypothesis { goal: PhysicalGoal { object, landmark: LandmarkId(l as u8) }, social });
        }
    }
    Belief::uniform(hyps)
}

/// Uniform nested beliefs for a level-`level` agent.
pub fn initial_chain(layout: &Layout, holder: AgentId, level: u8) -> Result<Vec<Belief>> {
    (0..level)
        .map(|i| {
            let target = if i % 2 == 0 { holder.other() } else { holder };
            hypotheses(layout, target, level - i - 1)
        })
        .collect()
}

/// Update every link of a belief chain after one observed step.
pub fn update_chain(
    session: &Session,
    holder: AgentId,
    chain: &[Belief],
    obs: &Observation,
    warnings: &mut Vec<String>,
) -> Result<Vec<Belief>> {
    let l = chain.len();
    (0..l)
        .map(|i| {
            // Only the level and the nested beliefs shape the partner model.
            let observer = Mind {
                agent: if i % 2 == 0 { holder } else { holder.other() },
                level: (l - i) as u8,
                social: SocialGoal::None,
                goal: PhysicalGoal::new(0, 0),
                beliefs: chain[i..].to_vec(),
            };
            let mut model = MindModel { session, observer };
            let u = joint_update(session.grid(), &chain[i], obs, &mut model)?;
            if u.reset {
                warnings.push(format!(
                    "t={}: {} belief at depth {i} lost all mass and was reset",
                    chain[i].timestep(),
                    AGENT_NAMES[holder.index()]
                ));
            }
            session.audit_belief(&u.belief.weights());
            Ok(u.belief)
        })
        .collect()
}

/// Reward actually received by `mind` for `joint` landing in `next`.
pub fn agent_reward(session: &Session, mind: &Mind, next: &WorldState, joint: JointAction) -> AgentReward {
    let cfg = session.config();
    let grid = session.grid();
    let chan = |c: crate::planner::Channel| physical_reward(grid, next, c.owner, c.goal, cfg.rho, cfg.delta);
    let physical = physical_reward(grid, next, mind.agent, mind.goal, cfg.rho, cfg.delta);
    let cost = action_cost(joint[mind.agent.index()]);
    let social = if mind.is_plain() {
        0.0
    } else {
        let selfish = LinearReward::selfish(mind.agent, mind.goal);
        hypothesis_rewards(mind, cfg.n_exchange)
            .iter()
            .map(|hr| hr.weight * (hr.collapsed() - selfish.clone()).eval(chan, joint))
            .sum()
    };
    AgentReward { physical, social, cost, total: compose_reward(physical, social, cost) }
}

pub fn goal_satisfied(spec: &ScenarioSpec, s: &WorldState, agent: AgentId) -> bool {
    goal_distance(spec.grid(), s, agent, spec.agent(agent).physical) == Some(0)
}

/// First step count at which each agent's goal holds, from a trace.
pub fn steps_to_goal(spec: &ScenarioSpec, trace: &Trace) -> [Option<usize>; 2] {
    let mut states: Vec<WorldState> = trace.steps.iter().map(|s| s.state.to_state()).collect();
    states.push(trace.final_state.to_state());
    AgentId::BOTH.map(|a| states.iter().position(|s| goal_satisfied(spec, s, a)))
}

fn check_planner(planner: &Planner, spec: &ScenarioSpec) -> Result<()> {
    spec.validate()?;
    if planner.grid() != spec.grid() {
        return Err(Error::Invalid(format!("{}: planner grid differs from the scenario", spec.id)));
    }
    let (a, b) = (planner.config(), &spec.config);
    if (a.gamma, a.tau, a.rho, a.delta, a.n_exchange, a.horizon, a.epsilon)
        != (b.gamma, b.tau, b.rho, b.delta, b.n_exchange, b.horizon, b.epsilon)
    {
        return Err(Error::Invalid(format!("{}: planner config differs from the scenario", spec.id)));
    }
    Ok(())
}

fn landmark_marginal(b: &Belief, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (h, w) in b.iter() {
        out[h.goal.landmark.0 as usize] += w;
    }
    out
}

fn social_marginal(b: &Belief) -> Vec<f64> {
    let mut out = vec![0.0; SocialGoal::ALL.len()];
    for (h, w) in b.iter() {
        out[h.social.index()] += w;
    }
    out
}

/// Run one scenario, recording both the social observer and the baseline.
pub fn rollout(planner: &Planner, spec: &ScenarioSpec) -> Result<Episode> {
    episode(planner, spec, None)
}

/// Re-run inference over fixed joint actions, e.g. those of an earlier trace.
pub fn replay(planner: &Planner, spec: &ScenarioSpec, script: &[JointAction]) -> Result<Episode> {
    episode(planner, spec, Some(script))
}

fn episode(planner: &Planner, spec: &ScenarioSpec, script: Option<&[JointAction]>) -> Result<Episode> {
    check_planner(planner, spec)?;
    let session = planner.session();
    let grid = spec.grid();
    let layout = &spec.layout;
    let n_lm = grid.landmarks().len();
    let levels = AgentId::BOTH.map(|a| spec.agent(a).level);
    let mut chains =
        [initial_chain(layout, AgentId::YELLOW, levels[0])?, initial_chain(layout, AgentId::RED, levels[1])?];
    let mut observer_chain =
        if levels[0] >= OBSERVER_LEVEL { None } else { Some(initial_chain(layout, AgentId::YELLOW, OBSERVER_LEVEL)?) };
    let baseline_goals: Vec<PhysicalGoal> = (0..n_lm)
        .map(|l| PhysicalGoal {
            object: layout.bound_object(AgentId::RED, SocialGoal::None),
            landmark: LandmarkId(l as u8),
        })
        .collect();
    let mut ip = InversePlanner::new(planner, AgentId::RED, spec.agent(AgentId::YELLOW).physical, baseline_goals)?;

    let mut state = layout.initial.clone();
    let mut steps = Vec::new();
    let mut base_steps = Vec::new();
    let mut warnings = Vec::new();
    let mut base_warnings = Vec::new();
    let mut terminated = Termination::MaxSteps;
    let limit = script.map_or(spec.max_steps as usize, <[JointAction]>::len);
    for t in 0..limit {
        let minds = AgentId::BOTH.map(|a| {
            let s = spec.agent(a);
            Mind { agent: a, level: s.level, social: s.social, goal: s.physical, beliefs: chains[a.index()].clone() }
        });
        let joint = match script {
            Some(js) => js[t],
            None => [session.decide(&minds[0], &state)?.0, session.decide(&minds[1], &state)?.0],
        };
        if joint == [Action::Stay, Action::Stay] && AgentId::BOTH.iter().all(|&a| goal_satisfied(spec, &state, a)) {
            terminated = Termination::BothGoalsSatisfied;
            break;
        }
        let next = transition(grid, &state, joint);
        let obs = Observation { prev: state.clone(), joint, next: next.clone() };
        let rewards = [0, 1].map(|k| agent_reward(&session, &minds[k], &next, joint));
        let degraded = [0, 1].map(|k| degraded_mass(&minds[k], spec.config.n_exchange));

        let new_chains = [
            update_chain(&session, AgentId::YELLOW, &chains[0], &obs, &mut warnings)?,
            update_chain(&session, AgentId::RED, &chains[1], &obs, &mut warnings)?,
        ];
        if let Some(c) = &observer_chain {
            observer_chain = Some(update_chain(&session, AgentId::YELLOW, c, &obs, &mut warnings)?);
        }
        chains = new_chains;
        let view = observer_chain.as_ref().unwrap_or(&chains[0]);
        steps.push(Step {
            t,
            state: (&state).into(),
            joint,
            rewards,
            degraded,
            posterior_physical: landmark_marginal(&view[0], n_lm),
            posterior_social: social_marginal(&view[0]),
        });

        ip.observe(&obs)?;
        let resets = ip.resets();
        let est = ip.estimate();
        if ip.resets() > resets {
            base_warnings.push(format!("t={t}: baseline posterior lost all mass and was reset"));
        }
        session.audit_belief(&est.posterior_physical);
        session.audit_belief(&est.posterior_social);
        base_steps.push(Step {
            t,
            state: (&state).into(),
            joint,
            rewards,
            degraded,
            posterior_physical: est.posterior_physical,
            posterior_social: est.posterior_social.to_vec(),
        });

        session.clear();
        state = next;
    }

    let agents: Vec<AgentRecord> = AgentId::BOTH
        .iter()
        .map(|&a| {
            let s = spec.agent(a);
            AgentRecord {
                id: AGENT_NAMES[a.index()].into(),
                object: layout.object_names[s.physical.object.0 as usize].clone(),
                landmark: layout.landmark_names[s.physical.landmark.0 as usize].clone(),
                social: s.social,
                level: s.level,
            }
        })
        .collect();
    let audit = session.audit();
    let mut social = Trace {
        scenario: spec.id.clone(),
        model: MODEL_SOCIAL.into(),
        landmarks: layout.landmark_names.clone(),
        socials: SocialGoal::ALL.to_vec(),
        agents,
        steps,
        final_state: (&state).into(),
        terminated_reason: terminated,
        steps_to_goal: [None, None],
        warnings,
        audit: audit.clone(),
    };
    social.steps_to_goal = steps_to_goal(spec, &social);
    let baseline = Trace { model: MODEL_BASELINE.into(), steps: base_steps, warnings: base_warnings, ..social.clone() };
    Ok(Episode { social, baseline })
}

/// Both agents acting on their level-0 plans, with the same stopping rule as
/// [`rollout`]. Returns the visited states and joint actions.
pub fn plain_rollout(planner: &Planner, spec: &ScenarioSpec) -> Result<Vec<(WorldState, JointAction)>> {
    check_planner(planner, spec)?;
    let mut state = spec.initial().clone();
    let mut out = Vec::new();
    for _ in 0..spec.max_steps {
        let joint =
            AgentId::BOTH.map(|a| crate::planner::argmax_action(&planner.level0_q(a, spec.agent(a).physical, &state)));
        if joint == [Action::Stay, Action::Stay] && AgentId::BOTH.iter().all(|&a| goal_satisfied(spec, &state, a)) {
            break;
        }
        let next = transition(spec.grid(), &state, joint);
        out.push((state, joint));
        state = next;
    }
    Ok(out)
}
