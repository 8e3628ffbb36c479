//! Yellow watches red and updates a joint belief over red's landmark and
//! social goal after every step.

use socmdp::planner::MindModel;
use socmdp::rollout::hypotheses;
use socmdp::scenarios::{canonical_layout, Layout};
use socmdp::{
    argmax_action, joint_update, transition, Action, AgentId, Belief, Hypothesis, LandmarkId, Mind, Observation,
    PhysicalGoal, Planner, SocialGoal, SolveConfig,
};

fn main() -> socmdp::Result<()> {
    let layout = canonical_layout();
    let grid = layout.grid.clone();
    let planner = Planner::new(grid.clone(), SolveConfig::default())?;
    let mut belief = hypotheses(&layout, AgentId::RED, 1)?;
    let nested = hypotheses(&layout, AgentId::YELLOW, 0)?;
    // Red really is a level-1 cooperator heading for the construction site.
    let truth = Hypothesis {
        goal: PhysicalGoal {
            object: layout.bound_object(AgentId::RED, SocialGoal::Cooperation),
            landmark: LandmarkId(1),
        },
        social: SocialGoal::Cooperation,
    };
    let mut s = layout.initial.clone();
    for t in 0..8 {
        let session = planner.session();
        let observer = Mind {
            agent: AgentId::YELLOW,
            level: 2,
            social: SocialGoal::None,
            goal: PhysicalGoal::new(2, 0),
            beliefs: vec![belief.clone(), nested.clone()],
        };
        let a = argmax_action(&session.policy(&observer.partner(&truth), &s)?);
        let joint = [Action::Stay, a];
        let obs = Observation { prev: s.clone(), joint, next: transition(&grid, &s, joint) };
        let mut model = MindModel { session: &session, observer };
        belief = joint_update(&grid, &belief, &obs, &mut model)?.belief;
        print_belief(t, a, &belief, &layout);
        s = obs.next;
    }
    Ok(())
}

fn print_belief(t: usize, a: Action, b: &Belief, layout: &Layout) {
    let goals: Vec<String> = b
        .physical_marginal()
        .iter()
        .map(|(g, p)| {
            format!(
                "{}->{} {p:.2}",
                layout.object_names[g.object.0 as usize], layout.landmark_names[g.landmark.0 as usize]
            )
        })
        .collect();
    let socials: Vec<String> = b.social_marginal().iter().map(|(x, p)| format!("{x} {p:.2}")).collect();
    println!("t={t} red {:<5} | {} | {}", a.name(), goals.join(", "), socials.join(", "));
}
