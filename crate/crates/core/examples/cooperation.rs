//! A level-2 yellow agent with different social goals toward red, whose log
//! lies on yellow's side of the map. How soon does red get its goal?

use socmdp::scenarios::cooperation_fixture;
use socmdp::{rollout, Planner, SocialGoal};

fn main() -> socmdp::Result<()> {
    for social in [SocialGoal::None, SocialGoal::Cooperation, SocialGoal::Conflict] {
        let spec = cooperation_fixture(social);
        let planner = Planner::new(spec.grid().clone(), spec.config)?;
        let trace = rollout(&planner, &spec)?.social;
        let moves: String = trace.steps.iter().map(|s| s.joint[0].name().chars().next().unwrap_or('?')).collect();
        println!(
            "yellow {:<12} red reaches its goal at {:?}, yellow at {:?}; yellow's moves {moves}",
            social.name(),
            trace.steps_to_goal[1],
            trace.steps_to_goal[0]
        );
    }
    Ok(())
}
