//! Crossed goals: each agent starts next to the object the other one needs.

use socmdp::scenarios::exchange_fixture;
use socmdp::{rollout, Planner, SocialGoal};

fn main() -> socmdp::Result<()> {
    use SocialGoal::{Exchange, None};
    let cases = [
        ("none / none", [None, None], [2, 2]),
        ("mutual exchange", [Exchange, Exchange], [2, 2]),
        ("exchange / none", [Exchange, None], [2, 1]),
    ];
    for (label, socials, levels) in cases {
        let spec = exchange_fixture(socials, levels);
        let planner = Planner::new(spec.grid().clone(), spec.config)?;
        let trace = rollout(&planner, &spec)?.social;
        let undefined = trace.steps.first().map_or([0.0; 2], |s| s.degraded);
        println!(
            "{label:<16} steps to goal {:?}  ended {}  undefined exchange mass at t=0 {:.2?}",
            trace.steps_to_goal,
            trace.terminated_reason.name(),
            undefined
        );
    }
    Ok(())
}
