//! The inverse-planning baseline next to the social observer on one scenario.

use socmdp::rollout::{MODEL_BASELINE, MODEL_SOCIAL};
use socmdp::scenarios::canonical_scenario;
use socmdp::{rollout, Planner};

fn main() -> socmdp::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "S7".into());
    let spec = canonical_scenario(&id)?;
    let planner = Planner::new(spec.grid().clone(), spec.config)?;
    let ep = rollout(&planner, &spec)?;
    println!("{id}: red is {} heading to {}", ep.social.agents[1].social, ep.social.agents[1].landmark);
    for model in [MODEL_SOCIAL, MODEL_BASELINE] {
        let trace = ep.trace(model).expect("known model");
        let last = trace.steps.last().expect("at least one step");
        let socials: Vec<String> =
            trace.socials.iter().zip(&last.posterior_social).map(|(x, p)| format!("{x} {p:.2}")).collect();
        let goals: Vec<String> =
            trace.landmarks.iter().zip(&last.posterior_physical).map(|(l, p)| format!("{l} {p:.2}")).collect();
        println!("{model:<17} {} | {}", goals.join(", "), socials.join(", "));
    }
    Ok(())
}
