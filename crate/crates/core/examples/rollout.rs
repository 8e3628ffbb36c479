//! Run one of the 72 canonical scenarios and print what happened.
//!
//! cargo run --example rollout -- S35

use socmdp::planner::Planner;
use socmdp::rollout::rollout;
use socmdp::scenarios::canonical_scenario;

fn main() -> socmdp::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "S35".into());
    let spec = canonical_scenario(&id)?;
    let planner = Planner::new(spec.grid().clone(), spec.config)?;
    let start = std::time::Instant::now();
    let ep = rollout(&planner, &spec)?;
    let tr = &ep.social;
    for a in &tr.agents {
        println!("{}: {} -> {}, {}, level {}", a.id, a.object, a.landmark, a.social, a.level);
    }
    for s in &tr.steps {
        let best = s.posterior_social.iter().enumerate().fold((0, 0.0), |b, (i, &p)| if p > b.1 { (i, p) } else { b });
        println!(
            "t={:2} yellow {:5} red {:5}  p(social)={} {:.3}",
            s.t,
            s.joint[0].name(),
            s.joint[1].name(),
            tr.socials[best.0],
            best.1
        );
    }
    println!(
        "{:?} after {} steps; steps to goal {:?}; {:.1?}",
        tr.terminated_reason,
        tr.steps.len(),
        tr.steps_to_goal,
        start.elapsed()
    );
    Ok(())
}
