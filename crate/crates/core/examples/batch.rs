//! Run a few canonical scenarios through the batch harness and print the
//! summary rows.

use socmdp::harness::{run, RunManifest};
use socmdp::rollout::MODELS;
use socmdp::scenarios::canonical_scenario;

fn main() -> socmdp::Result<()> {
    let ids = ["S1", "S8", "S14"];
    let manifest = RunManifest {
        scenarios: ids.iter().map(|id| canonical_scenario(id)).collect::<socmdp::Result<_>>()?,
        models: MODELS.iter().map(|m| m.to_string()).collect(),
        out: std::env::temp_dir().join("socmdp-batch"),
        jobs: socmdp::harness::run::default_jobs(),
    };
    let report = run(&manifest)?;
    for r in &report.rows {
        println!(
            "{:<4} {:<16} red {:<11} map {:<11} p(true) {:.2} steps {}",
            r.scenario,
            r.model,
            r.red_social.name(),
            r.map_social.map_or("-", |g| g.name()),
            r.p_true_class,
            r.steps
        );
    }
    println!("traces in {}", manifest.out.display());
    Ok(())
}
