//! Enumerate the canonical scenarios, write one to disk, load it back, and
//! export its trace as CSV.

use socmdp::harness::{trace_to_csv, trace_to_json};
use socmdp::scenarios::scenario_to_json;
use socmdp::{canonical_layout, enumerate_scenarios, load_scenario, rollout, Planner};

fn main() -> socmdp::Result<()> {
    let all = enumerate_scenarios(&canonical_layout());
    println!("{} scenarios", all.len());
    for s in all.iter().take(3) {
        let names =
            s.agents.map(|a| format!("{}/{}", s.layout.landmark_names[a.physical.landmark.0 as usize], a.social));
        println!("  {} yellow {} red {}", s.id, names[0], names[1]);
    }

    let dir = std::env::temp_dir().join("socmdp-export");
    std::fs::create_dir_all(&dir).map_err(|source| socmdp::Error::Io { path: dir.display().to_string(), source })?;
    let path = dir.join("S1.json");
    let io = |source| socmdp::Error::Io { path: path.display().to_string(), source };
    std::fs::write(&path, scenario_to_json(&all[0])).map_err(io)?;
    let spec = load_scenario(&std::fs::read_to_string(&path).map_err(io)?)?;
    assert_eq!(spec, all[0]);

    let planner = Planner::new(spec.grid().clone(), spec.config)?;
    let trace = rollout(&planner, &spec)?.social;
    print!("{}", trace_to_csv(&trace)?.lines().take(5).map(|l| format!("{l}\n")).collect::<String>());
    println!("json trace: {} bytes, written next to {}", trace_to_json(&trace)?.len(), path.display());
    Ok(())
}
