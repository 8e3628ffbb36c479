use socmdp::rollout::plain_rollout;
use socmdp::scenarios::{canonical_scenario, scenario_to_json};
use socmdp::{
    canonical_layout, compose_reward, enumerate_scenarios, load_scenario, rollout, transition, Error, Planner,
    SocialGoal,
};

const MINIMAL: &str = r#"{
  "id": "tiny",
  "grid": { "width": 4, "height": 3 },
  "landmarks": [ { "id": "flag", "x": 3, "y": 2 } ],
  "objects": [ { "id": "crate", "x": 1, "y": 1 } ],
  "agents": [
    { "id": "yellow", "x": 0, "y": 1, "physical": { "object": "crate", "landmark": "flag" }, "social": "none", "level": 0 },
    { "id": "red", "x": 3, "y": 0, "physical": { "object": "crate", "landmark": "flag" }, "social": "cooperation", "level": 1 }
  ]
}"#;

#[test]
fn minimal_document_gets_defaults() {
    let spec = load_scenario(MINIMAL).unwrap();
    assert_eq!(spec.id, "tiny");
    assert_eq!(spec.config.gamma, 0.99);
    assert_eq!(spec.config.tau, 0.5);
    assert_eq!(spec.config.n_exchange, 0.2);
    assert_eq!(spec.config.horizon, 20);
    assert_eq!(spec.agents[1].social, SocialGoal::Cooperation);
}

#[test]
fn stacked_objects_name_the_cell() {
    let text = MINIMAL.replace(
        r#"[ { "id": "crate", "x": 1, "y": 1 } ]"#,
        r#"[ { "id": "crate", "x": 1, "y": 1 }, { "id": "box", "x": 1, "y": 1 } ]"#,
    );
    let err = load_scenario(&text).unwrap_err().to_string();
    assert!(err.contains("(1,1)"), "{err}");
}

#[test]
fn unknown_ids_are_named() {
    let err = load_scenario(&MINIMAL.replacen(r#""landmark": "flag""#, r#""landmark": "pond""#, 1)).unwrap_err();
    assert!(err.to_string().contains("pond"), "{err}");
    let err = load_scenario(&MINIMAL.replace(r#""id": "red""#, r#""id": "blue""#)).unwrap_err();
    assert!(err.to_string().contains("blue"), "{err}");
}

#[test]
fn syntax_errors_carry_a_location() {
    let broken = MINIMAL.replace(r#""height": 3"#, r#""height": 3,,"#);
    match load_scenario(&broken) {
        Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 3 "), "{location}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let unknown_field = MINIMAL.replace(r#""id": "tiny","#, r#""id": "tiny", "colour": "blue","#);
    assert!(matches!(load_scenario(&unknown_field), Err(Error::Parse { .. })));
}

#[test]
fn every_canonical_scenario_round_trips() {
    let all = enumerate_scenarios(&canonical_layout());
    for spec in &all {
        let text = scenario_to_json(spec);
        let back = load_scenario(&text).unwrap();
        assert_eq!(&back, spec);
        assert_eq!(scenario_to_json(&back), text);
    }
}

#[test]
fn enumeration_is_balanced() {
    let all = enumerate_scenarios(&canonical_layout());
    assert_eq!(all.len(), 72);
    let mut ids: Vec<_> = all.iter().map(|s| s.id.clone()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 72);
    for k in 0..2 {
        for x in SocialGoal::ALL {
            assert_eq!(all.iter().filter(|s| s.agents[k].social == x).count(), 12, "{x} for agent {k}");
        }
    }
}

#[test]
fn rollout_trace_is_self_consistent() {
    let spec = canonical_scenario("S8").unwrap();
    let planner = Planner::new(spec.grid().clone(), spec.config).unwrap();
    let ep = rollout(&planner, &spec).unwrap();
    let trace = &ep.social;
    let grid = spec.grid();
    for w in trace.steps.windows(2) {
        assert_eq!(transition(grid, &w[0].state.to_state(), w[0].joint), w[1].state.to_state());
    }
    let last = trace.steps.last().unwrap();
    assert_eq!(transition(grid, &last.state.to_state(), last.joint), trace.final_state.to_state());
    for step in &trace.steps {
        for r in &step.rewards {
            assert_eq!(r.total, compose_reward(r.physical, r.social, r.cost));
        }
    }
    assert_eq!(rollout(&planner, &spec).unwrap().social, *trace);
}

#[test]
fn plain_rollout_follows_the_world() {
    let spec = canonical_scenario("S1").unwrap();
    let planner = Planner::new(spec.grid().clone(), spec.config).unwrap();
    let steps = plain_rollout(&planner, &spec).unwrap();
    for w in steps.windows(2) {
        assert_eq!(transition(spec.grid(), &w[0].0, w[0].1), w[1].0);
    }
}
