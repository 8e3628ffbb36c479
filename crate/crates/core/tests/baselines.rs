use socmdp::baselines::{distance_cue, inverse_planning_estimate, Cue};
use socmdp::scenarios::canonical_layout;
use socmdp::{
    transition, Action, AgentId, Cell, Observation, PhysicalGoal, Planner, SocialGoal, SolveConfig, WorldState,
};

fn scripted(start: WorldState, red: &[Action]) -> Vec<Observation> {
    let grid = canonical_layout().grid;
    let mut s = start;
    red.iter()
        .map(|&a| {
            let joint = [Action::Stay, a];
            let next = transition(&grid, &s, joint);
            let obs = Observation { prev: s.clone(), joint, next: next.clone() };
            s = next;
            obs
        })
        .collect()
}

#[test]
fn pushing_toward_the_tree_is_read_as_the_tree_goal() {
    let layout = canonical_layout();
    let planner = Planner::new(layout.grid.clone(), SolveConfig::default()).unwrap();
    let axe = layout.object_id("axe").unwrap();
    let goals = [
        PhysicalGoal { object: axe, landmark: layout.landmark_id("tree").unwrap() },
        PhysicalGoal { object: axe, landmark: layout.landmark_id("construction_site").unwrap() },
    ];
    let start = WorldState { agents: [Cell::new(1, 1), Cell::new(3, 5)], objects: layout.initial.objects.clone() };
    let history = scripted(start, &[Action::Push, Action::Push]);
    // Yellow's own goal is the axe to the tree, so red is helping.
    let e = inverse_planning_estimate(&planner, AgentId::RED, goals[0], &goals, &history).unwrap();
    assert_eq!(e.timestep, 2);
    assert!(e.posterior_physical[0] > e.posterior_physical[1], "{e:?}");
    let top = SocialGoal::ALL
        .into_iter()
        .max_by(|a, b| e.posterior_social[a.index()].total_cmp(&e.posterior_social[b.index()]))
        .unwrap();
    assert!(Cue::Closer.family().contains(&top), "{e:?}");
    for f in Cue::Closer.family() {
        let expected = 1.0 / (2.0 + 4.0 * 0.8f64.powi(2));
        assert!((e.posterior_social[f.index()] - expected).abs() < 1e-12);
    }

    // Against a construction-site goal the same pushes hurt.
    let against = distance_cue(&layout.grid, &history[0], AgentId::RED, goals[1]);
    assert_eq!(against, Cue::Farther);
}

#[test]
fn staying_gives_a_neutral_cue() {
    let layout = canonical_layout();
    let history = scripted(layout.initial.clone(), &[Action::Stay]);
    let goal = PhysicalGoal::new(0, 0);
    assert_eq!(distance_cue(&layout.grid, &history[0], AgentId::RED, goal), Cue::Neutral);
}

#[test]
fn empty_history_is_rejected() {
    let layout = canonical_layout();
    let planner = Planner::new(layout.grid.clone(), SolveConfig::default()).unwrap();
    let goals = [PhysicalGoal::new(0, 0)];
    assert!(inverse_planning_estimate(&planner, AgentId::RED, goals[0], &goals, &[]).is_err());
}
