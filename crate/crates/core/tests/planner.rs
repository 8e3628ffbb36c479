use proptest::prelude::*;
use socmdp::harness::oracle::{fixture, fixture_mind};
use socmdp::{
    softmax_policy, Action, AgentId, Cell, Grid, Mind, PhysicalGoal, Planner, SocialGoal, SolveConfig, WorldState,
};

proptest! {
    #[test]
    fn softmax_is_a_distribution(q in prop::collection::vec(-200.0..200.0f64, 1..8), tau in 0.05..5.0f64) {
        let p = softmax_policy(&q, tau);
        prop_assert_eq!(p.len(), q.len());
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        for i in 0..q.len() {
            for j in 0..q.len() {
                if q[i] > q[j] {
                    prop_assert!(p[i] >= p[j]);
                }
            }
        }
    }

    #[test]
    fn softmax_ignores_shifts(q in prop::collection::vec(-50.0..50.0f64, 1..8), c in -100.0..100.0f64) {
        let a = softmax_policy(&q, 0.5);
        let shifted: Vec<f64> = q.iter().map(|x| x + c).collect();
        let b = softmax_policy(&shifted, 0.5);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn level0_values_are_bounded(ax in 0u8..4, ay in 0u8..4, px in 0u8..4, py in 0u8..4) {
        let (grid, s0) = fixture();
        let s = WorldState::new([Cell::new(ax, ay), s0.agents[1]], &[Cell::new(px, py)]);
        prop_assume!(grid.validate(&s).is_ok());
        let cfg = SolveConfig::default();
        let planner = Planner::new(grid, cfg).unwrap();
        let v = planner.session().value(&Mind::plain(AgentId::YELLOW, PhysicalGoal::new(0, 0)), &s).unwrap();
        prop_assert!(v.abs() <= cfg.rho / (1.0 - cfg.gamma));
    }
}

fn corridor() -> (Planner, Mind) {
    let grid = Grid::new(5, 1, vec![Cell::new(4, 0)]).unwrap();
    (Planner::new(grid, SolveConfig::default()).unwrap(), Mind::plain(AgentId::YELLOW, PhysicalGoal::new(0, 0)))
}

#[test]
fn corridor_push_is_optimal_next_to_the_object() {
    let (planner, mind) = corridor();
    let s = WorldState::new([Cell::new(2, 0), Cell::new(0, 0)], &[Cell::new(3, 0)]);
    let (a, q) = planner.session().decide(&mind, &s).unwrap();
    assert_eq!(a, Action::Push);
    // After the push the object sits on the landmark and staying earns
    // 1.25 - 0.1 forever, worth 115.
    let after = 1.15 / (1.0 - 0.99);
    assert!((q[Action::Push.index()] - (1.25 - 1.0 + 0.99 * after)).abs() < 1e-6);
    let stay = 1.0 - 0.1 + 0.99 * q[Action::Push.index()];
    assert!((q[Action::Stay.index()] - stay).abs() < 1e-6);
}

#[test]
fn at_goal_the_agent_stays() {
    let (planner, mind) = corridor();
    for x in [0u8, 1, 2] {
        let s = WorldState::new([Cell::new(x, 0), Cell::new(3, 0)], &[Cell::new(4, 0)]);
        let session = planner.session();
        let (a, q) = session.decide(&mind, &s).unwrap();
        assert_eq!(a, Action::Stay);
        let p = softmax_policy(&q, planner.config().tau);
        assert!(p[Action::Stay.index()] > 0.5, "{p:?}");
    }
}

#[test]
fn a_none_social_goal_plans_like_level_zero() {
    let (grid, s) = fixture();
    let planner = Planner::new(grid, SolveConfig::default()).unwrap();
    let session = planner.session();
    let plain = fixture_mind(0, SocialGoal::None).unwrap();
    let none = fixture_mind(2, SocialGoal::None).unwrap();
    assert_eq!(session.action_values(&plain, &s).unwrap(), session.action_values(&none, &s).unwrap());
}

#[test]
fn social_solves_are_repeatable() {
    let (grid, s) = fixture();
    let planner = Planner::new(grid, SolveConfig::default()).unwrap();
    let mind = fixture_mind(2, SocialGoal::Cooperation).unwrap();
    let a = planner.session().action_values(&mind, &s).unwrap();
    let b = planner.session().action_values(&mind, &s).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|x| x.is_finite()));
}
