use proptest::prelude::*;
use socmdp::harness::oracle::fixture;
use socmdp::inference::PartnerModel;
use socmdp::planner::MindModel;
use socmdp::scenarios::canonical_layout;
use socmdp::{
    argmax_action, joint_update, transition, update_physical, update_social, Action, AgentId, Belief, Cell, Hypothesis,
    Mind, Observation, PhysicalGoal, Planner, SocialGoal, SolveConfig, WorldState,
};

/// Likelihood looked up per hypothesis.
struct Table(Vec<(Hypothesis, f64)>);

impl PartnerModel for Table {
    fn partner(&self) -> AgentId {
        AgentId::RED
    }
    fn likelihood(&mut self, hyp: &Hypothesis, _: &Observation) -> f64 {
        self.0.iter().find(|e| e.0 == *hyp).map(|e| e.1).unwrap()
    }
}

fn still_obs() -> (socmdp::Grid, Observation) {
    let (grid, s) = fixture();
    let joint = [Action::Stay, Action::Stay];
    (grid.clone(), Observation { next: transition(&grid, &s, joint), prev: s, joint })
}

fn hyps() -> Vec<Hypothesis> {
    let goals = [PhysicalGoal::new(0, 0), PhysicalGoal::new(0, 1)];
    goals.iter().flat_map(|&goal| SocialGoal::ALL.map(|social| Hypothesis { goal, social })).collect()
}

proptest! {
    #[test]
    fn updates_stay_normalized_and_equivariant(
        prior in prop::collection::vec(0.01..1.0f64, 12),
        lik in prop::collection::vec(1e-6..1.0f64, 12),
    ) {
        let (grid, obs) = still_obs();
        let h = hyps();
        let belief = Belief::from_weights(h.iter().copied().zip(prior.iter().copied()).collect()).unwrap();
        let mut model = Table(h.iter().copied().zip(lik.iter().copied()).collect());
        let post = joint_update(&grid, &belief, &obs, &mut model).unwrap().belief;
        let w = post.weights();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(w.iter().all(|&x| x > 0.0 && x < 1.0));

        let reversed = Belief::from_weights(h.iter().copied().zip(prior.iter().copied()).rev().collect()).unwrap();
        let post_r = joint_update(&grid, &reversed, &obs, &mut model).unwrap().belief;
        for (hyp, p) in post.iter() {
            let q = post_r.iter().find(|e| e.0 == hyp).unwrap().1;
            prop_assert!((p - q).abs() < 1e-12);
        }

        let social = update_social(&grid, &belief, &obs, &mut model).unwrap().belief;
        prop_assert!((social.weights().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn posterior_matches_bayes_rule(
        prior in prop::collection::vec(0.01..1.0f64, 12),
        lik in prop::collection::vec(1e-6..1.0f64, 12),
    ) {
        let (grid, obs) = still_obs();
        let h = hyps();
        let belief = Belief::from_weights(h.iter().copied().zip(prior.iter().copied()).collect()).unwrap();
        let mut model = Table(h.iter().copied().zip(lik.iter().copied()).collect());
        let post = joint_update(&grid, &belief, &obs, &mut model).unwrap().belief;
        let z: f64 = prior.iter().zip(&lik).map(|(p, l)| p * l).sum();
        for (i, (_, p)) in post.iter().enumerate() {
            prop_assert!((p - prior[i] * lik[i] / z).abs() < 1e-9);
        }
    }
}

#[test]
fn modal_cooperative_play_raises_belief_in_cooperation_each_step() {
    let (grid, mut s) = fixture();
    let planner = Planner::new(grid.clone(), SolveConfig::default()).unwrap();
    let goals = [PhysicalGoal::new(0, 0), PhysicalGoal::new(0, 1)];
    let mut belief = Belief::init(&goals, &SocialGoal::ALL).unwrap();
    let nested = Belief::init(&goals, &[SocialGoal::None]).unwrap();
    let truth = Hypothesis { goal: goals[1], social: SocialGoal::Cooperation };
    let p_coop = |b: &Belief| b.social_marginal().iter().find(|e| e.0 == SocialGoal::Cooperation).unwrap().1;
    let mut last = p_coop(&belief);
    for _ in 0..5 {
        let session = planner.session();
        let observer = Mind {
            agent: AgentId::YELLOW,
            level: 2,
            social: SocialGoal::None,
            goal: goals[0],
            beliefs: vec![belief.clone(), nested.clone()],
        };
        let red = observer.partner(&truth);
        let a = argmax_action(&session.policy(&red, &s).unwrap());
        let joint = [Action::Stay, a];
        let obs = Observation { prev: s.clone(), joint, next: transition(&grid, &s, joint) };
        let mut model = MindModel { session: &session, observer };
        belief = update_social(&grid, &belief, &obs, &mut model).unwrap().belief;
        let p = p_coop(&belief);
        assert!(p > last, "P(cooperation) fell from {last} to {p} after {a:?}");
        last = p;
        s = obs.next;
    }
}

#[test]
fn pushing_the_axe_toward_the_tree_points_at_the_tree() {
    let layout = canonical_layout();
    let grid = layout.grid.clone();
    let planner = Planner::new(grid.clone(), SolveConfig::default()).unwrap();
    let axe = layout.object_id("axe").unwrap();
    let tree = layout.landmark_id("tree").unwrap();
    let site = layout.landmark_id("construction_site").unwrap();
    let goals = [PhysicalGoal { object: axe, landmark: tree }, PhysicalGoal { object: axe, landmark: site }];
    let prior = Belief::init(&goals, &[SocialGoal::None]).unwrap();

    let objects = layout.initial.objects.clone();
    assert_eq!(objects[axe.0 as usize], Cell::new(2, 5));
    let mut s = WorldState { agents: [Cell::new(1, 1), Cell::new(3, 5)], objects };
    let mut history = Vec::new();
    for _ in 0..2 {
        let joint = [Action::Stay, Action::Push];
        let next = transition(&grid, &s, joint);
        history.push(Observation { prev: s.clone(), joint, next: next.clone() });
        s = next;
    }
    assert_eq!(s.objects[axe.0 as usize], Cell::new(0, 5));

    let session = planner.session();
    let observer = Mind {
        agent: AgentId::YELLOW,
        level: 1,
        social: SocialGoal::None,
        goal: goals[0],
        beliefs: vec![prior.clone()],
    };
    let mut model = MindModel { session: &session, observer };
    let post = update_physical(&grid, &prior, &history, &mut model).unwrap().belief;
    let m = post.physical_marginal();
    assert!(m[0].1 > m[1].1, "{m:?}");
}
