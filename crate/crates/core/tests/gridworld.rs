use proptest::prelude::*;
use socmdp::gridworld::N_ACTIONS;
use socmdp::planner::relaxed::{Backups, RelaxedKey, RelaxedTable};
use socmdp::{geodesic_distance, transition, Action, Cell, Grid, WorldState};

const W: u8 = 5;
const H: u8 = 4;

fn grid() -> Grid {
    Grid::new(W, H, vec![Cell::new(0, 3), Cell::new(4, 0)]).unwrap()
}

fn action() -> impl Strategy<Value = Action> {
    (0..N_ACTIONS).prop_map(Action::from_index)
}

/// A valid state with `k` objects: distinct cells drawn from the grid.
fn state(k: usize) -> impl Strategy<Value = WorldState> {
    let n = (W as usize) * (H as usize);
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |cells| {
        let at = |i: usize| Cell::new((cells[i] % W as usize) as u8, (cells[i] / W as usize) as u8);
        let objects: Vec<Cell> = (0..k).map(|i| at(i + 2)).collect();
        WorldState::new([at(0), at(1)], &objects)
    })
}

proptest! {
    #[test]
    fn transitions_preserve_validity(s in (1..=3usize).prop_flat_map(state), a in action(), b in action()) {
        let g = grid();
        let next = transition(&g, &s, [a, b]);
        prop_assert!(g.validate(&next).is_ok());
        for k in 0..2 {
            prop_assert!(next.agents[k].manhattan(s.agents[k]) <= 1);
        }
        let moved: Vec<_> = (0..s.objects.len()).filter(|&i| s.objects[i] != next.objects[i]).collect();
        prop_assert!(moved.len() <= 2);
        for &i in &moved {
            prop_assert_eq!(next.objects[i].manhattan(s.objects[i]), 1);
            // A moved object was pushed: its pusher now stands where it was.
            prop_assert!(next.agents.contains(&s.objects[i]));
        }
    }

    #[test]
    fn staying_is_the_identity(s in (0..=3usize).prop_flat_map(state)) {
        prop_assert_eq!(transition(&grid(), &s, [Action::Stay, Action::Stay]), s);
    }

    #[test]
    fn relaxed_step_matches_transition_with_one_object(s in state(1), a in action()) {
        let g = grid();
        let key = RelaxedKey {
            walls: Default::default(),
            partner: Some(s.agents[1]),
            terms: vec![],
            own_cost_bits: 1f64.to_bits(),
            extra_cost_bits: 0f64.to_bits(),
            backups: Backups::Exactly(0),
            gamma_bits: 0.99f64.to_bits(),
            rho_bits: 1.25f64.to_bits(),
            delta_bits: 5f64.to_bits(),
        };
        let table = RelaxedTable::build(&g, &key);
        let (a2, p2) = table.step(&g, s.agents[0], s.objects[0], a);
        let next = transition(&g, &s, [a, Action::Stay]);
        prop_assert_eq!((a2, p2), (next.agents[0], next.objects[0]));
    }

    #[test]
    fn geodesic_triangle_inequality(s in state(3)) {
        let g = grid();
        let blocked = |c: Cell| s.objects.contains(&c);
        let (x, y, z) = (s.agents[0], s.agents[1], Cell::new(2, 2));
        prop_assume!(!blocked(z));
        let d = |p, q| geodesic_distance(&g, p, q, blocked);
        if let (Some(xy), Some(yz)) = (d(x, y), d(y, z)) {
            let xz = d(x, z).expect("reachable through y");
            prop_assert!(xz <= xy + yz);
        }
        prop_assert_eq!(d(x, y), d(y, x));
        if let Some(xy) = d(x, y) {
            prop_assert!(xy >= x.manhattan(y));
        }
    }
}

#[test]
fn push_moves_object_and_pusher() {
    let g = Grid::new(5, 1, vec![Cell::new(4, 0)]).unwrap();
    let s = WorldState::new([Cell::new(1, 0), Cell::new(4, 0)], &[Cell::new(2, 0)]);
    let n = transition(&g, &s, [Action::Push, Action::Stay]);
    assert_eq!(n, WorldState::new([Cell::new(2, 0), Cell::new(4, 0)], &[Cell::new(3, 0)]));
    // The object cannot be pushed onto the other agent.
    let n2 = transition(&g, &n, [Action::Push, Action::Stay]);
    assert_eq!(n2, n);
}

#[test]
fn agents_swapping_into_the_same_cell_both_stay() {
    let g = Grid::new(3, 1, vec![Cell::new(0, 0)]).unwrap();
    let s = WorldState::new([Cell::new(0, 0), Cell::new(2, 0)], &[]);
    assert_eq!(transition(&g, &s, [Action::MoveEast, Action::MoveWest]), s);
}
