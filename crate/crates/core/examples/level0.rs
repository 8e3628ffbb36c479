//! A plain (level-0) agent in a corridor: action values, then a greedy walk.

use socmdp::{transition, Action, AgentId, Cell, Grid, Mind, PhysicalGoal, Planner, SolveConfig, WorldState};

fn main() -> socmdp::Result<()> {
    let grid = Grid::new(7, 2, vec![Cell::new(6, 0)])?;
    let planner = Planner::new(grid.clone(), SolveConfig::default())?;
    let session = planner.session();
    let yellow = Mind::plain(AgentId::YELLOW, PhysicalGoal::new(0, 0));
    let mut s = WorldState::new([Cell::new(0, 0), Cell::new(0, 1)], &[Cell::new(2, 0)]);
    // Reward starts once the crate is within five cells of the landmark.
    for t in 0..7 {
        let (a, q) = session.decide(&yellow, &s)?;
        let row: Vec<String> = q.iter().map(|v| format!("{v:7.2}")).collect();
        println!(
            "t={t} yellow {} crate {}  Q[n s e w push stay] = {}  -> {}",
            s.agents[0],
            s.objects[0],
            row.join(" "),
            a.name()
        );
        s = transition(&grid, &s, [a, Action::Stay]);
    }
    Ok(())
}
