//! World dynamics: moving, pushing, and the clash rules.

use socmdp::{transition, Action, Cell, Grid, WorldState};

fn show(label: &str, s: &WorldState) {
    println!(
        "{label:<28} yellow {} red {} objects {:?}",
        s.agents[0],
        s.agents[1],
        s.objects.iter().map(|c| c.to_string()).collect::<Vec<_>>()
    );
}

fn main() -> socmdp::Result<()> {
    let grid = Grid::new(5, 3, vec![Cell::new(4, 1)])?;
    let s = WorldState::new([Cell::new(1, 1), Cell::new(3, 0)], &[Cell::new(2, 1)]);
    show("start", &s);

    // The object east of yellow slides one cell and yellow follows it.
    let s = transition(&grid, &s, [Action::Push, Action::Stay]);
    show("yellow pushes", &s);

    // Red wants the cell the object is being pushed into: nobody moves.
    let r = WorldState::new([s.agents[0], Cell::new(4, 0)], &s.objects);
    show("push into red's target", &transition(&grid, &r, [Action::Push, Action::MoveNorth]));

    // Both aim at the same cell: nobody moves.
    let u = WorldState::new([Cell::new(0, 0), Cell::new(2, 0)], &[Cell::new(4, 2)]);
    show("converging", &transition(&grid, &u, [Action::MoveEast, Action::MoveWest]));

    // Walking into an object is blocked; pushing is the only way through.
    show("walk into object", &transition(&grid, &s, [Action::MoveEast, Action::Stay]));
    let s = transition(&grid, &s, [Action::Push, Action::Stay]);
    show("object reaches the landmark", &s);
    Ok(())
}
