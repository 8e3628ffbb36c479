//! Deterministic two-agent gridworld with pushable objects.
//!
//! North is `y + 1`. Objects block movement, landmarks do not. Rewards are
//! always measured on the state *after* a joint action resolves.

use std::collections::VecDeque;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Largest supported grid side. Keeps cell indices inside a `u8`.
pub const MAX_SIDE: u8 = 16;
pub const MAX_OBJECTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: u8,
    pub y: u8,
}

impl Cell {
    pub const fn new(x: u8, y: u8) -> Self {
        Cell { x, y }
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        (self.x.abs_diff(other.x) + self.y.abs_diff(other.y)) as u32
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    North,
    South,
    East,
    West,
}

impl Dir {
    /// Search order used when several objects are adjacent to a pusher.
    pub const PUSH_ORDER: [Dir; 4] = [Dir::North, Dir::South, Dir::East, Dir::West];

    fn delta(self) -> (i16, i16) {
        match self {
            Dir::North => (0, 1),
            Dir::South => (0, -1),
            Dir::East => (1, 0),
            Dir::West => (-1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    #[serde(rename = "north")]
    MoveNorth,
    #[serde(rename = "south")]
    MoveSouth,
    #[serde(rename = "east")]
    MoveEast,
    #[serde(rename = "west")]
    MoveWest,
    Push,
    Stay,
}

impl Action {
    /// Fixed ordering; earlier actions win value ties.
    pub const ALL: [Action; 6] =
        [Action::MoveNorth, Action::MoveSouth, Action::MoveEast, Action::MoveWest, Action::Push, Action::Stay];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Action {
        Action::ALL[i]
    }

    pub fn dir(self) -> Option<Dir> {
        match self {
            Action::MoveNorth => Some(Dir::North),
            Action::MoveSouth => Some(Dir::South),
            Action::MoveEast => Some(Dir::East),
            Action::MoveWest => Some(Dir::West),
            Action::Push | Action::Stay => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::MoveNorth => "north",
            Action::MoveSouth => "south",
            Action::MoveEast => "east",
            Action::MoveWest => "west",
            Action::Push => "push",
            Action::Stay => "stay",
        }
    }

    pub fn parse(s: &str) -> Option<Action> {
        Action::ALL.into_iter().find(|a| a.name() == s)
    }
}

pub const N_ACTIONS: usize = 6;

/// One of the two agents. Index 0 acts first in every joint action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId(pub u8);

impl AgentId {
    pub const YELLOW: AgentId = AgentId(0);
    pub const RED: AgentId = AgentId(1);
    pub const BOTH: [AgentId; 2] = [AgentId::YELLOW, AgentId::RED];

    pub fn other(self) -> AgentId {
        AgentId(1 - self.0)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectId(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LandmarkId(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhysicalGoal {
    pub object: ObjectId,
    pub landmark: LandmarkId,
}

impl PhysicalGoal {
    pub const fn new(object: u8, landmark: u8) -> Self {
        PhysicalGoal { object: ObjectId(object), landmark: LandmarkId(landmark) }
    }
}

/// Per-agent actions, indexed by `AgentId`.
pub type JointAction = [Action; 2];

/// Static part of a world: bounds and landmark cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    width: u8,
    height: u8,
    landmarks: Vec<Cell>,
}

impl Grid {
    pub fn new(width: u8, height: u8, landmarks: Vec<Cell>) -> Result<Grid, Error> {
        if width == 0 || height == 0 || width > MAX_SIDE || height > MAX_SIDE {
            return Err(Error::Invalid(format!("grid {width}x{height} outside 1..={MAX_SIDE}")));
        }
        let grid = Grid { width, height, landmarks };
        for &l in &grid.landmarks {
            if !grid.contains(l) {
                return Err(Error::Invalid(format!("landmark at {l} is off the grid")));
            }
        }
        Ok(grid)
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn height(&self) -> u8 {
        self.height
    }

    pub fn n_cells(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn landmarks(&self) -> &[Cell] {
        &self.landmarks
    }

    pub fn landmark(&self, id: LandmarkId) -> Cell {
        self.landmarks[id.0 as usize]
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height
    }

    pub fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width as usize + c.x as usize
    }

    pub fn cell(&self, index: usize) -> Cell {
        let w = self.width as usize;
        Cell::new((index % w) as u8, (index / w) as u8)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.n_cells()).map(|i| self.cell(i))
    }

    pub fn step(&self, c: Cell, d: Dir) -> Option<Cell> {
        let (dx, dy) = d.delta();
        let x = c.x as i16 + dx;
        let y = c.y as i16 + dy;
        if x < 0 || y < 0 || x >= self.width as i16 || y >= self.height as i16 {
            None
        } else {
            Some(Cell::new(x as u8, y as u8))
        }
    }

    pub fn validate(&self, s: &WorldState) -> Result<(), Error> {
        for (k, &a) in s.agents.iter().enumerate() {
            if !self.contains(a) {
                return Err(Error::Invalid(format!("agent {k} at {a} is off the grid")));
            }
        }
        if s.agents[0] == s.agents[1] {
            return Err(Error::Invalid(format!("both agents occupy {}", s.agents[0])));
        }
        for (i, &o) in s.objects.iter().enumerate() {
            if !self.contains(o) {
                return Err(Error::Invalid(format!("object {i} at {o} is off the grid")));
            }
            if s.objects[..i].contains(&o) {
                return Err(Error::Invalid(format!("two objects occupy {o}")));
            }
            if s.agents.contains(&o) {
                return Err(Error::Invalid(format!("an agent and an object share {o}")));
            }
        }
        Ok(())
    }
}

/// Dynamic part of a world: where the agents and objects are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldState {
    pub agents: [Cell; 2],
    pub objects: ArrayVec<Cell, MAX_OBJECTS>,
}

impl WorldState {
    pub fn new(agents: [Cell; 2], objects: &[Cell]) -> WorldState {
        WorldState { agents, objects: objects.iter().copied().collect() }
    }

    pub fn agent(&self, a: AgentId) -> Cell {
        self.agents[a.index()]
    }

    pub fn object(&self, o: ObjectId) -> Cell {
        self.objects[o.0 as usize]
    }

    pub fn object_at(&self, c: Cell) -> Option<usize> {
        self.objects.iter().position(|&o| o == c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Intent {
    to: Cell,
    /// Object index and its destination, when pushing.
    push: Option<(usize, Cell)>,
}

fn intent(grid: &Grid, s: &WorldState, k: usize, a: Action) -> Intent {
    let here = s.agents[k];
    let other = s.agents[1 - k];
    let stay = Intent { to: here, push: None };
    match a {
        Action::Stay => stay,
        Action::Push => {
            let Some((d, obj)) = Dir::PUSH_ORDER.iter().find_map(|&d| {
                let c = grid.step(here, d)?;
                s.object_at(c).map(|o| (d, o))
            }) else {
                return stay;
            };
            let from = s.objects[obj];
            match grid.step(from, d) {
                Some(dest) if s.object_at(dest).is_none() && !s.agents.contains(&dest) => {
                    Intent { to: from, push: Some((obj, dest)) }
                }
                _ => stay,
            }
        }
        _ => {
            let d = a.dir().expect("move action has a direction");
            match grid.step(here, d) {
                Some(to) if to != other && s.object_at(to).is_none() => Intent { to, push: None },
                _ => stay,
            }
        }
    }
}

/// Resolve a joint action. Illegal or conflicting intents leave agents in place.
pub fn transition(grid: &Grid, s: &WorldState, joint: JointAction) -> WorldState {
    let i0 = intent(grid, s, 0, joint[0]);
    let i1 = intent(grid, s, 1, joint[1]);
    let dest = |i: &Intent| i.push.map(|(_, d)| d);
    let clash = i0.to == i1.to
        || dest(&i0).is_some_and(|d| d == i1.to || Some(d) == dest(&i1))
        || dest(&i1).is_some_and(|d| d == i0.to);
    let mut next = s.clone();
    if clash {
        return next;
    }
    for (k, i) in [i0, i1].iter().enumerate() {
        next.agents[k] = i.to;
        if let Some((obj, d)) = i.push {
            next.objects[obj] = d;
        }
    }
    next
}

/// Shortest 4-connected path length, or `None` when unreachable.
pub fn geodesic_distance(grid: &Grid, from: Cell, to: Cell, blocked: impl Fn(Cell) -> bool) -> Option<u32> {
    if from == to {
        return Some(0);
    }
    if blocked(to) {
        return None;
    }
    let mut seen = [false; MAX_SIDE as usize * MAX_SIDE as usize];
    let mut queue = VecDeque::with_capacity(grid.n_cells());
    seen[grid.index(from)] = true;
    queue.push_back((from, 0u32));
    while let Some((c, d)) = queue.pop_front() {
        for dir in Dir::PUSH_ORDER {
            let Some(n) = grid.step(c, dir) else { continue };
            let ni = grid.index(n);
            if seen[ni] || blocked(n) {
                continue;
            }
            if n == to {
                return Some(d + 1);
            }
            seen[ni] = true;
            queue.push_back((n, d + 1));
        }
    }
    None
}

/// Distance from `owner`'s goal object to its landmark. The other agent and
/// all other objects block the path.
pub fn goal_distance(grid: &Grid, s: &WorldState, owner: AgentId, goal: PhysicalGoal) -> Option<u32> {
    let other = s.agent(owner.other());
    let obj = goal.object.0 as usize;
    geodesic_distance(grid, s.objects[obj], grid.landmark(goal.landmark), |c| {
        c == other || s.objects.iter().enumerate().any(|(i, &o)| i != obj && o == c)
    })
}

/// `max(rho * (1 - d / delta), 0)`; unreachable goals earn nothing.
pub fn reward_from_distance(d: Option<u32>, rho: f64, delta: f64) -> f64 {
    match d {
        Some(d) => (rho * (1.0 - d as f64 / delta)).max(0.0),
        None => 0.0,
    }
}

pub fn physical_reward(grid: &Grid, s: &WorldState, owner: AgentId, goal: PhysicalGoal, rho: f64, delta: f64) -> f64 {
    reward_from_distance(goal_distance(grid, s, owner, goal), rho, delta)
}

pub fn action_cost(a: Action) -> f64 {
    match a {
        Action::Stay => 0.1,
        _ => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(w: u8, h: u8) -> Grid {
        Grid::new(w, h, vec![Cell::new(0, 0)]).unwrap()
    }

    #[test]
    fn free_move() {
        let g = open(10, 10);
        let s = WorldState::new([Cell::new(2, 2), Cell::new(9, 9)], &[]);
        let n = transition(&g, &s, [Action::MoveEast, Action::Stay]);
        assert_eq!(n.agents[0], Cell::new(3, 2));
    }

    #[test]
    fn boundary_clamp() {
        let g = open(10, 10);
        let s = WorldState::new([Cell::new(0, 0), Cell::new(9, 9)], &[]);
        let n = transition(&g, &s, [Action::MoveWest, Action::MoveSouth]);
        assert_eq!(n.agents, [Cell::new(0, 0), Cell::new(9, 8)]);
    }

    #[test]
    fn same_target_blocks_both() {
        let g = open(10, 10);
        let s = WorldState::new([Cell::new(1, 1), Cell::new(3, 1)], &[]);
        let n = transition(&g, &s, [Action::MoveEast, Action::MoveWest]);
        assert_eq!(n, s);
    }

    #[test]
    fn swap_is_blocked() {
        let g = open(10, 10);
        let s = WorldState::new([Cell::new(1, 1), Cell::new(2, 1)], &[]);
        let n = transition(&g, &s, [Action::MoveEast, Action::MoveWest]);
        assert_eq!(n, s);
    }

    #[test]
    fn push_moves_object_and_agent() {
        let g = open(5, 1);
        let s = WorldState::new([Cell::new(0, 0), Cell::new(4, 0)], &[Cell::new(1, 0)]);
        let n = transition(&g, &s, [Action::Push, Action::Stay]);
        assert_eq!(n.agents[0], Cell::new(1, 0));
        assert_eq!(n.objects[0], Cell::new(2, 0));
    }

    #[test]
    fn push_into_wall_or_agent_fails() {
        let g = open(3, 1);
        let s = WorldState::new([Cell::new(0, 0), Cell::new(2, 0)], &[Cell::new(1, 0)]);
        assert_eq!(transition(&g, &s, [Action::Push, Action::Stay]), s);
        let s = WorldState::new([Cell::new(1, 0), Cell::new(0, 0)], &[Cell::new(2, 0)]);
        assert_eq!(transition(&g, &s, [Action::Push, Action::Stay]), s);
    }

    #[test]
    fn push_prefers_north() {
        let g = open(5, 5);
        let s = WorldState::new([Cell::new(2, 2), Cell::new(4, 4)], &[Cell::new(3, 2), Cell::new(2, 3)]);
        let n = transition(&g, &s, [Action::Push, Action::Stay]);
        assert_eq!(n.objects[1], Cell::new(2, 4));
        assert_eq!(n.objects[0], Cell::new(3, 2));
    }

    #[test]
    fn push_destination_claimed_by_mover() {
        let g = open(5, 5);
        // yellow pushes the object east onto (3,2); red walks south onto it.
        let s = WorldState::new([Cell::new(1, 2), Cell::new(3, 3)], &[Cell::new(2, 2)]);
        let n = transition(&g, &s, [Action::Push, Action::MoveSouth]);
        assert_eq!(n, s);
    }

    #[test]
    fn distances() {
        let g = open(10, 10);
        let none = |_| false;
        assert_eq!(geodesic_distance(&g, Cell::new(4, 4), Cell::new(4, 4), none), Some(0));
        assert_eq!(geodesic_distance(&g, Cell::new(4, 4), Cell::new(5, 4), none), Some(1));
        assert_eq!(geodesic_distance(&g, Cell::new(0, 0), Cell::new(3, 4), none), Some(7));
        let wall = |c: Cell| c.x == 1 && c.y < 9;
        assert_eq!(geodesic_distance(&g, Cell::new(0, 0), Cell::new(2, 0), wall), Some(20));
        let cut = |c: Cell| c.x == 1;
        assert_eq!(geodesic_distance(&g, Cell::new(0, 0), Cell::new(2, 0), cut), None);
    }

    #[test]
    fn reward_shape() {
        assert_eq!(reward_from_distance(Some(0), 1.25, 5.0), 1.25);
        assert_eq!(reward_from_distance(Some(5), 1.25, 5.0), 0.0);
        assert!((reward_from_distance(Some(2), 1.25, 5.0) - 0.75).abs() < 1e-15);
        assert_eq!(reward_from_distance(None, 1.25, 5.0), 0.0);
    }

    #[test]
    fn other_agent_on_landmark_blocks_goal() {
        let g = Grid::new(5, 5, vec![Cell::new(4, 4)]).unwrap();
        let goal = PhysicalGoal::new(0, 0);
        let s = WorldState::new([Cell::new(0, 0), Cell::new(4, 4)], &[Cell::new(4, 2)]);
        assert_eq!(goal_distance(&g, &s, AgentId::YELLOW, goal), None);
        // Red's own body does not block red's goal.
        assert_eq!(goal_distance(&g, &s, AgentId::RED, goal), Some(2));
    }

    #[test]
    fn costs() {
        assert_eq!(action_cost(Action::MoveNorth), 1.0);
        assert_eq!(action_cost(Action::Push), 1.0);
        assert_eq!(action_cost(Action::Stay), 0.1);
    }
}
