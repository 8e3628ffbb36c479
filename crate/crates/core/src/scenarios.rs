//! Scenario documents, the canonical layout and the 72-scenario enumeration.

use serde::{Deserialize, Serialize};

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::gridworld::{
    geodesic_distance, AgentId, Cell, Grid, LandmarkId, ObjectId, PhysicalGoal, WorldState, MAX_OBJECTS,
};
use crate::social::SocialGoal;

pub const AGENT_NAMES: [&str; 2] = ["yellow", "red"];
pub const DEFAULT_MAX_STEPS: u32 = 40;

/// A world before any goals are assigned.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub grid: Grid,
    pub landmark_names: Vec<String>,
    pub object_names: Vec<String>,
    pub initial: WorldState,
}

impl Layout {
    pub fn landmark_id(&self, name: &str) -> Option<LandmarkId> {
        self.landmark_names.iter().position(|n| n == name).map(|i| LandmarkId(i as u8))
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.object_names.iter().position(|n| n == name).map(|i| ObjectId(i as u8))
    }

    /// Object nearest `agent`'s start by path length; ties go to the lower id.
    /// Unreachable objects rank last.
    pub fn nearest_object(&self, agent: AgentId) -> ObjectId {
        let s = &self.initial;
        let from = s.agent(agent);
        let other = s.agent(agent.other());
        let best = (0..s.objects.len())
            .min_by_key(|&i| {
                let d = geodesic_distance(&self.grid, from, s.objects[i], |c| {
                    c == other || s.objects.iter().enumerate().any(|(j, &o)| j != i && o == c)
                });
                (d.unwrap_or(u32::MAX), i)
            })
            .expect("layout has objects");
        ObjectId(best as u8)
    }

    /// The object an agent with `social` is assumed to pursue: the one nearest
    /// its partner when exchanging, else the one nearest itself.
    pub fn bound_object(&self, agent: AgentId, social: SocialGoal) -> ObjectId {
        if social == SocialGoal::Exchange {
            self.nearest_object(agent.other())
        } else {
            self.nearest_object(agent)
        }
    }
}

/// Tree at (0,8), construction site at (9,1); axe, wooden log and water
/// bucket at (2,5), (7,4), (4,2); yellow starts at (1,1), red at (8,8).
pub fn canonical_layout() -> Layout {
    let grid = Grid::new(10, 10, vec![Cell::new(0, 8), Cell::new(9, 1)]).expect("static layout");
    Layout {
        grid,
        landmark_names: vec!["tree".into(), "construction_site".into()],
        object_names: vec!["axe".into(), "wooden_log".into(), "water_bucket".into()],
        initial: WorldState::new(
            [Cell::new(1, 1), Cell::new(8, 8)],
            &[Cell::new(2, 5), Cell::new(7, 4), Cell::new(4, 2)],
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentSpec {
    pub physical: PhysicalGoal,
    /// The landmark was filled in by rule rather than given.
    pub inferred: bool,
    pub social: SocialGoal,
    pub level: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: String,
    pub layout: Layout,
    pub agents: [AgentSpec; 2],
    pub max_steps: u32,
    pub config: SolveConfig,
}

impl ScenarioSpec {
    pub fn grid(&self) -> &Grid {
        &self.layout.grid
    }

    pub fn initial(&self) -> &WorldState {
        &self.layout.initial
    }

    pub fn agent(&self, a: AgentId) -> &AgentSpec {
        &self.agents[a.index()]
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.max_steps == 0 {
            return Err(Error::Invalid("max_steps must be positive".into()));
        }
        self.layout.grid.validate(&self.layout.initial)?;
        let n_obj = self.layout.initial.objects.len();
        let n_lm = self.layout.grid.landmarks().len();
        for (k, a) in self.agents.iter().enumerate() {
            if a.physical.object.0 as usize >= n_obj || a.physical.landmark.0 as usize >= n_lm {
                return Err(Error::Invalid(format!("agent {} has an unknown goal", AGENT_NAMES[k])));
            }
        }
        Ok(())
    }
}

// On-disk form. Field order here is the serialized order.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    id: String,
    grid: GridDoc,
    landmarks: Vec<PlaceDoc>,
    objects: Vec<PlaceDoc>,
    agents: Vec<AgentDoc>,
    #[serde(default = "default_max_steps")]
    max_steps: u32,
    #[serde(default)]
    config: SolveConfig,
}

fn default_max_steps() -> u32 {
    DEFAULT_MAX_STEPS
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    width: u8,
    height: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceDoc {
    id: String,
    x: u8,
    y: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    id: String,
    x: u8,
    y: u8,
    physical: PhysicalDoc,
    social: SocialGoal,
    level: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicalDoc {
    object: String,
    landmark: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    inferred: bool,
}

fn invalid(m: String) -> Error {
    Error::Invalid(m)
}

/// Parse and validate a scenario document.
pub fn load_scenario(text: &str) -> Result<ScenarioSpec> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let grid_cells = |p: &PlaceDoc| Cell::new(p.x, p.y);
    let unique = |kind: &str, ids: &[&String]| -> Result<()> {
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(invalid(format!("duplicate {kind} id {id:?}")));
            }
        }
        Ok(())
    };
    unique("landmark", &doc.landmarks.iter().map(|p| &p.id).collect::<Vec<_>>())?;
    unique("object", &doc.objects.iter().map(|p| &p.id).collect::<Vec<_>>())?;
    if doc.objects.is_empty() || doc.objects.len() > MAX_OBJECTS {
        return Err(invalid(format!("expected 1..={MAX_OBJECTS} objects, found {}", doc.objects.len())));
    }
    if doc.landmarks.is_empty() {
        return Err(invalid("no landmarks".into()));
    }
    let grid = Grid::new(doc.grid.width, doc.grid.height, doc.landmarks.iter().map(grid_cells).collect())?;
    if doc.agents.len() != 2 {
        return Err(invalid(format!("expected 2 agents, found {}", doc.agents.len())));
    }
    let mut agents_by_id = [None, None];
    for a in &doc.agents {
        let k = AGENT_NAMES
            .iter()
            .position(|n| *n == a.id)
            .ok_or_else(|| invalid(format!("unknown agent id {:?}", a.id)))?;
        if agents_by_id[k].is_some() {
            return Err(invalid(format!("duplicate agent id {:?}", a.id)));
        }
        agents_by_id[k] = Some(a);
    }
    let [Some(y), Some(r)] = agents_by_id else { unreachable!() };
    let layout = Layout {
        grid,
        landmark_names: doc.landmarks.iter().map(|p| p.id.clone()).collect(),
        object_names: doc.objects.iter().map(|p| p.id.clone()).collect(),
        initial: WorldState::new(
            [Cell::new(y.x, y.y), Cell::new(r.x, r.y)],
            &doc.objects.iter().map(grid_cells).collect::<Vec<_>>(),
        ),
    };
    let spec_of = |a: &AgentDoc| -> Result<AgentSpec> {
        let object = layout
            .object_id(&a.physical.object)
            .ok_or_else(|| invalid(format!("agent {:?}: unknown object {:?}", a.id, a.physical.object)))?;
        let landmark = layout
            .landmark_id(&a.physical.landmark)
            .ok_or_else(|| invalid(format!("agent {:?}: unknown landmark {:?}", a.id, a.physical.landmark)))?;
        Ok(AgentSpec {
            physical: PhysicalGoal { object, landmark },
            inferred: a.physical.inferred,
            social: a.social,
            level: a.level,
        })
    };
    let spec = ScenarioSpec {
        id: doc.id,
        agents: [spec_of(y)?, spec_of(r)?],
        layout,
        max_steps: doc.max_steps,
        config: doc.config,
    };
    spec.validate()?;
    Ok(spec)
}

/// Canonical JSON form of a scenario.
pub fn scenario_to_json(spec: &ScenarioSpec) -> String {
    let l = &spec.layout;
    let place = |names: &[String], cells: &[Cell]| -> Vec<PlaceDoc> {
        names.iter().zip(cells).map(|(n, c)| PlaceDoc { id: n.clone(), x: c.x, y: c.y }).collect()
    };
    let doc = Doc {
        id: spec.id.clone(),
        grid: GridDoc { width: l.grid.width(), height: l.grid.height() },
        landmarks: place(&l.landmark_names, l.grid.landmarks()),
        objects: place(&l.object_names, &l.initial.objects),
        agents: AgentId::BOTH
            .iter()
            .map(|&k| {
                let a = spec.agent(k);
                let c = l.initial.agent(k);
                AgentDoc {
                    id: AGENT_NAMES[k.index()].into(),
                    x: c.x,
                    y: c.y,
                    physical: PhysicalDoc {
                        object: l.object_names[a.physical.object.0 as usize].clone(),
                        landmark: l.landmark_names[a.physical.landmark.0 as usize].clone(),
                        inferred: a.inferred,
                    },
                    social: a.social,
                    level: a.level,
                }
            })
            .collect(),
        max_steps: spec.max_steps,
        config: spec.config,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("scenario serializes");
    s.push('\n');
    s
}

/// Landmark given for each agent in the 72 enumerated scenarios: `T` tree,
/// `C` construction site, `-` left blank. Rows run S1..S72.
const YELLOW_GIVEN: &str = concat!(
    "TCTTCT", "TCTTCT", "CCT-TC", "------", "CTTTCT", "CCTCTC", "------", "------", "------", "------", "--T---",
    "------",
);
const RED_GIVEN: &str = concat!(
    "CTCCTC", "CTCCTC", "TTC-CT", "------", "T-----", "----C-", "TCTTCC", "C-TCCC", "C--T--", "------", "--T---",
    "------",
);

/// Yellow's social goal varies slowest, red's fastest, in these orders.
const YELLOW_ORDER: [SocialGoal; 6] = [
    SocialGoal::None,
    SocialGoal::Cooperation,
    SocialGoal::Conflict,
    SocialGoal::Competition,
    SocialGoal::Coercion,
    SocialGoal::Exchange,
];
const RED_ORDER: [SocialGoal; 6] = [
    SocialGoal::Cooperation,
    SocialGoal::Conflict,
    SocialGoal::Competition,
    SocialGoal::Coercion,
    SocialGoal::Exchange,
    SocialGoal::None,
];

const TREE: LandmarkId = LandmarkId(0);
const SITE: LandmarkId = LandmarkId(1);

fn given(table: &str, i: usize) -> Option<LandmarkId> {
    match table.as_bytes()[i] {
        b'T' => Some(TREE),
        b'C' => Some(SITE),
        _ => None,
    }
}

fn opposite(l: LandmarkId) -> LandmarkId {
    if l == TREE {
        SITE
    } else {
        TREE
    }
}

/// Landmarks and fill flags for scenario `i` (0-based). The first 36 rows give
/// the agents different landmarks, the last 36 the same one.
fn landmarks_for(i: usize) -> [(LandmarkId, bool); 2] {
    let same = i >= 36;
    match (given(YELLOW_GIVEN, i), given(RED_GIVEN, i)) {
        (Some(y), Some(r)) => [(y, false), (r, false)],
        (Some(y), None) => [(y, false), (if same { y } else { opposite(y) }, true)],
        (None, Some(r)) => [(if same { r } else { opposite(r) }, true), (r, false)],
        (None, None) => [(TREE, true), (if same { TREE } else { SITE }, true)],
    }
}

pub const YELLOW_LEVEL: u8 = 2;
pub const RED_LEVEL: u8 = 1;

/// The 72 scenarios on `layout`, S1..S72. The layout must name a tree and a
/// construction site as landmarks 0 and 1.
pub fn enumerate_scenarios(layout: &Layout) -> Vec<ScenarioSpec> {
    let mut out = Vec::with_capacity(72);
    for i in 0..72 {
        let socials = [YELLOW_ORDER[(i % 36) / 6], RED_ORDER[i % 6]];
        let lms = landmarks_for(i);
        let levels = [YELLOW_LEVEL, RED_LEVEL];
        let agents = [0, 1].map(|k| {
            let id = AgentId(k as u8);
            AgentSpec {
                physical: PhysicalGoal { object: layout.bound_object(id, socials[k]), landmark: lms[k].0 },
                inferred: lms[k].1,
                social: socials[k],
                level: levels[k],
            }
        });
        out.push(ScenarioSpec {
            id: format!("S{}", i + 1),
            layout: layout.clone(),
            agents,
            max_steps: DEFAULT_MAX_STEPS,
            config: SolveConfig::default(),
        });
    }
    out
}

/// Look up an enumerated scenario by id.
pub fn canonical_scenario(id: &str) -> Result<ScenarioSpec> {
    enumerate_scenarios(&canonical_layout())
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownScenario(id.into()))
}

/// Red needs the log at the construction site, and the log lies on yellow's
/// side of the map. Yellow (level 2, `yellow_social`) wants the bucket at the
/// tree; red is a level-1 agent with no social goal.
pub fn cooperation_fixture(yellow_social: SocialGoal) -> ScenarioSpec {
    let grid = Grid::new(10, 10, vec![Cell::new(0, 8), Cell::new(9, 1)]).expect("static layout");
    let layout = Layout {
        grid,
        landmark_names: vec!["tree".into(), "construction_site".into()],
        object_names: vec!["wooden_log".into(), "water_bucket".into()],
        initial: WorldState::new([Cell::new(1, 1), Cell::new(9, 9)], &[Cell::new(5, 1), Cell::new(1, 3)]),
    };
    let agent = |physical, social, level| AgentSpec { physical, inferred: false, social, level };
    ScenarioSpec {
        id: format!("cooperation-{}", yellow_social.name()),
        layout,
        agents: [
            agent(PhysicalGoal::new(1, 0), yellow_social, YELLOW_LEVEL),
            agent(PhysicalGoal::new(0, 1), SocialGoal::None, RED_LEVEL),
        ],
        max_steps: DEFAULT_MAX_STEPS,
        config: SolveConfig::default(),
    }
}

/// Canonical layout with crossed goals: yellow wants the log (nearer red) at
/// the tree, red wants the bucket (nearer yellow) at the construction site.
pub fn exchange_fixture(socials: [SocialGoal; 2], levels: [u8; 2]) -> ScenarioSpec {
    let layout = canonical_layout();
    let goal = |o: &str, l: &str| PhysicalGoal {
        object: layout.object_id(o).expect("canonical object"),
        landmark: layout.landmark_id(l).expect("canonical landmark"),
    };
    let physical = [goal("wooden_log", "tree"), goal("water_bucket", "construction_site")];
    ScenarioSpec {
        id: format!("exchange-{}-{}", socials[0].name(), socials[1].name()),
        agents: [0, 1].map(|k| AgentSpec {
            physical: physical[k],
            inferred: false,
            social: socials[k],
            level: levels[k],
        }),
        layout,
        max_steps: DEFAULT_MAX_STEPS,
        config: SolveConfig::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_on_canonical_layout() {
        let l = canonical_layout();
        assert_eq!(l.nearest_object(AgentId::YELLOW), ObjectId(2));
        assert_eq!(l.nearest_object(AgentId::RED), ObjectId(1));
        assert_eq!(l.bound_object(AgentId::YELLOW, SocialGoal::Exchange), ObjectId(1));
    }

    #[test]
    fn blocks_fill_as_described() {
        assert_eq!(landmarks_for(15), [(TREE, true), (SITE, true)]);
        assert_eq!(landmarks_for(25), [(TREE, false), (SITE, true)]);
        assert_eq!(landmarks_for(37), [(SITE, true), (SITE, false)]);
        assert_eq!(landmarks_for(43), [(TREE, true), (TREE, true)]);
        assert_eq!(landmarks_for(62), [(TREE, false), (TREE, false)]);
    }

    #[test]
    fn parse_error_has_location() {
        let e = load_scenario("{\n  \"id\": 3\n}").unwrap_err();
        assert!(matches!(e, Error::Parse { ref location, .. } if location.starts_with("line 2")));
    }
}
