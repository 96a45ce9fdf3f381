//! Scenario files: arena, obstacles, robot starts and config overrides.
//!
//! ```toml
//! format_version = 1
//! name = "two_boxes"
//!
//! [world]
//! bounds = { min = [-0.75, -0.75], max = [0.75, 0.75] }
//!
//! [[world.obstacles]]
//! kind = "rect"            # or "circle" (center, radius), "polygon" (vertices)
//! min = [0.1, 0.1]
//! max = [0.3, 0.3]
//!
//! [robots]
//! starts = [[-0.5, -0.5], [0.5, -0.5]]
//! count = 4                # optional; extra robots are placed at random
//! jitter = 0.02            # optional per-axis start perturbation
//!
//! [config]                 # any SimConfig field
//! points_to_log = 30
//! ```

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::engine::{validate_starts, SimConfig};
use crate::geometry::{euclidean, Rect, Shape, Vec2};
use crate::world::World;

pub const FORMAT_VERSION: u32 = 1;

/// The bundled arena used by the examples and the acceptance checks.
pub const PAPER_ARENA: &str = include_str!("../../scenarios/paper_arena.toml");

const PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    format_version: u32,
    name: String,
    world: WorldSpec,
    robots: RobotsSpec,
    #[serde(default)]
    config: SimConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldSpec {
    bounds: BoundsSpec,
    #[serde(default)]
    obstacles: Vec<ShapeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsSpec {
    min: Vec2,
    max: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeSpec {
    Circle { center: Vec2, radius: f64 },
    Rect { min: Vec2, max: Vec2 },
    Polygon { vertices: Vec<Vec2> },
}

impl ShapeSpec {
    fn from_shape(s: &Shape) -> Self {
        match s {
            Shape::Circle { center, radius } => ShapeSpec::Circle {
                center: *center,
                radius: *radius,
            },
            Shape::Rect(r) => ShapeSpec::Rect {
                min: r.min(),
                max: r.max(),
            },
            Shape::ConvexPolygon(v) => ShapeSpec::Polygon {
                vertices: v.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotsSpec {
    #[serde(default)]
    starts: Vec<Vec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<usize>,
    #[serde(default)]
    jitter: f64,
    #[serde(default = "default_spacing")]
    spacing: f64,
}

fn default_spacing() -> f64 {
    0.15
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub world: World,
    /// Listed start positions, before jitter.
    pub starts: Vec<Vec2>,
    /// Team size; robots beyond the listed starts are placed at random.
    pub team_size: usize,
    /// Listed starts are shifted by up to this much on each axis.
    pub jitter: f64,
    /// Minimum center distance between randomly placed robots.
    pub spacing: f64,
    pub config: SimConfig,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self, HarnessError> {
        let file: ScenarioFile = toml::from_str(src).map_err(|e| HarnessError::Parse {
            line: e.span().map_or(0, |s| line_of(src, s.start)),
            message: e.message().trim().to_string(),
        })?;
        Scenario::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let src = std::fs::read_to_string(path)?;
        Scenario::parse(&src)
    }

    /// Loads `name_or_path`, accepting `paper_arena` for the bundled scenario
    /// when no such file exists.
    pub fn resolve(name_or_path: &str) -> Result<Self, HarnessError> {
        let path = Path::new(name_or_path);
        if !path.exists() && name_or_path == "paper_arena" {
            return Scenario::paper_arena();
        }
        Scenario::load(path)
    }

    pub fn paper_arena() -> Result<Self, HarnessError> {
        Scenario::parse(PAPER_ARENA)
    }

    fn from_file(file: ScenarioFile) -> Result<Self, HarnessError> {
        let invalid = |msg: String| Err(HarnessError::InvalidScenario(msg));
        if file.format_version != FORMAT_VERSION {
            return invalid(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            ));
        }
        let bounds = Rect::new(file.world.bounds.min, file.world.bounds.max)
            .map_err(|e| HarnessError::InvalidScenario(format!("bounds: {e}")))?;
        let mut obstacles = Vec::new();
        for (i, spec) in file.world.obstacles.into_iter().enumerate() {
            let shape = match spec {
                ShapeSpec::Circle { center, radius } => Shape::circle(center, radius),
                ShapeSpec::Rect { min, max } => Shape::rect(min, max),
                ShapeSpec::Polygon { vertices } => Shape::convex_polygon(vertices),
            }
            .map_err(|e| HarnessError::InvalidScenario(format!("obstacle {i}: {e}")))?;
            obstacles.push(shape);
        }
        let world = World::new(bounds, obstacles, file.config.walls_are_tactile)
            .map_err(|e| HarnessError::InvalidScenario(e.to_string()))?;
        file.config.validate().map_err(super::invalid)?;
        let r = file.robots;
        let team_size = r.count.unwrap_or(r.starts.len());
        if team_size == 0 {
            return invalid("scenario has no robots".into());
        }
        if !(r.jitter.is_finite() && r.jitter >= 0.0) {
            return invalid(format!("jitter must be non-negative, got {}", r.jitter));
        }
        if !(r.spacing.is_finite() && r.spacing >= 0.0) {
            return invalid(format!("spacing must be non-negative, got {}", r.spacing));
        }
        let listed = &r.starts[..team_size.min(r.starts.len())];
        if !listed.is_empty() {
            validate_starts(&world, listed, &file.config).map_err(super::invalid)?;
        }
        let scenario = Scenario {
            name: file.name,
            world,
            starts: r.starts,
            team_size,
            jitter: r.jitter,
            spacing: r.spacing,
            config: file.config,
        };
        // Surfaces unplaceable teams at load time rather than mid-sweep.
        scenario.starts_for_seed(scenario.config.seed)?;
        Ok(scenario)
    }

    /// The same scenario with `n` robots.
    pub fn with_team_size(mut self, n: usize) -> Self {
        self.team_size = n;
        self
    }

    /// Start positions for one run: the listed starts (first `team_size` of
    /// them), jittered, then random placements for the rest. All randomness
    /// comes from `seed`.
    pub fn starts_for_seed(&self, seed: u64) -> Result<Vec<Vec2>, HarnessError> {
        if self.team_size == 0 {
            return Err(HarnessError::InvalidScenario(
                "scenario has no robots".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = self.config.robot_radius;
        let d_min = self.config.d_min();
        let mut placed: Vec<Vec2> = Vec::with_capacity(self.team_size);
        for &p in self.starts.iter().take(self.team_size) {
            if self.jitter == 0.0 {
                placed.push(p);
                continue;
            }
            let fits = |q: Vec2, placed: &[Vec2]| {
                self.world.is_free(q, radius, 0.0)
                    && placed.iter().all(|&o| euclidean(o, q) >= d_min)
            };
            let q = (0..PLACEMENT_ATTEMPTS)
                .map(|_| {
                    p + Vec2::new(
                        rng.gen_range(-self.jitter..=self.jitter),
                        rng.gen_range(-self.jitter..=self.jitter),
                    )
                })
                .find(|&q| fits(q, &placed))
                // The unjittered start was validated at load time.
                .unwrap_or(p);
            placed.push(q);
        }
        let b = self.world.bounds();
        let (lo, hi) = (b.min(), b.max());
        let spacing = self.spacing.max(d_min);
        while placed.len() < self.team_size {
            let found = (0..PLACEMENT_ATTEMPTS)
                .map(|_| {
                    Vec2::new(
                        rng.gen_range(lo.x + radius..=hi.x - radius),
                        rng.gen_range(lo.y + radius..=hi.y - radius),
                    )
                })
                .find(|&q| {
                    self.world.is_free(q, radius, 0.01)
                        && placed.iter().all(|&o| euclidean(o, q) >= spacing)
                });
            match found {
                Some(q) => placed.push(q),
                None => {
                    return Err(HarnessError::InvalidScenario(format!(
                        "could not place robot {} after {PLACEMENT_ATTEMPTS} attempts",
                        placed.len()
                    )))
                }
            }
        }
        validate_starts(&self.world, &placed, &self.config).map_err(super::invalid)?;
        Ok(placed)
    }

    /// Serializes the scenario with `starts` as the listed starts, no jitter
    /// and every config field spelled out. Loading the result reproduces the
    /// run without any randomness.
    pub fn to_toml_with_starts(&self, starts: &[Vec2]) -> Result<String, HarnessError> {
        let file = ScenarioFile {
            format_version: FORMAT_VERSION,
            name: self.name.clone(),
            world: WorldSpec {
                bounds: BoundsSpec {
                    min: self.world.bounds().min(),
                    max: self.world.bounds().max(),
                },
                obstacles: self
                    .world
                    .obstacles()
                    .iter()
                    .map(ShapeSpec::from_shape)
                    .collect(),
            },
            robots: RobotsSpec {
                starts: starts.to_vec(),
                count: None,
                jitter: 0.0,
                spacing: self.spacing,
            },
            config: self.config.clone(),
        };
        toml::to_string(&file).map_err(|e| HarnessError::InvalidScenario(e.to_string()))
    }
}

/// Applies a table of `SimConfig` field overrides on top of `base`.
pub fn apply_overrides(
    base: &SimConfig,
    overrides: &toml::Table,
) -> Result<SimConfig, HarnessError> {
    if overrides.is_empty() {
        return Ok(base.clone());
    }
    let mut table = toml::Table::try_from(base)
        .map_err(|e| HarnessError::InvalidScenario(format!("config: {e}")))?;
    for (k, v) in overrides {
        table.insert(k.clone(), v.clone());
    }
    let cfg: SimConfig = table.try_into().map_err(|e: toml::de::Error| {
        HarnessError::InvalidScenario(format!("config: {}", e.message().trim()))
    })?;
    cfg.validate()
        .map_err(|e| HarnessError::InvalidScenario(e.to_string()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ROBOTS: &str = r#"
format_version = 1
name = "t"

[world]
bounds = { min = [0.0, 0.0], max = [1.0, 1.0] }

[[world.obstacles]]
kind = "circle"
center = [0.5, 0.5]
radius = 0.1

[robots]
starts = [[0.2, 0.2], [0.8, 0.8]]
"#;

    #[test]
    fn bundled_arena_parameters() {
        let s = Scenario::paper_arena().unwrap();
        assert_eq!(s.name, "paper_arena");
        assert_eq!(s.world.bounds().width(), 1.5);
        assert_eq!(s.world.bounds().height(), 1.5);
        assert_eq!(s.world.obstacles().len(), 3);
        assert_eq!(s.config.goal_radius, 0.3);
        assert_eq!(s.config.candidate_count, 360);
        assert_eq!(s.config.points_to_log, 100);
        assert_eq!(s.team_size, 3);
    }

    #[test]
    fn defaults_fill_missing_config() {
        let s = Scenario::parse(TWO_ROBOTS).unwrap();
        assert_eq!(s.config, SimConfig::default());
        assert_eq!(
            s.starts_for_seed(7).unwrap(),
            vec![Vec2::new(0.2, 0.2), Vec2::new(0.8, 0.8)]
        );
    }

    #[test]
    fn close_starts_are_invalid() {
        let src = TWO_ROBOTS.replace("[0.8, 0.8]", "[0.21, 0.2]");
        assert!(matches!(
            Scenario::parse(&src),
            Err(HarnessError::InvalidScenario(_))
        ));
    }

    #[test]
    fn zero_robots_are_invalid() {
        let src = TWO_ROBOTS.replace("starts = [[0.2, 0.2], [0.8, 0.8]]", "starts = []");
        assert!(matches!(
            Scenario::parse(&src),
            Err(HarnessError::InvalidScenario(_))
        ));
    }

    #[test]
    fn start_inside_obstacle_is_invalid() {
        let src = TWO_ROBOTS.replace("[0.8, 0.8]", "[0.5, 0.52]");
        assert!(matches!(
            Scenario::parse(&src),
            Err(HarnessError::InvalidScenario(_))
        ));
    }

    #[test]
    fn unknown_field_reports_line() {
        let src = TWO_ROBOTS.replace("radius = 0.1", "radius = 0.1\ncolour = \"red\"");
        match Scenario::parse(&src) {
            Err(HarnessError::Parse { line, message }) => {
                assert!(message.contains("colour"), "{message}");
                // Reported at the obstacle table header.
                assert_eq!(line, 8);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_config_value_is_a_parse_error() {
        let src = format!("{TWO_ROBOTS}\n[config]\npoints_to_log = \"many\"\n");
        match Scenario::parse(&src) {
            Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 17),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn count_without_starts_places_everyone() {
        let src = TWO_ROBOTS.replace("starts = [[0.2, 0.2], [0.8, 0.8]]", "count = 3");
        let s = Scenario::parse(&src).unwrap();
        assert_eq!(s.starts_for_seed(1).unwrap().len(), 3);
    }

    #[test]
    fn wrong_version_is_rejected() {
        let src = TWO_ROBOTS.replace("format_version = 1", "format_version = 2");
        assert!(matches!(
            Scenario::parse(&src),
            Err(HarnessError::InvalidScenario(_))
        ));
    }

    #[test]
    fn extra_robots_are_placed_deterministically() {
        let s = Scenario::parse(TWO_ROBOTS).unwrap().with_team_size(6);
        let a = s.starts_for_seed(3).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a, s.starts_for_seed(3).unwrap());
        assert_ne!(a, s.starts_for_seed(4).unwrap());
        assert_eq!(&a[..2], &s.starts[..]);
        for i in 0..a.len() {
            assert!(s.world.is_free(a[i], s.config.robot_radius, 0.0));
            for j in (i + 1)..a.len() {
                assert!(euclidean(a[i], a[j]) >= s.config.d_min());
            }
        }
    }

    #[test]
    fn jitter_stays_within_bounds() {
        let s = Scenario::paper_arena().unwrap();
        let starts = s.starts_for_seed(11).unwrap();
        for (p, q) in starts.iter().zip(&s.starts) {
            assert!((p.x - q.x).abs() <= s.jitter && (p.y - q.y).abs() <= s.jitter);
        }
    }

    #[test]
    fn resolved_copy_round_trips() {
        let s = Scenario::paper_arena().unwrap();
        let starts = s.starts_for_seed(5).unwrap();
        let text = s.to_toml_with_starts(&starts).unwrap();
        let back = Scenario::parse(&text).unwrap();
        assert_eq!(back.starts, starts);
        assert_eq!(back.config, s.config);
        assert_eq!(back.world, s.world);
        assert_eq!(back.starts_for_seed(99).unwrap(), starts);
    }

    #[test]
    fn overrides_layer_on_config() {
        let mut t = toml::Table::new();
        t.insert("points_to_log".into(), toml::Value::Integer(30));
        t.insert("r_comm".into(), toml::Value::Float(0.4));
        let cfg = apply_overrides(&SimConfig::default(), &t).unwrap();
        assert_eq!(cfg.points_to_log, 30);
        assert_eq!(cfg.r_comm, 0.4);
        assert_eq!(cfg.dt, SimConfig::default().dt);
        t.insert("no_such_field".into(), toml::Value::Boolean(true));
        assert!(apply_overrides(&SimConfig::default(), &t).is_err());
    }
}
