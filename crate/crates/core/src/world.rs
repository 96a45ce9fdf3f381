//! The bounded workspace, its obstacles, and the tactile contact query.

use thiserror::Error;

use crate::geometry::{euclidean, GeometryError, Rect, Shape, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("point {0:?} is outside the workspace bounds")]
    OutOfBounds(Vec2),
    #[error("obstacle {0} does not intersect the workspace bounds")]
    ObstacleOutside(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// What a tactile detection touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactSource {
    Obstacle(usize),
    Wall,
}

/// A fired tactile detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    /// Nearest point on the touched surface.
    pub point: Vec2,
    pub source: ContactSource,
    /// Center-to-surface distance (negative if the center is inside an obstacle).
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    bounds: Rect,
    obstacles: Vec<Shape>,
    walls_are_tactile: bool,
}

impl World {
    pub fn new(
        bounds: Rect,
        obstacles: Vec<Shape>,
        walls_are_tactile: bool,
    ) -> Result<Self, WorldError> {
        for (i, s) in obstacles.iter().enumerate() {
            let (lo, hi) = s.bounding_box();
            let overlaps = lo.x < bounds.max().x
                && hi.x > bounds.min().x
                && lo.y < bounds.max().y
                && hi.y > bounds.min().y;
            if !overlaps {
                return Err(WorldError::ObstacleOutside(i));
            }
        }
        Ok(World {
            bounds,
            obstacles,
            walls_are_tactile,
        })
    }

    /// Empty square arena of the given side length centered on the origin.
    pub fn empty_square(side: f64, walls_are_tactile: bool) -> Result<Self, WorldError> {
        World::new(
            Rect::centered_square(side / 2.0)?,
            Vec::new(),
            walls_are_tactile,
        )
    }

    pub fn bounds(&self) -> &Rect {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Shape] {
        &self.obstacles
    }

    pub fn walls_are_tactile(&self) -> bool {
        self.walls_are_tactile
    }

    /// Nearest wall point and the center-to-wall distance, for a point inside
    /// the bounds. Sides are checked left, right, bottom, top.
    pub fn nearest_wall(&self, p: Vec2) -> (Vec2, f64) {
        let (lo, hi) = (self.bounds.min(), self.bounds.max());
        let sides = [
            (p.x - lo.x, Vec2::new(lo.x, p.y)),
            (hi.x - p.x, Vec2::new(hi.x, p.y)),
            (p.y - lo.y, Vec2::new(p.x, lo.y)),
            (hi.y - p.y, Vec2::new(p.x, hi.y)),
        ];
        let mut best = sides[0];
        for s in &sides[1..] {
            if s.0 < best.0 {
                best = *s;
            }
        }
        (best.1, best.0)
    }

    /// Distance from `p` to the nearest surface the robots can touch:
    /// any obstacle boundary, or a wall when walls are tactile.
    pub fn distance_to_nearest_surface(&self, p: Vec2) -> f64 {
        let mut d = self
            .obstacles
            .iter()
            .map(|s| s.signed_distance(p).abs())
            .fold(f64::INFINITY, f64::min);
        if self.walls_are_tactile {
            let (lo, hi) = (self.bounds.min(), self.bounds.max());
            let wall = if self.bounds.contains(p) {
                self.nearest_wall(p).1
            } else {
                euclidean(p, Vec2::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y)))
            };
            d = d.min(wall);
        }
        d
    }

    /// Tactile detection for a disc robot. Fires when some surface lies within
    /// `robot_radius + tactile_range` of the center. The nearest surface
    /// wins; ties go to the lowest obstacle index, walls last.
    pub fn contact_query(
        &self,
        robot_center: Vec2,
        robot_radius: f64,
        tactile_range: f64,
    ) -> Result<Option<Contact>, WorldError> {
        if !self.bounds.contains(robot_center) {
            return Err(WorldError::OutOfBounds(robot_center));
        }
        let reach = robot_radius + tactile_range;
        let mut best: Option<Contact> = None;
        for (i, s) in self.obstacles.iter().enumerate() {
            let (point, distance) = s.closest_boundary_point(robot_center);
            if distance <= reach && best.is_none_or(|b| distance < b.distance) {
                best = Some(Contact {
                    point,
                    source: ContactSource::Obstacle(i),
                    distance,
                });
            }
        }
        if self.walls_are_tactile {
            let (point, distance) = self.nearest_wall(robot_center);
            if distance <= reach && best.is_none_or(|b| distance < b.distance) {
                best = Some(Contact {
                    point,
                    source: ContactSource::Wall,
                    distance,
                });
            }
        }
        Ok(best)
    }

    /// Nearest point to `p` at which a disc of `robot_radius` lies fully inside
    /// the bounds.
    pub fn clamp_to_bounds(&self, p: Vec2, robot_radius: f64) -> Vec2 {
        let (lo, hi) = (self.bounds.min(), self.bounds.max());
        Vec2::new(
            p.x.clamp(lo.x + robot_radius, hi.x - robot_radius),
            p.y.clamp(lo.y + robot_radius, hi.y - robot_radius),
        )
    }

    /// Pushes a disc out of any obstacle it overlaps so that its center sits at
    /// least `robot_radius` from every obstacle surface. Obstacles are resolved
    /// in index order for a few passes; the result is clamped to bounds.
    pub fn resolve_penetration(&self, mut p: Vec2, robot_radius: f64) -> Vec2 {
        for _ in 0..4 {
            let mut moved = false;
            for s in &self.obstacles {
                let (q, d) = s.closest_boundary_point(p);
                if d < robot_radius {
                    let outward = if d < 0.0 { q - p } else { p - q };
                    // A center exactly on the boundary has no direction to
                    // push along; fall back to the bounding-box center.
                    let dir = outward.normalized().unwrap_or_else(|| {
                        let (lo, hi) = s.bounding_box();
                        (q - (lo + hi) * 0.5)
                            .normalized()
                            .unwrap_or(Vec2::new(1.0, 0.0))
                    });
                    p = q + dir * robot_radius;
                    moved = true;
                }
            }
            p = self.clamp_to_bounds(p, robot_radius);
            if !moved {
                break;
            }
        }
        p
    }

    /// True when a disc of `robot_radius` at `p` lies inside bounds and clear
    /// of every obstacle by at least `margin`.
    pub fn is_free(&self, p: Vec2, robot_radius: f64, margin: f64) -> bool {
        let (lo, hi) = (self.bounds.min(), self.bounds.max());
        let r = robot_radius + margin;
        p.x - r >= lo.x
            && p.x + r <= hi.x
            && p.y - r >= lo.y
            && p.y + r <= hi.y
            && self.obstacles.iter().all(|s| s.signed_distance(p) >= r)
    }
}

/// Free-function form of [`World::contact_query`].
pub fn contact_query(
    robot_center: Vec2,
    robot_radius: f64,
    tactile_range: f64,
    world: &World,
) -> Result<Option<Contact>, WorldError> {
    world.contact_query(robot_center, robot_radius, tactile_range)
}

/// Free-function form of [`World::clamp_to_bounds`].
pub fn clamp_to_bounds(p: Vec2, robot_radius: f64, world: &World) -> Vec2 {
    world.clamp_to_bounds(p, robot_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const R: f64 = 0.037;
    const RANGE: f64 = 0.005;

    fn arena(tactile: bool) -> World {
        World::empty_square(1.5, tactile).unwrap()
    }

    #[test]
    fn touches_small_circle() {
        let w = World::new(
            Rect::centered_square(0.75).unwrap(),
            vec![Shape::circle(Vec2::new(0.55, 0.0), 0.01).unwrap()],
            true,
        )
        .unwrap();
        let c = w
            .contact_query(Vec2::new(0.5, 0.0), R, RANGE)
            .unwrap()
            .unwrap();
        assert_eq!(c.source, ContactSource::Obstacle(0));
        assert_abs_diff_eq!(c.point.x, 0.54, epsilon = 1e-12);
        assert_abs_diff_eq!(c.point.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn center_of_empty_arena_is_free() {
        assert_eq!(
            arena(true).contact_query(Vec2::ZERO, R, RANGE).unwrap(),
            None
        );
    }

    #[test]
    fn touches_wall() {
        let c = arena(true)
            .contact_query(Vec2::new(0.712, 0.0), R, RANGE)
            .unwrap()
            .unwrap();
        assert_eq!(c.source, ContactSource::Wall);
        assert_eq!(c.point, Vec2::new(0.75, 0.0));
    }

    #[test]
    fn walls_can_be_disabled() {
        assert_eq!(
            arena(false)
                .contact_query(Vec2::new(0.74, 0.0), R, RANGE)
                .unwrap(),
            None
        );
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        assert!(matches!(
            arena(true).contact_query(Vec2::new(0.8, 0.0), R, RANGE),
            Err(WorldError::OutOfBounds(_))
        ));
    }

    #[test]
    fn nearest_surface_wins_and_ties_go_to_lowest_index() {
        let w2 = World::new(
            Rect::centered_square(0.75).unwrap(),
            vec![Shape::rect(Vec2::new(0.66, -0.2), Vec2::new(0.7, 0.2)).unwrap()],
            true,
        )
        .unwrap();
        // 0.04 to the rect's left face at 0.66 and 0.13 to the wall.
        let c = w2
            .contact_query(Vec2::new(0.62, 0.0), R, RANGE)
            .unwrap()
            .unwrap();
        assert_eq!(c.source, ContactSource::Obstacle(0));
        // Equidistant from two obstacles: lowest index.
        let w3 = World::new(
            Rect::centered_square(0.75).unwrap(),
            vec![
                Shape::circle(Vec2::new(0.05, 0.0), 0.01).unwrap(),
                Shape::circle(Vec2::new(-0.05, 0.0), 0.01).unwrap(),
            ],
            true,
        )
        .unwrap();
        let c = w3.contact_query(Vec2::ZERO, R, RANGE).unwrap().unwrap();
        assert_eq!(c.source, ContactSource::Obstacle(0));
    }

    #[test]
    fn clamp_examples() {
        let w = arena(true);
        let p = w.clamp_to_bounds(Vec2::new(0.9, 0.0), R);
        assert_abs_diff_eq!(p.x, 0.713, epsilon = 1e-12);
        assert_eq!(p.y, 0.0);
        assert_eq!(w.clamp_to_bounds(Vec2::ZERO, R), Vec2::ZERO);
        let p = w.clamp_to_bounds(Vec2::new(0.9, 0.9), R);
        assert_abs_diff_eq!(p.x, 0.713, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.713, epsilon = 1e-12);
    }

    #[test]
    fn obstacle_outside_bounds_rejected() {
        let r = World::new(
            Rect::centered_square(0.75).unwrap(),
            vec![Shape::circle(Vec2::new(3.0, 0.0), 0.1).unwrap()],
            true,
        );
        assert_eq!(r, Err(WorldError::ObstacleOutside(0)));
    }

    #[test]
    fn penetration_is_resolved_to_contact_distance() {
        let w = World::new(
            Rect::centered_square(0.75).unwrap(),
            vec![
                Shape::circle(Vec2::new(0.0, 0.0), 0.1).unwrap(),
                Shape::rect(Vec2::new(0.3, 0.3), Vec2::new(0.5, 0.5)).unwrap(),
            ],
            true,
        )
        .unwrap();
        for p in [
            Vec2::new(0.12, 0.0),
            Vec2::new(0.0, -0.05),
            Vec2::new(0.41, 0.45),
        ] {
            let q = w.resolve_penetration(p, R);
            for s in w.obstacles() {
                assert!(s.signed_distance(q) >= R - 1e-9, "{q:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn monotone_in_range(x in -0.7..0.7f64, y in -0.7..0.7f64, e in 0.0..0.05f64, extra in 0.0..0.05f64) {
            let w = World::new(
                Rect::centered_square(0.75).unwrap(),
                vec![
                    Shape::circle(Vec2::new(-0.3, 0.2), 0.12).unwrap(),
                    Shape::rect(Vec2::new(0.1, -0.4), Vec2::new(0.3, -0.2)).unwrap(),
                ],
                true,
            ).unwrap();
            let p = Vec2::new(x, y);
            prop_assume!(w.obstacles().iter().all(|s| !s.contains(p)));
            if w.contact_query(p, R, e).unwrap().is_some() {
                prop_assert!(w.contact_query(p, R, e + extra).unwrap().is_some());
            }
            if let Some(c) = w.contact_query(p, R, e).unwrap() {
                prop_assert!(euclidean(p, c.point) <= R + e + 1e-9);
            }
        }

        #[test]
        fn never_fires_without_surfaces(x in -0.75..0.75f64, y in -0.75..0.75f64) {
            prop_assert_eq!(arena(false).contact_query(Vec2::new(x, y), R, RANGE).unwrap(), None);
        }
    }
}
