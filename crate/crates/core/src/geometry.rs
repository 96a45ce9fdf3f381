//! Planar primitives and exact distance queries.
//!
//! Everything here is a plain value type. Shapes are validated on
//! construction so the distance routines can assume well-formed input.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("circle radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("rectangle min {min:?} must be strictly below max {max:?}")]
    BadRect { min: Vec2, max: Vec2 },
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon must be strictly convex and counter-clockwise (fails at vertex {0})")]
    NotConvexCcw(usize),
}

/// A point or displacement in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Euclidean distance `‖a − b‖`.
pub fn euclidean(a: Vec2, b: Vec2) -> f64 {
    (a - b).norm()
}

/// Axis-aligned rectangle with `min < max` componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    min: Vec2,
    max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self, GeometryError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(GeometryError::NonFinite("rectangle"));
        }
        if !(min.x < max.x && min.y < max.y) {
            return Err(GeometryError::BadRect { min, max });
        }
        Ok(Rect { min, max })
    }

    /// Square of side `2 * half` centered on the origin.
    pub fn centered_square(half: f64) -> Result<Self, GeometryError> {
        Rect::new(Vec2::new(-half, -half), Vec2::new(half, half))
    }

    pub fn min(&self) -> Vec2 {
        self.min
    }

    pub fn max(&self) -> Vec2 {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        euclidean(self.min, self.max)
    }

    /// Closed containment.
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Obstacle geometry. Construct through [`Shape::circle`], [`Shape::rect`]
/// or [`Shape::convex_polygon`] so the invariants hold.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle {
        center: Vec2,
        radius: f64,
    },
    Rect(Rect),
    /// Counter-clockwise, strictly convex.
    ConvexPolygon(Vec<Vec2>),
}

impl Shape {
    pub fn circle(center: Vec2, radius: f64) -> Result<Shape, GeometryError> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(GeometryError::NonFinite("circle"));
        }
        if radius <= 0.0 {
            return Err(GeometryError::BadRadius(radius));
        }
        Ok(Shape::Circle { center, radius })
    }

    pub fn rect(min: Vec2, max: Vec2) -> Result<Shape, GeometryError> {
        Rect::new(min, max).map(Shape::Rect)
    }

    pub fn convex_polygon(vertices: Vec<Vec2>) -> Result<Shape, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("polygon"));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return Err(GeometryError::NotConvexCcw((i + 1) % n));
            }
        }
        // Turning left at every vertex is not enough on its own: a star
        // polygon also does that but winds more than once.
        let area2: f64 = (0..n)
            .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
            .sum();
        let winding: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if area2 <= 0.0 || (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NotConvexCcw(0));
        }
        Ok(Shape::ConvexPolygon(vertices))
    }

    /// Closest point on the boundary together with the signed distance
    /// (negative inside).
    pub fn closest_boundary_point(&self, p: Vec2) -> (Vec2, f64) {
        match self {
            Shape::Circle { center, radius } => {
                let d = p - *center;
                let n = d.norm();
                let dir = d.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                (*center + dir * *radius, n - radius)
            }
            Shape::Rect(r) => rect_closest(r, p),
            Shape::ConvexPolygon(vs) => polygon_closest(vs, p),
        }
    }

    /// Signed distance from `p` to the boundary; negative iff strictly inside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        self.closest_boundary_point(p).1
    }

    /// Closed point-in-shape test, computed independently of the distance
    /// routines.
    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            Shape::Circle { center, radius } => {
                let d = p - *center;
                d.dot(d) <= radius * radius
            }
            Shape::Rect(r) => r.contains(p),
            Shape::ConvexPolygon(vs) => {
                let n = vs.len();
                (0..n).all(|i| (vs[(i + 1) % n] - vs[i]).cross(p - vs[i]) >= 0.0)
            }
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        match self {
            Shape::Circle { center, radius } => (
                Vec2::new(center.x - radius, center.y - radius),
                Vec2::new(center.x + radius, center.y + radius),
            ),
            Shape::Rect(r) => (r.min, r.max),
            Shape::ConvexPolygon(vs) => {
                let mut lo = vs[0];
                let mut hi = vs[0];
                for v in vs {
                    lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
        }
    }
}

/// Signed distance from a point to a shape's boundary.
pub fn distance_point_to_shape(p: Vec2, s: &Shape) -> f64 {
    s.signed_distance(p)
}

fn rect_closest(r: &Rect, p: Vec2) -> (Vec2, f64) {
    let inside = p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y;
    if !inside {
        let q = Vec2::new(p.x.clamp(r.min.x, r.max.x), p.y.clamp(r.min.y, r.max.y));
        return (q, euclidean(p, q));
    }
    // Interior: nearest of the four sides. Order left, right, bottom, top.
    let candidates = [
        (p.x - r.min.x, Vec2::new(r.min.x, p.y)),
        (r.max.x - p.x, Vec2::new(r.max.x, p.y)),
        (p.y - r.min.y, Vec2::new(p.x, r.min.y)),
        (r.max.y - p.y, Vec2::new(p.x, r.max.y)),
    ];
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.0 < best.0 {
            best = *c;
        }
    }
    (best.1, -best.0)
}

fn closest_on_segment(a: Vec2, b: Vec2, p: Vec2) -> Vec2 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    a + ab * t
}

fn polygon_closest(vs: &[Vec2], p: Vec2) -> (Vec2, f64) {
    let n = vs.len();
    let mut best_q = vs[0];
    let mut best_d = f64::INFINITY;
    let mut inside = true;
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        if (b - a).cross(p - a) <= 0.0 {
            inside = false;
        }
        let q = closest_on_segment(a, b, p);
        let d = euclidean(p, q);
        if d < best_d {
            best_d = d;
            best_q = q;
        }
    }
    (best_q, if inside { -best_d } else { best_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Point on the boundary at perimeter parameter `t` in `[0, 1)`.
    fn boundary_at(s: &Shape, t: f64) -> Vec2 {
        let t = t.rem_euclid(1.0);
        let poly = |vs: &[Vec2]| {
            let n = vs.len();
            let x = t * n as f64;
            let i = (x.floor() as usize).min(n - 1);
            let f = x - i as f64;
            vs[i] + (vs[(i + 1) % n] - vs[i]) * f
        };
        match s {
            Shape::Circle { center, radius } => {
                let a = std::f64::consts::TAU * t;
                *center + Vec2::new(a.cos(), a.sin()) * *radius
            }
            Shape::Rect(r) => poly(&[
                r.min(),
                Vec2::new(r.max().x, r.min().y),
                r.max(),
                Vec2::new(r.min().x, r.max().y),
            ]),
            Shape::ConvexPolygon(vs) => poly(vs),
        }
    }

    /// Minimum distance over densely sampled boundary points: a coarse sweep
    /// of the whole perimeter, then a fine sweep around the best sample.
    fn sampled_boundary_distance(p: Vec2, s: &Shape, samples: usize) -> f64 {
        let step = 1.0 / samples as f64;
        let mut best_t = 0.0;
        let mut best = f64::INFINITY;
        for i in 0..samples {
            let t = i as f64 * step;
            let d = euclidean(p, boundary_at(s, t));
            if d < best {
                best = d;
                best_t = t;
            }
        }
        let fine = 20_000;
        for i in 0..=fine {
            let t = best_t - step + 2.0 * step * i as f64 / fine as f64;
            best = best.min(euclidean(p, boundary_at(s, t)));
        }
        best
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean(Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0)), 5.0);
        assert_eq!(euclidean(Vec2::new(1.0, 1.0), Vec2::new(1.0, 1.0)), 0.0);
        assert_abs_diff_eq!(euclidean(Vec2::ZERO, Vec2::new(0.3, 0.0)), 0.3);
    }

    #[test]
    fn circle_distance_examples() {
        let c = Shape::circle(Vec2::ZERO, 1.0).unwrap();
        assert_eq!(distance_point_to_shape(Vec2::ZERO, &c), -1.0);
        assert_eq!(distance_point_to_shape(Vec2::new(2.0, 0.0), &c), 1.0);
        assert_eq!(distance_point_to_shape(Vec2::new(1.0, 0.0), &c), 0.0);
    }

    #[test]
    fn rect_center_matches_sampled_boundary() {
        let r = Shape::rect(Vec2::ZERO, Vec2::new(1.0, 1.0)).unwrap();
        let p = Vec2::new(0.5, 0.5);
        // Oracle gives magnitude; sign comes from the containment test.
        let oracle = -sampled_boundary_distance(p, &r, 4_000);
        assert_abs_diff_eq!(oracle, -0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(distance_point_to_shape(p, &r), oracle, epsilon = 1e-6);
    }

    #[test]
    fn polygon_distance_outside_and_inside() {
        let tri = Shape::convex_polygon(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_abs_diff_eq!(tri.signed_distance(Vec2::new(0.5, -1.0)), 1.0);
        assert_abs_diff_eq!(tri.signed_distance(Vec2::new(0.1, 0.2)), -0.1);
        let p = Vec2::new(1.0, 1.0);
        assert_abs_diff_eq!(tri.signed_distance(p), 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            Shape::circle(Vec2::ZERO, 0.0),
            Err(GeometryError::BadRadius(_))
        ));
        assert!(Shape::rect(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).is_err());
        assert!(Shape::circle(Vec2::new(f64::NAN, 0.0), 1.0).is_err());
        assert!(matches!(
            Shape::convex_polygon(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        ));
        // Clockwise square.
        let cw = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(Shape::convex_polygon(cw).is_err());
        // Collinear vertex is not strictly convex.
        let flat = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(Shape::convex_polygon(flat).is_err());
        // Pentagram: every turn is left but it winds twice.
        let star: Vec<Vec2> = (0..5)
            .map(|k| {
                let t = std::f64::consts::TAU * (2 * k) as f64 / 5.0;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        assert!(Shape::convex_polygon(star).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coord() -> impl Strategy<Value = f64> {
            -3.0..3.0f64
        }

        fn point() -> impl Strategy<Value = Vec2> {
            (coord(), coord()).prop_map(|(x, y)| Vec2::new(x, y))
        }

        fn shape() -> impl Strategy<Value = Shape> {
            prop_oneof![
                (point(), 0.05..1.5f64).prop_map(|(c, r)| Shape::circle(c, r).unwrap()),
                (point(), 0.05..2.0f64, 0.05..2.0f64).prop_map(|(a, w, h)| Shape::rect(
                    a,
                    a + Vec2::new(w, h)
                )
                .unwrap()),
                // Regular-ish polygon with perturbed radii stays convex for
                // small perturbations and few vertices.
                (point(), 3usize..8, 0.2..1.5f64, 0.0..std::f64::consts::TAU).prop_map(
                    |(c, n, r, phase)| {
                        let vs = (0..n)
                            .map(|k| {
                                let t = phase + std::f64::consts::TAU * k as f64 / n as f64;
                                c + Vec2::new(t.cos(), t.sin()) * r
                            })
                            .collect();
                        Shape::convex_polygon(vs).unwrap()
                    }
                ),
            ]
        }

        proptest! {
            #[test]
            fn triangle_inequality(a in point(), b in point(), c in point()) {
                prop_assert!(euclidean(a, c) <= euclidean(a, b) + euclidean(b, c) + 1e-12);
                prop_assert_eq!(euclidean(a, b), euclidean(b, a));
            }

            #[test]
            fn signed_distance_matches_sampled_oracle(p in point(), s in shape()) {
                let mag = sampled_boundary_distance(p, &s, 4_000);
                let d = s.signed_distance(p);
                prop_assert!((d.abs() - mag).abs() < 1e-6, "d={} oracle={}", d, mag);
            }

            #[test]
            fn sign_agrees_with_containment(p in point(), s in shape()) {
                let d = s.signed_distance(p);
                if d < -1e-12 {
                    prop_assert!(s.contains(p));
                } else if d > 1e-12 {
                    prop_assert!(!s.contains(p));
                }
            }
        }
    }
}
