//! Shapes, signed distances and the tactile contact query.

use tactile_explore::geometry::{distance_point_to_shape, Rect, Shape, Vec2};
use tactile_explore::world::World;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let obstacles = vec![
        Shape::circle(Vec2::new(-0.3, 0.2), 0.12)?,
        Shape::rect(Vec2::new(0.15, 0.15), Vec2::new(0.4, 0.4))?,
        Shape::convex_polygon(vec![
            Vec2::new(-0.2, -0.45),
            Vec2::new(0.2, -0.45),
            Vec2::new(0.0, -0.2),
        ])?,
    ];
    for (i, s) in obstacles.iter().enumerate() {
        let d = distance_point_to_shape(Vec2::new(0.0, 0.0), s);
        println!("obstacle {i}: signed distance from origin {d:.4}");
    }

    let world = World::new(Rect::centered_square(0.75)?, obstacles, true)?;
    let (radius, reach) = (0.037, 0.005);
    // Slide a robot eastward along y = 0.25, into the square obstacle.
    for i in 0..=6 {
        let p = Vec2::new(-0.05 + 0.03 * i as f64, 0.25);
        match world.contact_query(p, radius, reach)? {
            Some(c) => println!(
                "at ({:.2}, {:.2}): touching {:?} at ({:.3}, {:.3}), gap {:.4}",
                p.x, p.y, c.source, c.point.x, c.point.y, c.distance
            ),
            None => println!(
                "at ({:.2}, {:.2}): nothing within reach, nearest surface {:.4}",
                p.x,
                p.y,
                world.distance_to_nearest_surface(p)
            ),
        }
    }

    let near_wall = Vec2::new(0.71, -0.6);
    let c = world.contact_query(near_wall, radius, reach)?;
    println!("near the east wall: {c:?}");
    Ok(())
}
