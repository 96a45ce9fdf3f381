//! Who can hear whom as the communication range grows.

use tactile_explore::comms::{is_fully_connected, neighbor_set};
use tactile_explore::geometry::Vec2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let positions: Vec<(usize, Vec2)> = [
        (-0.6, -0.6),
        (-0.2, -0.5),
        (0.5, -0.5),
        (0.6, 0.1),
        (0.0, 0.6),
        (-0.55, 0.4),
        (0.1, 0.0),
    ]
    .iter()
    .enumerate()
    .map(|(id, &(x, y))| (id, Vec2::new(x, y)))
    .collect();

    for r_comm in [0.4, 0.5, 0.6, 0.7, 0.8, 3.0] {
        let degrees: Vec<usize> = positions
            .iter()
            .map(|&(id, _)| neighbor_set(&positions, id, r_comm, 0).map(|s| s.neighbors.len()))
            .collect::<Result<_, _>>()?;
        println!(
            "r_comm {r_comm:.1} m: degrees {degrees:?}, connected: {}",
            is_fully_connected(&positions, r_comm)
        );
    }

    let snap = neighbor_set(&positions, 6, 0.6, 0)?;
    println!("robot 6 at r_comm 0.6 hears {:?}", snap.ids());
    Ok(())
}
