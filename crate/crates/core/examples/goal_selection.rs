//! Candidate goals and the cost function for a single robot.
//!
//! A robot at the origin hears one neighbor to the east and has logged a few
//! points to the north. With a high collision weight it heads away from the
//! neighbor; with a high redundancy weight it heads away from its points.

use tactile_explore::agent::{
    collision_cost, generate_candidates, redundancy_cost, select_goal, CostWeights,
    RedundancyExponent,
};
use tactile_explore::geometry::Vec2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let here = Vec2::new(0.0, 0.0);
    let candidates = generate_candidates(here, 0.3, 8)?;
    let neighbors = [Vec2::new(0.4, 0.0)];
    let logged = [
        Vec2::new(-0.1, 0.35),
        Vec2::new(0.0, 0.36),
        Vec2::new(0.1, 0.35),
    ];

    println!("{:>3} {:>16} {:>10} {:>10}", "k", "goal", "J_coll", "J_red");
    for (k, &g) in candidates.goals().iter().enumerate() {
        println!(
            "{k:>3} ({:>6.3}, {:>6.3}) {:>10.3} {:>10.3}",
            g.x,
            g.y,
            collision_cost(g, &neighbors),
            redundancy_cost(g, &logged, RedundancyExponent::Squared)
        );
    }

    for (beta, gamma) in [(0.9, 0.1), (0.1, 0.9)] {
        let w = CostWeights::new(beta, gamma, RedundancyExponent::Squared)?;
        let choice = select_goal(&candidates, &neighbors, &logged, &w)?;
        println!(
            "beta={beta} gamma={gamma}: candidate {} at ({:.3}, {:.3}), cost {:.3}",
            choice.index, choice.goal.x, choice.goal.y, choice.cost
        );
    }
    Ok(())
}
