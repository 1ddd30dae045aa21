//! Population mean sets of the two-point measure on a grid of [-1, 1].
//!
//! For order 1 every point of the grid is a mean; for order 2 only 0 is.

use frechet::metric::{DiscreteMeasure, GridSpace, MetricSpace, Order};
use frechet::solver::population_mean_set;

fn main() -> frechet::Result<()> {
    let grid = GridSpace::from_interval(-1.0, 1.0, 100)?;
    let minus = grid.point_at(-1.0).unwrap();
    let plus = grid.point_at(1.0).unwrap();
    let mu = DiscreteMeasure::uniform([minus, plus])?;

    for r in 1..=3 {
        let mean = population_mean_set(&grid, &mu, Order::integer(r)?)?;
        let first = grid.label(mean.argmin[0]);
        let last = grid.label(*mean.argmin.last().unwrap());
        println!(
            "r = {r}: variance {}, {} of {} grid points, from {first} to {last}",
            mean.exact_optimum.unwrap(),
            mean.argmin.len(),
            grid.len()
        );
    }
    Ok(())
}
