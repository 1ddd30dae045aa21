//! Outer-limit estimates of a set trajectory.
//!
//! The trajectory alternates between {0} and {9} on the grid 0..=9 and
//! settles on {4, 5}. All three estimators keep the recurrent points.
//! A pseudo-metric with twins shows where closures make a difference.

use frechet::limits::{kuratowski_limsup, tail_limsup, ziezold_limcsup, SetTrajectory};
use frechet::metric::{GridSpace, MatrixSpace, PointId};

fn main() -> frechet::Result<()> {
    let grid = GridSpace::new(0, 9, 1)?;
    let mut sets: Vec<Vec<PointId>> = (0..10).map(|n| vec![PointId(if n % 2 == 0 { 0 } else { 9 })]).collect();
    sets.extend((0..10).map(|n| vec![PointId(4 + n % 2)]));
    let traj = SetTrajectory::new(&grid, sets)?;

    println!("tail limsup:     {:?}", tail_limsup(&traj, 10)?);
    println!("ziezold limcsup: {:?}", ziezold_limcsup(&traj, 10)?);
    for eps in [0.0, 1.5] {
        let est = kuratowski_limsup(&traj, eps, 10, 2)?;
        println!("kuratowski (eps {eps}): {:?}", est.points);
    }

    // Points 0 and 1 are at distance zero.
    let pseudo = MatrixSpace::from_integer(3, vec![0, 0, 2, 0, 0, 2, 2, 2, 0], true)?;
    let traj = SetTrajectory::new(&pseudo, vec![vec![PointId(0)], vec![PointId(2)], vec![PointId(0)], vec![PointId(0), PointId(2)]])?;
    println!("pseudo tail limsup:     {:?}", tail_limsup(&traj, 0)?);
    println!("pseudo ziezold limcsup: {:?}", ziezold_limcsup(&traj, 0)?);
    Ok(())
}
