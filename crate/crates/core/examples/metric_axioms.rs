//! Axiom checks on a Hamming space, a pseudo-metric and a broken matrix.

use frechet::graph::{enumerate_space, GraphSpaceConfig};
use frechet::metric::{check_metric_axioms, MatrixSpace, MetricSpace};

fn main() -> frechet::Result<()> {
    let g4 = enumerate_space(GraphSpaceConfig::new(4))?;
    println!("G_4: {} points, M = {}, {:?}", g4.len(), g4.bound(), check_metric_axioms(&g4));

    let twins = MatrixSpace::from_integer(3, vec![0, 0, 1, 0, 0, 1, 1, 1, 0], false)?;
    println!("twins as a metric: {:?}", check_metric_axioms(&twins));
    let twins = MatrixSpace::from_integer(3, vec![0, 0, 1, 0, 0, 1, 1, 1, 0], true)?;
    println!("twins as a pseudo-metric: {:?}", check_metric_axioms(&twins));

    let broken = MatrixSpace::from_real(3, vec![0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0], false)?;
    for v in &check_metric_axioms(&broken).violations {
        println!("broken: {:?} fails {} times, e.g. at {:?}", v.axiom, v.count, v.witness);
    }
    Ok(())
}
