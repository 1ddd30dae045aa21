//! Restricted means: the minimum is taken over the observed points only,
//! so the result is always a sampled graph and its variance is never below
//! the unrestricted one.

use frechet::graph::{enumerate_space, parse_graph, GraphSpaceConfig};
use frechet::metric::{MetricSpace, Order, Sample};
use frechet::solver::{restricted_sample_mean_set, sample_mean_set};

fn main() -> frechet::Result<()> {
    let g4 = enumerate_space(GraphSpaceConfig::new(4))?;
    let lines = ["4:100101", "4:101001", "4:101001", "4:111111"];
    let points = lines
        .iter()
        .map(|s| g4.point_of(&parse_graph(s)?))
        .collect::<frechet::Result<Vec<_>>>()?;
    let sample = Sample::new(points)?;

    for r in [1, 2] {
        let r = Order::integer(r)?;
        let full = sample_mean_set(&g4, &sample, r)?;
        let restricted = restricted_sample_mean_set(&g4, &sample, r)?;
        let show = |set: &[frechet::PointId]| set.iter().map(|&p| g4.label(p)).collect::<Vec<_>>().join(" ");
        println!("r = {r}");
        println!("  full space: {} -> {}", full.exact_optimum.unwrap(), show(&full.argmin));
        println!("  restricted: {} -> {}", restricted.exact_optimum.unwrap(), show(&restricted.argmin));
    }
    Ok(())
}
