//! Mean sets of two paths in G_4 for orders 1 and 2.
//!
//! ```sh
//! cargo run --example graph_mean
//! ```

use frechet::graph::{enumerate_space, parse_graph, GraphSpaceConfig};
use frechet::metric::{MetricSpace, Order, Sample};
use frechet::solver::sample_mean_set;

fn main() -> frechet::Result<()> {
    let g4 = enumerate_space(GraphSpaceConfig::new(4))?;
    let sample = ["4:100101", "4:101001"]
        .iter()
        .map(|s| g4.point_of(&parse_graph(s)?))
        .collect::<frechet::Result<Vec<_>>>()?;
    let sample = Sample::new(sample)?;

    for r in [1, 2] {
        let mean = sample_mean_set(&g4, &sample, Order::integer(r)?)?;
        let exact = mean.exact_optimum.as_ref().map(|e| e.to_string()).unwrap_or_default();
        println!("r = {r}: optimum {exact}, {} graphs", mean.argmin.len());
        for &p in &mean.argmin {
            let g = g4.graph(p);
            println!("  {}  edges {:?}", g4.label(p), g.edges());
        }
    }
    Ok(())
}
