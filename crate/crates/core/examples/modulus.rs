//! Modulus of continuity of `x ↦ d(z, x)^r` on G_4 against the Lipschitz
//! bound `(2^r - 1) M^(r-1) δ`.

use frechet::graph::{enumerate_space, GraphSpaceConfig};
use frechet::metric::{equicontinuity_bound, modulus_of_continuity, points, MetricSpace, Order};

fn main() -> frechet::Result<()> {
    let g4 = enumerate_space(GraphSpaceConfig::new(4))?;
    let all: Vec<_> = points(&g4).collect();
    for r in 1..=3 {
        for delta in [0.5, 1.5, 2.5] {
            let s = modulus_of_continuity(&g4, &all, delta, Order::integer(r)?)?;
            let bound = equicontinuity_bound(g4.bound(), r, delta);
            println!("r = {r}, delta = {delta}: s = {s:>5}, bound = {bound:>6}");
        }
    }
    Ok(())
}
