//! A small consistency experiment on G_4.
//!
//! Draws i.i.d. samples from the uniform measure on two paths and tracks the
//! sample variance error, the sandwich checks and the outer-limit estimate.
//! Pass a directory to also write the CSV and JSON reports.
//!
//! ```sh
//! cargo run --release --example consistency -- /tmp/reports
//! ```

use frechet::lab::{oscillation_stats, run_consistency_experiment, write_reports, ConfigFile};

const CONFIG: &str = r#"
version = 1
name = "two_paths_small"
space = "graph"
nv = 4
support = ["4:100101", "4:101001"]
r = 1
checkpoints = [10, 100, 1000]
replications = 50
seed = 7
restricted = true
"#;

fn main() -> frechet::Result<()> {
    let cfg = ConfigFile::from_toml(CONFIG)?.resolve()?;
    let report = run_consistency_experiment(&cfg)?;

    for s in report.checkpoint_summaries() {
        println!(
            "n = {:>5}: median |error| {:.4}, restricted {:.4}, sandwich violations {}",
            s.n,
            s.median_abs_variance_error,
            s.restricted_median_abs_variance_error.unwrap_or(f64::NAN),
            s.sandwich_violations
        );
    }
    for row in oscillation_stats(&report.replications, |c| c.mean_set.len() > 1)? {
        println!("n = {:>5}: several means in {:.3} ± {:.3}", row.n, row.frequency, row.std_error);
    }
    for block in report.assertions() {
        println!("{} {}: {}", if block.passed { "PASS" } else { "FAIL" }, block.name, block.detail);
    }
    if let Some(dir) = std::env::args().nth(1) {
        let (csv, json) = write_reports(&report, dir.as_ref())?;
        println!("wrote {} and {}", csv.display(), json.display());
    }
    Ok(())
}
