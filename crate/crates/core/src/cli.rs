//! The `frechet` command line.
//!
//! ```text
//! frechet mean <GRAPHS> [--r R] [--restricted] [--format text|json|csv] [--cap-override SLOTS]
//! frechet restricted-mean <GRAPHS> [--r R] [--format F]
//! frechet variance <GRAPHS> [--r R] [--restricted] [--format F] [--cap-override SLOTS]
//! frechet enumerate --nv N [--format F] [--cap-override SLOTS]
//! frechet check-metric (--nv N | <GRAPHS> | <MATRIX.csv> [--pseudo]) [--format F]
//! frechet simulate <CONFIG.toml> [--out DIR] [--seed S] [--r R] [--epsilon E]
//!                  [--burn-in N] [--min-visits K] [--format F]
//! frechet modulus <GRAPHS> [--delta D]... [--r R] [--format F]
//! ```
//!
//! Exit codes: 0 success, 1 other failures (I/O, domain errors), 2 usage or
//! graph file parse errors, 3 enumeration cap exceeded, 4 invalid experiment
//! configuration.
//!
//! Output depends only on the inputs and flags. Every subcommand prints the
//! same numbers in all three formats.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{enumerate_space, parse_graph_file, slot_count, Graph, GraphSet, GraphSpaceConfig, DEFAULT_ENUMERATION_CAP};
use crate::lab::{run_consistency_experiment, write_reports, ConfigFile};
use crate::metric::{
    check_metric_axioms, modulus_of_continuity, DiscreteMeasure, MatrixSpace, MetricSpace, Order, PointId,
};
use crate::solver::{frechet_mean_set, CandidateDomain, MeanSetResult};

#[derive(Debug, Parser)]
#[command(name = "frechet", version, about = "Exact Fréchet mean sets on graph spaces and Monte Carlo consistency experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fréchet sample mean set of a graph file.
    Mean(MeanArgs),
    /// Mean set restricted to the sampled graphs.
    RestrictedMean(MeanArgs),
    /// Fréchet sample variance of a graph file.
    Variance(MeanArgs),
    /// List every graph on `nv` vertices in canonical order.
    Enumerate(EnumerateArgs),
    /// Check the metric axioms on a graph space, graph file or distance matrix.
    CheckMetric(CheckArgs),
    /// Run a Monte Carlo consistency experiment from a config file.
    Simulate(SimulateArgs),
    /// Modulus of continuity of the point functions on a graph sample.
    Modulus(ModulusArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    /// Graph sample file, one `nv:bits` line per graph.
    pub graphs: PathBuf,
    /// Order of the mean (r >= 1).
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
    /// Minimize over the sampled graphs only.
    #[arg(long)]
    pub restricted: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest number of edge slots to enumerate.
    #[arg(long, value_name = "SLOTS")]
    pub cap_override: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub nv: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_name = "SLOTS")]
    pub cap_override: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Graph file, or a `.csv` distance matrix (one row per line, no header).
    pub input: Option<PathBuf>,
    /// Check the full graph space on this many vertices.
    #[arg(long, conflicts_with = "input")]
    pub nv: Option<usize>,
    /// Treat the matrix as a pseudo-metric (skip the coincidence axiom).
    #[arg(long)]
    pub pseudo: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_name = "SLOTS")]
    pub cap_override: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment config (TOML).
    pub config: PathBuf,
    /// Directory for the CSV and JSON reports.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Sample size at which the tail of the trajectory starts.
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub min_visits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    /// Graph file whose distinct graphs form the set W.
    pub graphs: PathBuf,
    #[arg(long, default_values_t = [0.5, 1.5, 2.5])]
    pub delta: Vec<f64>,
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Exit code of an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Length { .. } => 2,
        Error::CapExceeded { .. } => 3,
        Error::Config(_) => 4,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Mean(a) => cmd_mean(a, a.restricted, false, out),
        Command::RestrictedMean(a) => cmd_mean(a, true, false, out),
        Command::Variance(a) => cmd_mean(a, a.restricted, true, out),
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::CheckMetric(a) => cmd_check_metric(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Modulus(a) => cmd_modulus(a, out),
    }
}

fn read_graphs(path: &Path) -> Result<Vec<Graph>> {
    let text = std::fs::read_to_string(path)?;
    let graphs = parse_graph_file(&text)?;
    if graphs.is_empty() {
        return Err(Error::Parse {
            line: 0,
            column: 0,
            message: format!("{} contains no graphs", path.display()),
        });
    }
    Ok(graphs)
}

fn space_config(nv: usize, cap_override: Option<usize>) -> GraphSpaceConfig {
    GraphSpaceConfig::new(nv).with_cap(cap_override.unwrap_or(DEFAULT_ENUMERATION_CAP))
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text(value: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn exact_string(res: &MeanSetResult) -> Option<String> {
    res.exact_optimum.as_ref().map(|e| e.to_string())
}

/// Mean set of the graphs in a file, over `G_nv` or over the sample.
pub fn graph_mean(graphs: &[Graph], r: Order, restricted: bool, cap_override: Option<usize>) -> Result<(MeanSetResult, Vec<String>, usize)> {
    let nv = graphs[0].nv();
    if restricted {
        let set = GraphSet::new(graphs.iter().cloned())?;
        let points = graphs.iter().map(|g| set.point_of(g).expect("graph is in its own set"));
        let mu = DiscreteMeasure::from_counts(points.map(|p| (p, 1)))?;
        let res = frechet_mean_set(&set, &mu, r, CandidateDomain::SampleSupport)?;
        let labels = res.argmin.iter().map(|&p| set.label(p)).collect();
        Ok((res, labels, set.len()))
    } else {
        let space = enumerate_space(space_config(nv, cap_override))?;
        let points = graphs
            .iter()
            .map(|g| space.point_of(g))
            .collect::<Result<Vec<PointId>>>()?;
        let mu = DiscreteMeasure::from_counts(points.into_iter().map(|p| (p, 1)))?;
        let res = frechet_mean_set(&space, &mu, r, CandidateDomain::FullSpace)?;
        let labels = res.argmin.iter().map(|&p| space.label(p)).collect();
        Ok((res, labels, space.len()))
    }
}

fn cmd_mean(a: &MeanArgs, restricted: bool, variance_only: bool, out: &mut dyn Write) -> Result<()> {
    let r = Order::new(a.r)?;
    let graphs = read_graphs(&a.graphs)?;
    let nv = graphs[0].nv();
    let (res, labels, candidates) = graph_mean(&graphs, r, restricted, a.cap_override)?;
    let exact = exact_string(&res);
    let domain = res.domain.as_str();

    let mut distinct: Vec<String> = graphs.iter().map(|g| g.to_string()).collect();
    distinct.sort();
    distinct.dedup();
    let subset = distinct.iter().all(|g| labels.binary_search(g).is_ok());
    let proper = subset && labels.len() > distinct.len();

    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "order: {r}").unwrap();
            let what = if restricted { "sampled graphs" } else { "graphs" };
            writeln!(s, "candidates: {candidates} {what} on {nv} vertices").unwrap();
            let name = if variance_only { "variance" } else { "optimum" };
            match &exact {
                Some(e) => writeln!(s, "{name}: {} (exact {e})", res.optimum).unwrap(),
                None => writeln!(s, "{name}: {}", res.optimum).unwrap(),
            }
            if !variance_only {
                writeln!(s, "mean set: {} graphs", labels.len()).unwrap();
                for l in &labels {
                    writeln!(s, "{l}").unwrap();
                }
                let note = match (subset, proper) {
                    (true, true) => "true (proper)",
                    (true, false) => "true (equal)",
                    _ => "false",
                };
                writeln!(s, "sample ⊂ mean set: {note}").unwrap();
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "order": r.value(),
                "candidates": domain,
                "candidate_count": candidates,
                "nv": nv,
                "sample_size": graphs.len(),
                "distinct_sample": distinct.len(),
            });
            let key = if variance_only { "variance" } else { "optimum" };
            v[key] = json!(res.optimum);
            v[format!("exact_{key}")] = json!(exact);
            if !variance_only {
                v["mean_set"] = json!(labels);
                v["sample_in_mean_set"] = json!(subset);
                v["proper_subset"] = json!(proper);
            }
            json_text(&v)?
        }
        Format::Csv => {
            let head = [r.to_string(), domain.to_string(), res.optimum.to_string(), exact.clone().unwrap_or_default()];
            if variance_only {
                csv_text(&["order", "candidates", "variance", "exact_variance"], &[head.to_vec()])?
            } else {
                let rows: Vec<Vec<String>> = labels
                    .iter()
                    .map(|l| {
                        let mut row = head.to_vec();
                        row.push(l.clone());
                        row
                    })
                    .collect();
                csv_text(&["order", "candidates", "optimum", "exact_optimum", "graph"], &rows)?
            }
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    let space = enumerate_space(space_config(a.nv, a.cap_override))?;
    let labels = crate::metric::points(&space).map(|p| space.label(p));
    let text = match a.format {
        Format::Text => labels.map(|l| l + "\n").collect(),
        Format::Json => json_text(&json!({
            "nv": a.nv,
            "slots": slot_count(a.nv),
            "bound": space.bound(),
            "count": space.len(),
            "graphs": labels.collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = labels.enumerate().map(|(i, l)| vec![i.to_string(), l]).collect();
            csv_text(&["index", "graph"], &rows)?
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn parse_matrix(text: &str, pseudo: bool) -> Result<MatrixSpace> {
    let mut rows: Vec<Vec<&str>> = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let records = reader.records().collect::<Result<Vec<_>, _>>()?;
    for rec in &records {
        rows.push(rec.iter().collect());
    }
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Length { line: i + 1, expected: n, found: row.len() });
        }
        for (j, cell) in row.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line: i + 1,
                column: j + 1,
                message: format!("{cell:?} is not a number"),
            })?;
            entries.push(v);
        }
    }
    if entries.iter().all(|v| *v >= 0.0 && v.fract() == 0.0 && *v < 2f64.powi(53)) {
        MatrixSpace::from_integer(n, entries.iter().map(|&v| v as u64).collect(), pseudo)
    } else {
        MatrixSpace::from_real(n, entries, pseudo)
    }
}

fn cmd_check_metric(a: &CheckArgs, out: &mut dyn Write) -> Result<()> {
    let space: Box<dyn MetricSpace> = match (&a.input, a.nv) {
        (_, Some(nv)) => Box::new(enumerate_space(space_config(nv, a.cap_override))?),
        (Some(path), None) if path.extension().is_some_and(|e| e == "csv") => {
            Box::new(parse_matrix(&std::fs::read_to_string(path)?, a.pseudo)?)
        }
        (Some(path), None) => Box::new(GraphSet::new(read_graphs(path)?)?),
        (None, None) => return Err(Error::Domain("give an input file or --nv".into())),
    };
    let report = check_metric_axioms(space.as_ref());
    let witness = |w: &[PointId]| w.iter().map(|&p| space.label(p)).collect::<Vec<_>>();
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "points: {}", space.len()).unwrap();
            writeln!(s, "bound: {}", space.bound()).unwrap();
            writeln!(s, "pseudo: {}", space.is_pseudo()).unwrap();
            writeln!(s, "axioms ok: {}", report.is_ok()).unwrap();
            for v in &report.violations {
                writeln!(s, "{:?}: {} violations, first at ({})", v.axiom, v.count, witness(&v.witness).join(", ")).unwrap();
            }
            s
        }
        Format::Json => json_text(&json!({
            "points": space.len(),
            "bound": space.bound(),
            "pseudo": space.is_pseudo(),
            "axioms_ok": report.is_ok(),
            "violations": report.violations.iter().map(|v| json!({
                "axiom": v.axiom,
                "count": v.count,
                "witness": witness(&v.witness),
            })).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .violations
                .iter()
                .map(|v| vec![format!("{:?}", v.axiom), v.count.to_string(), witness(&v.witness).join(";")])
                .collect();
            csv_text(&["axiom", "count", "witness"], &rows)?
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Error::Config(format!("{}: {e}", a.config.display())))?;
    let mut file = ConfigFile::from_toml(&text)?;
    if let Some(seed) = a.seed {
        file.seed = seed;
    }
    if let Some(r) = a.r {
        file.r = r;
    }
    if a.epsilon.is_some() {
        file.epsilon = a.epsilon;
    }
    if a.burn_in.is_some() {
        file.burn_in = a.burn_in;
    }
    if a.min_visits.is_some() {
        file.min_visits = a.min_visits;
    }
    let cfg = file.resolve()?;
    let report = run_consistency_experiment(&cfg)?;
    let (csv_path, json_path) = write_reports(&report, &a.out)?;
    let summary = report.summary()?;

    let text = match a.format {
        Format::Json => json_text(&serde_json::to_value(&summary)?)?,
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
        Format::Text => {
            let mut s = String::new();
            let c = &summary.config;
            writeln!(s, "experiment {}: {}", c.name, c.space).unwrap();
            writeln!(s, "r = {}, {} replications, seed {}", c.r, c.replications, c.seed).unwrap();
            let p = &summary.population;
            writeln!(s, "population variance: {}", p.variance).unwrap();
            writeln!(s, "population mean set: {}", p.mean_set.join(" ")).unwrap();
            if let (Some(v), Some(m)) = (p.restricted_variance, &p.restricted_mean_set) {
                writeln!(s, "restricted variance: {v}").unwrap();
                writeln!(s, "restricted mean set: {}", m.join(" ")).unwrap();
            }
            writeln!(s, "{:>8} {:>14} {:>12} {:>10} {:>12} {:>10}", "n", "median_err", "full_space", "se", "multi_point", "se").unwrap();
            for ((cp, full), multi) in summary
                .checkpoints
                .iter()
                .zip(&summary.full_space_frequency)
                .zip(&summary.multi_point_frequency)
            {
                writeln!(
                    s,
                    "{:>8} {:>14.6} {:>12.4} {:>10.4} {:>12.4} {:>10.4}",
                    cp.n, cp.median_abs_variance_error, full.frequency, full.std_error, multi.frequency, multi.std_error
                )
                .unwrap();
            }
            writeln!(
                s,
                "outer limit: epsilon {}, tail from n = {}, min_visits {}; inclusion rate {:.4}, max excess {}",
                c.epsilon, c.burn_in, c.min_visits, summary.outer_limit_inclusion_rate, summary.max_outer_limit_excess
            )
            .unwrap();
            writeln!(s, "wrote {}", csv_path.display()).unwrap();
            writeln!(s, "wrote {}", json_path.display()).unwrap();
            for block in &summary.assertions {
                let tag = if block.passed { "PASS" } else { "FAIL" };
                writeln!(s, "{tag} {}: {}", block.name, block.detail).unwrap();
            }
            s
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// `(2^r - 1) M^(r-1) δ`.
fn lipschitz_bound(bound: f64, r: Order, delta: f64) -> f64 {
    match r.as_integer() {
        Some(k) => crate::metric::equicontinuity_bound(bound, k, delta),
        None => (2f64.powf(r.value()) - 1.0) * bound.powf(r.value() - 1.0) * delta,
    }
}

fn cmd_modulus(a: &ModulusArgs, out: &mut dyn Write) -> Result<()> {
    let r = Order::new(a.r)?;
    let set = GraphSet::new(read_graphs(&a.graphs)?)?;
    let support: Vec<PointId> = crate::metric::points(&set).collect();
    let rows = a
        .delta
        .iter()
        .map(|&d| {
            let s = modulus_of_continuity(&set, &support, d, r)?;
            let b = lipschitz_bound(set.bound(), r, d);
            Ok((d, s, b, s <= b))
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "order: {r}").unwrap();
            writeln!(s, "points: {}", set.len()).unwrap();
            writeln!(s, "bound: {}", set.bound()).unwrap();
            for (d, m, b, ok) in &rows {
                writeln!(s, "delta {d}: s = {m}, bound = {b}, within bound: {ok}").unwrap();
            }
            s
        }
        Format::Json => json_text(&json!({
            "order": r.value(),
            "points": set.len(),
            "bound": set.bound(),
            "rows": rows.iter().map(|(d, m, b, ok)| json!({
                "delta": d, "modulus": m, "lipschitz_bound": b, "within_bound": ok,
            })).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(d, m, b, ok)| vec![r.to_string(), d.to_string(), m.to_string(), b.to_string(), ok.to_string()])
                .collect();
            csv_text(&["order", "delta", "modulus", "lipschitz_bound", "within_bound"], &rows)?
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("frechet").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["mean"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn enumerate_small_space() {
        let (code, out, _) = run_str(&["enumerate", "--nv", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().collect::<Vec<_>>(), ["3:000", "3:001", "3:010", "3:011", "3:100", "3:101", "3:110", "3:111"]);
        let (code, _, err) = run_str(&["enumerate", "--nv", "8"]);
        assert_eq!(code, 3);
        assert!(err.contains("28"), "{err}");
        assert_eq!(run_str(&["enumerate", "--nv", "8", "--cap-override", "20"]).0, 3);
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix("0,1,3\n1,0,1\n3,1,0\n", false).unwrap();
        let rep = check_metric_axioms(&m);
        assert_eq!(rep.violations.len(), 1);
        assert!(matches!(parse_matrix("0,1\n1\n", false), Err(Error::Length { line: 2, .. })));
        assert!(matches!(parse_matrix("0,x\n1,0\n", false), Err(Error::Parse { line: 1, column: 2, .. })));
        assert!(parse_matrix("0,0.5\n0.5,0\n", false).unwrap().lattice_denominator().is_none());
    }

    #[test]
    fn lipschitz_bound_matches_integer_formula() {
        let r = Order::new(2.0).unwrap();
        assert_eq!(lipschitz_bound(6.0, r, 1.5), 3.0 * 6.0 * 1.5);
        let r = Order::new(1.5).unwrap();
        assert!((lipschitz_bound(4.0, r, 1.0) - (2f64.powf(1.5) - 1.0) * 2.0).abs() < 1e-12);
    }
}
