//! Command-line front end for the rough-comparison certification toolkit.
//!
//! Exit codes: 0 on pass, 1 when a checked condition fails, 2 on input or
//! usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use roughcat_core::experiments::{
    cycle_family, defect_trend, net_family, scaled_family, tree_family, SpaceSequence,
};
use roughcat_core::glue::{
    build_ngon_embedding, convexify, glued_distance, verify_an, ConvexPolygon, ConvexifyOutcome,
    GluedPolygon, ShortNgon,
};
use roughcat_core::metric::{validate_metric, FiniteMetric, GraphMetric, GraphSpace};
use roughcat_core::plane::Point2;
use roughcat_core::rcat::{rcat_space_defect, HParams};
use roughcat_core::space::EuclideanPlane;
use roughcat_core::subembed::{
    minimal_defect_ordered, minimal_defect_set, subembedding_slack, ChainConfig, SearchParams,
    SubembeddingCertificate,
};

#[derive(Parser)]
#[command(name = "roughcat", version, about = "Rough comparison-geometry certification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite metric utilities
    Metric {
        #[command(subcommand)]
        cmd: MetricCmd,
    },
    /// Planar rough-subembedding search and certificate checking
    Subembed {
        #[command(subcommand)]
        cmd: SubembedCmd,
    },
    /// Set-level n-point condition check
    Npoint(NpointArgs),
    /// Comparison-triangle defect measurement
    Rcat {
        #[command(subcommand)]
        cmd: RcatCmd,
    },
    /// Polygon gluing, embedding construction, convexification
    Glue {
        #[command(subcommand)]
        cmd: GlueCmd,
    },
    /// Limit and trend experiments
    Limit {
        #[command(subcommand)]
        cmd: LimitCmd,
    },
}

#[derive(Subcommand)]
enum MetricCmd {
    /// Validate a distance table as a finite metric
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum SubembedCmd {
    /// Minimal subembedding constant of an ordered tuple
    Defect {
        #[arg(long)]
        metric: PathBuf,
        /// Tuple ordering: comma-separated indices or letters a-z
        #[arg(long)]
        order: String,
        /// Seed for the randomized restarts (mandatory for reproducibility)
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate an emitted certificate against its metric
    Check {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Args)]
struct NpointArgs {
    #[arg(long)]
    metric: PathBuf,
    /// Point set: comma-separated indices or letters a-z
    #[arg(long)]
    indices: String,
    /// Constant to test the condition against
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RcatCmd {
    /// Max triangle defect over sampled vertex triples of a graph space
    Defect {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 9)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GlueCmd {
    /// Glued distance between two points across the seam
    Dist {
        #[arg(long)]
        gluing: PathBuf,
        /// Point in the first polygon: "x,y"
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Point in the second polygon: "x,y"
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Embed a polygon chain of points as a convex polygon
    Build {
        /// Model space: a gluing JSON, or the plane when omitted
        #[arg(long)]
        gluing: Option<PathBuf>,
        /// Chain vertices: "x1,y1;x2,y2;..."
        #[arg(long, allow_hyphen_values = true)]
        vertices: String,
        /// Comparison constant of the model space
        #[arg(long, default_value_t = 0.0)]
        cprime: f64,
        #[arg(long, default_value_t = 9)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flatten a gluing and convexify a reflex hinge
    Convexify {
        #[arg(long)]
        gluing: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LimitCmd {
    /// Defect series over a generated space family
    Trend {
        /// Family: "net", "tree", "cycle", or "scaled-cycle"
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 8)]
        tuples: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Input(String),
    ConditionFailed(String),
}

impl CliError {
    fn input(context: &str, err: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {err}"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(&format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(&format!("parsing {}", path.display()), e))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input("serializing output", e))?;
    println!("{text}");
    if let Some(path) = out {
        fs::write(path, text.as_bytes())
            .map_err(|e| CliError::input(&format!("writing {}", path.display()), e))?;
    }
    Ok(())
}

/// Index tokens: integers, or single letters a-z standing for 0-25.
fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Ok(v) = tok.parse::<usize>() {
                return Ok(v);
            }
            let mut chars = tok.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => Ok(c as usize - 'a' as usize),
                _ => Err(CliError::Input(format!("bad index token {tok:?}"))),
            }
        })
        .collect()
}

fn parse_point(text: &str) -> Result<Point2, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Input(format!("bad point {text:?}; expected \"x,y\"")));
    }
    let x = parts[0].trim().parse::<f64>().map_err(|e| CliError::input("point x", e))?;
    let y = parts[1].trim().parse::<f64>().map_err(|e| CliError::input("point y", e))?;
    Ok(Point2::new(x, y))
}

fn parse_points(text: &str) -> Result<Vec<Point2>, CliError> {
    text.split(';').map(parse_point).collect()
}

fn default_tol() -> f64 {
    std::env::var("ROUGHCAT_TOL").ok().and_then(|v| v.parse().ok()).unwrap_or(1e-6)
}

#[derive(serde::Deserialize)]
struct GluingFile {
    q1: PolygonFile,
    q2: PolygonFile,
    /// Seam endpoints as indices into the vertices of `q1`.
    s: (usize, usize),
}

#[derive(serde::Deserialize)]
struct PolygonFile {
    vertices: Vec<Point2>,
}

fn load_gluing(path: &Path) -> Result<GluedPolygon, CliError> {
    let file: GluingFile = read_json(path)?;
    let q1 = ConvexPolygon::new(file.q1.vertices)
        .map_err(|e| CliError::input("first polygon", e))?;
    let q2 = ConvexPolygon::new(file.q2.vertices)
        .map_err(|e| CliError::input("second polygon", e))?;
    let (i, j) = file.s;
    if i >= q1.n() || j >= q1.n() {
        return Err(CliError::Input(format!("seam indices ({i}, {j}) out of range")));
    }
    let seam = (q1.vertices[i], q1.vertices[j]);
    GluedPolygon::new(q1, q2, seam).map_err(|e| CliError::input("gluing", e))
}

/// Accepts either a bare square table `[[...], ...]` or `{"dist": [[...]]}`
/// (the serialized form of a validated metric) and validates it.
fn load_metric(path: &Path) -> Result<FiniteMetric, CliError> {
    let raw: serde_json::Value = read_json(path)?;
    let dist: Vec<Vec<f64>> =
        serde_json::from_value(raw.get("dist").cloned().unwrap_or(raw))
            .map_err(|e| CliError::input("distance table", e))?;
    validate_metric(dist).map_err(|e| CliError::input("metric", e))
}

fn metric_table(m: &FiniteMetric, order: &[usize]) -> Result<Vec<Vec<f64>>, CliError> {
    for &i in order {
        if i >= m.n {
            return Err(CliError::Input(format!("index {i} out of range for n = {}", m.n)));
        }
    }
    Ok(order.iter().map(|&i| order.iter().map(|&j| m.d(i, j)).collect()).collect())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Metric { cmd: MetricCmd::Validate { input } } => {
            let metric = load_metric(&input)?;
            emit(&metric, None)
        }
        Command::Subembed { cmd } => match cmd {
            SubembedCmd::Defect { metric, order, seed, out } => {
                let m = load_metric(&metric)?;
                let order = parse_indices(&order)?;
                let table = metric_table(&m, &order)?;
                let params = SearchParams { seed, ..SearchParams::default() };
                let mut cert = minimal_defect_ordered(&table, &params)
                    .map_err(|e| CliError::input("subembedding search", e))?;
                cert.ordering = order;
                emit(&cert, out.as_deref())
            }
            SubembedCmd::Check { metric, cert } => {
                let m = load_metric(&metric)?;
                let cert: SubembeddingCertificate = read_json(&cert)?;
                let table = metric_table(&m, &cert.ordering)?;
                let config = ChainConfig {
                    points: cert.points.clone(),
                    diagonals: cert.diagonals.clone(),
                    folds: cert.folds.clone(),
                };
                let checked = subembedding_slack(&table, &config, cert.c)
                    .map_err(|e| CliError::input("certificate", e))?;
                emit(&checked, None)?;
                if checked.pass {
                    Ok(())
                } else {
                    Err(CliError::ConditionFailed(format!(
                        "certificate violates the subembedding conditions at C = {}",
                        cert.c
                    )))
                }
            }
        },
        Command::Npoint(args) => {
            let m = load_metric(&args.metric)?;
            let indices = parse_indices(&args.indices)?;
            let params = SearchParams { seed: args.seed, ..SearchParams::default() };
            let report = minimal_defect_set(&m, &indices, &params, None)
                .map_err(|e| CliError::input("set-level search", e))?;
            emit(&report, args.out.as_deref())?;
            if report.c_set <= args.c + default_tol() {
                Ok(())
            } else {
                Err(CliError::ConditionFailed(format!(
                    "set-level constant {} exceeds {}",
                    report.c_set, args.c
                )))
            }
        }
        Command::Rcat { cmd: RcatCmd::Defect { space, budget, eps, samples, out } } => {
            let g: GraphSpace = read_json(&space)?;
            let graph = GraphMetric::new(g).map_err(|e| CliError::input("graph", e))?;
            let params =
                HParams::strengthened(eps).map_err(|e| CliError::input("eps", e))?;
            let report = rcat_space_defect(&graph, budget, samples, &params)
                .map_err(|e| CliError::input("defect sampling", e))?;
            emit(&report, out.as_deref())
        }
        Command::Glue { cmd } => match cmd {
            GlueCmd::Dist { gluing, a, b } => {
                let g = load_gluing(&gluing)?;
                let a = parse_point(&a)?;
                let b = parse_point(&b)?;
                let d = glued_distance(&g, a, b)
                    .map_err(|e| CliError::input("glued distance", e))?;
                println!("{d:e}");
                Ok(())
            }
            GlueCmd::Build { gluing, vertices, cprime, samples, out } => {
                let verts = parse_points(&vertices)?;
                let (polygon, report) = if let Some(path) = gluing {
                    let space = load_gluing(&path)?;
                    let ngon = ShortNgon::geodesic(&space, verts)
                        .map_err(|e| CliError::input("chain", e))?;
                    let (q, desc) = build_ngon_embedding(&space, &ngon, cprime)
                        .map_err(|e| CliError::input("construction", e))?;
                    let rep = verify_an(&space, &desc, desc.c_n, samples)
                        .map_err(|e| CliError::input("verification", e))?;
                    (q, rep)
                } else {
                    let space = EuclideanPlane;
                    let ngon = ShortNgon::geodesic(&space, verts)
                        .map_err(|e| CliError::input("chain", e))?;
                    let (q, desc) = build_ngon_embedding(&space, &ngon, cprime)
                        .map_err(|e| CliError::input("construction", e))?;
                    let rep = verify_an(&space, &desc, desc.c_n, samples)
                        .map_err(|e| CliError::input("verification", e))?;
                    (q, rep)
                };
                #[derive(Serialize)]
                struct BuildOutput {
                    polygon: ConvexPolygon,
                    verification: roughcat_core::glue::AnReport,
                }
                let output = BuildOutput { polygon, verification: report };
                emit(&output, out.as_deref())?;
                if output.verification.pass {
                    Ok(())
                } else {
                    Err(CliError::ConditionFailed(
                        "embedding conditions violated beyond tolerance".into(),
                    ))
                }
            }
            GlueCmd::Convexify { gluing, out } => {
                let g = load_gluing(&gluing)?;
                let outcome =
                    convexify(&g).map_err(|e| CliError::input("convexification", e))?;
                #[derive(Serialize)]
                struct ConvexifyOutput {
                    already_convex: bool,
                    polygon: ConvexPolygon,
                    reflex_index: Option<usize>,
                    flat_index: Option<usize>,
                }
                let output = match outcome {
                    ConvexifyOutcome::AlreadyConvex(q) => ConvexifyOutput {
                        already_convex: true,
                        polygon: q,
                        reflex_index: None,
                        flat_index: None,
                    },
                    ConvexifyOutcome::Convexified(rec) => ConvexifyOutput {
                        already_convex: false,
                        polygon: rec.output,
                        reflex_index: Some(rec.reflex_index),
                        flat_index: Some(rec.flat_index),
                    },
                };
                emit(&output, out.as_deref())
            }
        },
        Command::Limit { cmd: LimitCmd::Trend { family, tuples, budget, seed, csv, out } } => {
            let seq: SpaceSequence = match family.as_str() {
                "net" => net_family(&[0.2, 0.1, 0.05]),
                "tree" => tree_family(&[16, 24, 32], seed),
                "cycle" => cycle_family(16, 4.0, 3),
                "scaled-cycle" => scaled_family(&GraphSpace::cycle(16, 4.0), &[1.0, 2.0, 4.0]),
                other => {
                    return Err(CliError::Input(format!(
                        "unknown family {other:?}; expected net, tree, cycle, or scaled-cycle"
                    )))
                }
            };
            let params = SearchParams { seed, ..SearchParams::default() };
            let report = defect_trend(&seq, tuples, budget, seed, &params)
                .map_err(|e| CliError::input("trend computation", e))?;
            emit(&report, out.as_deref())?;
            if let Some(path) = csv {
                fs::write(&path, report.to_csv())
                    .map_err(|e| CliError::input(&format!("writing {}", path.display()), e))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ConditionFailed(msg)) => {
            eprintln!("condition failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
