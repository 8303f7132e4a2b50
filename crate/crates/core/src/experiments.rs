//! Empirical limit studies: families of graph spaces, transfer of the
//! five-point constant along approximating sequences, and defect trend
//! reports tying the subembedding and triangle-comparison measurements
//! together.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{FiniteMetric, GraphMetric, GraphSpace, MetricError};
use crate::plane::Point2;
use crate::rcat::{rcat_space_defect, HParams, RcatError};
use crate::subembed::{minimal_defect_set, SearchParams, SubembedError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("sequence needs at least 2 spaces, got {0}")]
    TooShortSequence(usize),
    #[error("space {0} has {1} vertices; need at least 5 for 5-point sampling")]
    TooSmallSpace(usize, usize),
    #[error("correspondence for space {0} does not cover the target points")]
    GeneratorMismatch(usize),
    #[error("tuple or trial budget is zero")]
    BudgetZero,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Subembed(#[from] SubembedError),
    #[error(transparent)]
    Rcat(#[from] RcatError),
}

/// A named family of graph spaces standing in for a converging sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSequence {
    pub name: String,
    pub spaces: Vec<GraphSpace>,
    /// Comparison constant the family is certified for, when known
    /// (0 for CAT(0) families such as trees).
    pub declared_c: Option<f64>,
}

// ---------------------------------------------------------------------------
// generators

/// Grid net of the unit square with the given spacing; vertices within the
/// fixed connection radius `radius` are joined by edges weighted with their
/// Euclidean length. A fixed absolute radius keeps the path metric within
/// O(spacing) of the Euclidean metric, so defects shrink as the net refines.
pub fn square_net(spacing: f64, radius: f64) -> GraphSpace {
    let steps = (1.0 / spacing).round() as usize;
    let mut coords = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            coords.push(Point2::new(i as f64 * spacing, j as f64 * spacing));
        }
    }
    let mut edges = Vec::new();
    for a in 0..coords.len() {
        for b in (a + 1)..coords.len() {
            let d = coords[a].dist(coords[b]);
            if d <= radius + 1e-12 {
                edges.push((a, b, d));
            }
        }
    }
    GraphSpace { vertices: coords.len(), edges, coords: Some(coords) }
}

pub const NET_RADIUS: f64 = 0.3;

/// Unit-square net family over the given spacings with the standard fixed
/// connection radius.
pub fn net_family(spacings: &[f64]) -> SpaceSequence {
    SpaceSequence {
        name: format!("unit-square-net{spacings:?}"),
        spaces: spacings.iter().map(|&s| square_net(s, NET_RADIUS)).collect(),
        declared_c: None,
    }
}

/// Random tree on `n` vertices: vertex `i > 0` attaches to a uniformly
/// chosen earlier vertex with weight in `[0.5, 1.5)`.
pub fn random_tree(n: usize, seed: u64) -> GraphSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..n)
        .map(|i| {
            let parent = rng.gen_range(0..i);
            let w = 0.5 + rng.gen::<f64>();
            (parent, i, w)
        })
        .collect();
    GraphSpace::new(n, edges)
}

pub fn tree_family(sizes: &[usize], seed: u64) -> SpaceSequence {
    SpaceSequence {
        name: format!("random-trees{sizes:?}"),
        spaces: sizes
            .iter()
            .enumerate()
            .map(|(k, &n)| random_tree(n, seed.wrapping_add(k as u64)))
            .collect(),
        declared_c: Some(0.0),
    }
}

/// Constant family: `copies` identical cycles of the given circumference.
pub fn cycle_family(k: usize, circ: f64, copies: usize) -> SpaceSequence {
    SpaceSequence {
        name: format!("cycle-{k}x{circ}"),
        spaces: (0..copies).map(|_| GraphSpace::cycle(k, circ)).collect(),
        declared_c: None,
    }
}

/// Copies of a base space with all edge weights divided by the scale
/// factors (the sequential surrogate for rescaling limits).
pub fn scaled_family(base: &GraphSpace, scales: &[f64]) -> SpaceSequence {
    SpaceSequence {
        name: format!("scaled{scales:?}"),
        spaces: scales
            .iter()
            .map(|&m| GraphSpace {
                vertices: base.vertices,
                edges: base.edges.iter().map(|&(u, v, w)| (u, v, w / m)).collect(),
                coords: base.coords.clone(),
            })
            .collect(),
        declared_c: None,
    }
}

// ---------------------------------------------------------------------------
// five-point limit check

/// A target space together with an approximating sequence and an explicit
/// point correspondence: `correspondence[m][i]` is the vertex of space `m`
/// tracking target point `i`.
#[derive(Debug, Clone)]
pub struct LimitInstance {
    pub seq: SpaceSequence,
    pub target: FiniteMetric,
    pub correspondence: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferCheck {
    pub tuple: Vec<usize>,
    pub target_defect: f64,
    /// Min over qualifying spaces of the tuple's set-level defect.
    pub best_sequence_defect: f64,
    /// Number of spaces whose matched distances are within the tolerance.
    pub qualifying: usize,
    /// `best_sequence_defect + 2 * eps`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitReport {
    pub eps: f64,
    pub trials: Vec<TransferCheck>,
    pub pass: bool,
}

/// Samples 5-tuples of the target and checks the approximation property:
/// whenever every matched distance of a space agrees within `eps`, the
/// target defect is at most the space's defect plus `2 * eps`.
pub fn five_point_limit_check(
    inst: &LimitInstance,
    eps: f64,
    trials: usize,
    seed: u64,
    params: &SearchParams,
) -> Result<LimitReport, ExperimentError> {
    let m_count = inst.seq.spaces.len();
    if m_count < 2 {
        return Err(ExperimentError::TooShortSequence(m_count));
    }
    if trials == 0 {
        return Err(ExperimentError::BudgetZero);
    }
    let n = inst.target.n;
    if n < 5 {
        return Err(ExperimentError::TooSmallSpace(usize::MAX, n));
    }
    let metrics: Vec<FiniteMetric> = inst
        .seq
        .spaces
        .iter()
        .map(|g| Ok(GraphMetric::new(g.clone())?.metric().clone()))
        .collect::<Result<_, ExperimentError>>()?;
    for (m, corr) in inst.correspondence.iter().enumerate() {
        if corr.len() != n || corr.iter().any(|&i| i >= metrics[m].n) {
            return Err(ExperimentError::GeneratorMismatch(m));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let tuple = sample_distinct(&mut rng, n, 5);
        let target_defect = minimal_defect_set(&inst.target, &tuple, params, None)?.c_set;
        let mut best = f64::INFINITY;
        let mut qualifying = 0usize;
        for (m, metric) in metrics.iter().enumerate() {
            let mapped: Vec<usize> = tuple.iter().map(|&i| inst.correspondence[m][i]).collect();
            let mut gap = 0.0_f64;
            for a in 0..tuple.len() {
                for b in (a + 1)..tuple.len() {
                    gap = gap.max(
                        (inst.target.d(tuple[a], tuple[b]) - metric.d(mapped[a], mapped[b])).abs(),
                    );
                }
            }
            if gap < eps {
                qualifying += 1;
                best = best.min(minimal_defect_set(metric, &mapped, params, None)?.c_set);
            }
        }
        let bound = best + 2.0 * eps;
        let pass = qualifying == 0 || target_defect <= bound + 1e-6;
        checks.push(TransferCheck {
            tuple,
            target_defect,
            best_sequence_defect: best,
            qualifying,
            bound,
            pass,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(LimitReport { eps, trials: checks, pass })
}

fn sample_distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let c = rng.gen_range(0..n);
        if !picked.contains(&c) {
            picked.push(c);
        }
    }
    picked.sort_unstable();
    picked
}

// ---------------------------------------------------------------------------
// defect trends

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrendRow {
    pub m: usize,
    /// Max set-level 5-point defect over the sampled tuples.
    pub defect5: f64,
    pub rcat_defect: f64,
    /// Forward-direction cross-check value `3 * defect5 + 2 * sqrt(3)`;
    /// `rcat_defect` must stay below it.
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrendReport {
    pub name: String,
    pub rows: Vec<TrendRow>,
    pub strictly_decreasing: bool,
    /// `defect5 <= 3 * declared_c` for every row, when a constant is
    /// declared for the family.
    pub declared_bound_pass: Option<bool>,
    pub tuples_per_space: usize,
}

impl TrendReport {
    /// CSV rendering with full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,defect5,rcat_defect,bound\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                row.m, row.defect5, row.rcat_defect, row.bound
            ));
        }
        out
    }
}

/// Per-space defect series: sampled 5-point set defects and triangle
/// comparison defects for each space in the family.
pub fn defect_trend(
    seq: &SpaceSequence,
    tuples_per_space: usize,
    triangle_budget: usize,
    seed: u64,
    params: &SearchParams,
) -> Result<TrendReport, ExperimentError> {
    if seq.spaces.len() < 2 {
        return Err(ExperimentError::TooShortSequence(seq.spaces.len()));
    }
    if tuples_per_space == 0 {
        return Err(ExperimentError::BudgetZero);
    }
    let mut rows = Vec::with_capacity(seq.spaces.len());
    for (m, g) in seq.spaces.iter().enumerate() {
        let graph = GraphMetric::new(g.clone())?;
        let metric = graph.metric().clone();
        if metric.n < 5 {
            return Err(ExperimentError::TooSmallSpace(m, metric.n));
        }
        // same seed for every row: spaces of equal size are probed on the
        // same tuples, so constant and scaled families compare exactly
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut defect5 = 0.0_f64;
        for _ in 0..tuples_per_space {
            let tuple = sample_distinct(&mut rng, metric.n, 5);
            defect5 = defect5.max(minimal_defect_set(&metric, &tuple, params, None)?.c_set);
        }
        let rcat = rcat_space_defect(&graph, triangle_budget, 9, &HParams::standard())?;
        rows.push(TrendRow {
            m,
            defect5,
            rcat_defect: rcat.defect,
            bound: 3.0 * defect5 + 2.0 * 3.0_f64.sqrt(),
        });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].defect5 < w[0].defect5);
    let declared_bound_pass = seq
        .declared_c
        .map(|c0| rows.iter().all(|r| r.defect5 <= 3.0 * c0 + 1e-6));
    Ok(TrendReport {
        name: seq.name.clone(),
        rows,
        strictly_decreasing,
        declared_bound_pass,
        tuples_per_space,
    })
}
