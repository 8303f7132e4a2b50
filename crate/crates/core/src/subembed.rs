//! Rough subembeddings of ordered tuples into the plane.
//!
//! An ordered n-tuple with distance table `d` is searched for a planar
//! chain placement: consecutive distances are matched exactly (including
//! the closing side back to the first point), distances from the first
//! point may only grow, and the achieved constant is the worst shrinkage
//! over the remaining pairs. Configurations are parameterized as a fan of
//! triangles over the first point: free diagonal lengths plus a fold sign
//! per fan triangle, which quotients out rigid motions and makes the chain
//! equalities hold by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::FiniteMetric;
use crate::plane::Point2;
use crate::simplex::{nelder_mead, SimplexOptions};

#[derive(Debug, Error, PartialEq)]
pub enum SubembedError {
    #[error("tuple size {0} outside supported range {1}..={2}")]
    BadTupleSize(usize, usize, usize),
    #[error("distance table is not a symmetric square table")]
    BadTable,
    #[error("fan triangle {0} infeasible: ({1}, {2}) cannot span side {3}")]
    FanTriangleInfeasible(usize, f64, f64, f64),
    #[error("wrong number of free diagonals: got {0}, expected {1}")]
    WrongDiagonalCount(usize, usize),
    #[error("wrong number of folds: got {0}, expected {1}")]
    WrongFoldCount(usize, usize),
    #[error("configuration does not realize the chain equalities: {0}")]
    ChainMismatch(String),
    #[error("{0} orderings exceed the exhaustive limit; enable ordering sampling")]
    TooManyOrderings(usize),
    #[error("tuple size {0} too large for the exhaustive oracle (max {1})")]
    TooLarge(usize, usize),
}

/// Planar chain configuration: points `p[0..n]` with `p[0]` at the origin,
/// realizing all chain equalities of the tuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainConfig {
    pub points: Vec<Point2>,
    /// Radii `|p0 - p[i]|` for `i = 1..n-1` (first and last are fixed by
    /// the chain; the interior ones are the search variables).
    pub diagonals: Vec<f64>,
    /// Fold sign per fan triangle (`+1` counterclockwise).
    pub folds: Vec<i8>,
}

/// Signed slacks of the subembedding conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlackTable {
    /// `|p0 - p[i]| - d(0, i)` for `i = 1..n-1`; must be >= -1e-9.
    pub cond2: Vec<f64>,
    /// `(i, j, |p[i] - p[j]| + C - d(i, j))` over `1 <= i < j <= n-1`
    /// (0-based tuple positions); must be >= -1e-9.
    pub cond3: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubembeddingCertificate {
    pub ordering: Vec<usize>,
    /// Achieved constant: `max(0, max shrinkage over condition-3 pairs)`.
    #[serde(rename = "C")]
    pub c: f64,
    pub points: Vec<Point2>,
    pub diagonals: Vec<f64>,
    pub folds: Vec<i8>,
    pub slacks: SlackTable,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SearchParams {
    /// Seed for randomized restarts (mandatory for reproducible output).
    pub seed: u64,
    pub restarts: usize,
    /// Coarse-grid points per free dimension used to pick extra starts.
    pub grid_starts: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { seed: 0, restarts: 16, grid_starts: 7 }
    }
}

const SLACK_TOL: f64 = 1e-9;

fn check_table(d: &[Vec<f64>]) -> Result<usize, SubembedError> {
    let n = d.len();
    for row in d {
        if row.len() != n {
            return Err(SubembedError::BadTable);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !d[i][j].is_finite() || (d[i][j] - d[j][i]).abs() > 1e-9 * scale_of(d) {
                return Err(SubembedError::BadTable);
            }
        }
    }
    Ok(n)
}

fn scale_of(d: &[Vec<f64>]) -> f64 {
    d.iter().flat_map(|r| r.iter().copied()).fold(0.0, f64::max).max(1e-300)
}

/// Places the fan for full radii `r[1..n-1]` and fold signs, writing into
/// `points`. Returns the total feasibility violation (0 when every fan
/// triangle closes).
fn place_fan(d: &[Vec<f64>], r: &[f64], folds: &[i8], points: &mut Vec<Point2>) -> f64 {
    let n = d.len();
    points.clear();
    points.push(Point2::new(0.0, 0.0));
    points.push(Point2::new(r[1], 0.0));
    let mut theta = 0.0_f64;
    let mut viol = 0.0;
    for i in 1..=n - 2 {
        let a = r[i];
        let b = r[i + 1];
        let c = d[i][i + 1];
        viol += (c - (a + b)).max(0.0) + ((a - b).abs() - c).max(0.0);
        let ang = if a * b <= 0.0 {
            0.0
        } else {
            (((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0)).acos()
        };
        theta += f64::from(folds[i - 1].signum()) * ang;
        points.push(Point2::new(b * theta.cos(), b * theta.sin()));
    }
    viol
}

/// Worst signed condition-3 violation `d(i,j) - |p_i - p_j|` over pairs not
/// involving the base point.
fn raw_defect(d: &[Vec<f64>], points: &[Point2]) -> f64 {
    let n = d.len();
    let mut worst = f64::NEG_INFINITY;
    for i in 1..n {
        for j in (i + 1)..n {
            worst = worst.max(d[i][j] - points[i].dist(points[j]));
        }
    }
    if worst.is_finite() { worst } else { 0.0 }
}

fn full_radii(d: &[Vec<f64>], free: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut r = vec![0.0; n];
    r[1] = d[0][1];
    r[n - 1] = d[0][n - 1];
    for (k, &v) in free.iter().enumerate() {
        r[k + 2] = v;
    }
    r
}

/// Lower (condition 2) and upper (chain length) bounds for each free
/// radius; the tight fan `r[i] = d(0,i)` always lies inside.
fn free_bounds(d: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let n = d.len();
    let mut forward = vec![0.0; n];
    forward[1] = d[0][1];
    for i in 2..n {
        forward[i] = forward[i - 1] + d[i - 1][i];
    }
    let mut backward = vec![0.0; n];
    backward[n - 1] = d[0][n - 1];
    for i in (1..n - 1).rev() {
        backward[i] = backward[i + 1] + d[i][i + 1];
    }
    (2..n - 1)
        .map(|i| {
            let lo = d[0][i];
            let hi = forward[i].min(backward[i]).max(lo);
            (lo, hi)
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Candidate {
    c: f64,
    raw: f64,
    r: Vec<f64>,
    folds: Vec<i8>,
    points: Vec<Point2>,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.c + SLACK_TOL < b.c {
        return true;
    }
    if b.c + SLACK_TOL < a.c {
        return false;
    }
    // Among ties on C, prefer the larger minimum condition-3 slack
    // (smaller raw defect), then lexicographically smaller radii.
    if a.raw + SLACK_TOL < b.raw {
        return true;
    }
    if b.raw + SLACK_TOL < a.raw {
        return false;
    }
    a.r < b.r
}

/// Realizes a chain configuration from free diagonals `r[2..n-2]` and fold
/// signs, checking fan feasibility.
pub fn realize_chain(
    d: &[Vec<f64>],
    free_diagonals: &[f64],
    folds: &[i8],
) -> Result<ChainConfig, SubembedError> {
    let n = check_table(d)?;
    if n < 3 {
        return Err(SubembedError::BadTupleSize(n, 3, usize::MAX));
    }
    if free_diagonals.len() != n.saturating_sub(3) {
        return Err(SubembedError::WrongDiagonalCount(free_diagonals.len(), n - 3));
    }
    if folds.len() != n - 2 {
        return Err(SubembedError::WrongFoldCount(folds.len(), n - 2));
    }
    let r = full_radii(d, free_diagonals);
    let tol = 1e-9 * scale_of(d);
    for i in 1..=n - 2 {
        let (a, b, c) = (r[i], r[i + 1], d[i][i + 1]);
        if c > a + b + tol || c < (a - b).abs() - tol {
            return Err(SubembedError::FanTriangleInfeasible(i, a, b, c));
        }
    }
    let mut points = Vec::new();
    place_fan(d, &r, folds, &mut points);
    Ok(ChainConfig { points, diagonals: r[1..].to_vec(), folds: folds.to_vec() })
}

/// Full slack report of a chain configuration against a candidate constant.
pub fn subembedding_slack(
    d: &[Vec<f64>],
    config: &ChainConfig,
    c: f64,
) -> Result<SubembeddingCertificate, SubembedError> {
    let n = check_table(d)?;
    if config.points.len() != n {
        return Err(SubembedError::ChainMismatch(format!(
            "{} points for a {n}-tuple",
            config.points.len()
        )));
    }
    let tol = SLACK_TOL * scale_of(d).max(1.0);
    let p = &config.points;
    for i in 1..n {
        let side = p[i - 1].dist(p[i]);
        if (side - d[i - 1][i]).abs() > tol {
            return Err(SubembedError::ChainMismatch(format!(
                "side ({}, {i}) has length {side}, expected {}",
                i - 1,
                d[i - 1][i]
            )));
        }
    }
    let closing = p[0].dist(p[n - 1]);
    if (closing - d[0][n - 1]).abs() > tol {
        return Err(SubembedError::ChainMismatch(format!(
            "closing side has length {closing}, expected {}",
            d[0][n - 1]
        )));
    }

    let cond2: Vec<f64> = (1..n).map(|i| p[0].dist(p[i]) - d[0][i]).collect();
    let mut cond3 = Vec::new();
    for i in 1..n {
        for j in (i + 1)..n {
            cond3.push((i, j, p[i].dist(p[j]) + c - d[i][j]));
        }
    }
    let pass = cond2.iter().all(|&s| s >= -tol) && cond3.iter().all(|&(_, _, s)| s >= -tol);
    Ok(SubembeddingCertificate {
        ordering: (0..n).collect(),
        c,
        points: p.clone(),
        diagonals: config.diagonals.clone(),
        folds: config.folds.clone(),
        slacks: SlackTable { cond2, cond3 },
        pass,
    })
}

/// Collapses zero-length chain sides (consecutive repeated points),
/// returning for each original position the surviving representative
/// position list.
fn collapse_chain(d: &[Vec<f64>]) -> Vec<usize> {
    let n = d.len();
    let mut kept = vec![0usize];
    for i in 1..n {
        if d[*kept.last().unwrap()][i] > 0.0 {
            kept.push(i);
        }
    }
    while kept.len() > 1 && d[*kept.last().unwrap()][0] == 0.0 {
        kept.pop();
    }
    kept
}

fn sub_table(d: &[Vec<f64>], kept: &[usize]) -> Vec<Vec<f64>> {
    kept.iter().map(|&i| kept.iter().map(|&j| d[i][j]).collect()).collect()
}

/// Projects full radii onto the intersection of the condition-2 lower
/// bounds and the fan-triangle feasibility bands by alternating clamping
/// sweeps. Returns `None` when the sweeps do not settle (the fixed first
/// and last radii cannot be moved).
fn project_feasible(d: &[Vec<f64>], mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = d.len();
    let tol = 1e-12 * scale_of(d);
    for _ in 0..32 {
        for i in 2..n - 1 {
            r[i] = r[i].max(d[0][i]);
        }
        // forward: fit each radius to the band around its predecessor
        for i in 1..n - 2 {
            let c = d[i][i + 1];
            r[i + 1] = r[i + 1].clamp((r[i] - c).abs(), r[i] + c);
        }
        // backward: repair against the fixed closing radius
        for i in (2..n - 1).rev() {
            let c = d[i][i + 1];
            r[i] = r[i].clamp((r[i + 1] - c).abs(), r[i + 1] + c);
        }
        let feasible = (1..n - 1).all(|i| {
            let c = d[i][i + 1];
            r[i + 1] >= (r[i] - c).abs() - tol && r[i + 1] <= r[i] + c + tol
        }) && (2..n - 1).all(|i| r[i] >= d[0][i] - tol);
        if feasible {
            return Some(r);
        }
    }
    None
}

/// Searches one fold pattern with multi-start simplex descent on the
/// normalized problem (distances scaled to max 1).
fn search_fold_pattern(
    d: &[Vec<f64>],
    folds: &[i8],
    bounds: &[(f64, f64)],
    params: &SearchParams,
    rng_stream: u64,
) -> Candidate {
    let n = d.len();
    let dim = n - 3;
    let lo: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let hi: Vec<f64> = bounds.iter().map(|b| b.1).collect();

    let mut buf: Vec<Point2> = Vec::with_capacity(n);
    let eval_raw = |free: &[f64], buf: &mut Vec<Point2>| -> (f64, f64) {
        let r = full_radii(d, free);
        let fan_viol = place_fan(d, &r, folds, buf);
        let mut pen = fan_viol;
        for (k, &v) in free.iter().enumerate() {
            pen += (lo[k] - v).max(0.0);
        }
        let raw = raw_defect(d, buf);
        (raw, pen)
    };

    let mut starts: Vec<Vec<f64>> = vec![lo.clone()]; // tight fan
    if dim >= 1 {
        // coarse grid: best few cells as additional starts
        let g = params.grid_starts.max(2);
        let mut cells: Vec<(f64, Vec<f64>)> = Vec::new();
        let total = g.pow(dim as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut x = vec![0.0; dim];
            for k in 0..dim {
                let step = rem % g;
                rem /= g;
                x[k] = lo[k] + (hi[k] - lo[k]) * step as f64 / (g - 1) as f64;
            }
            let (raw, pen) = eval_raw(&x, &mut buf);
            if pen <= 1e-9 {
                cells.push((raw, x));
            }
        }
        cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (_, x) in cells.into_iter().take(3) {
            starts.push(x);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            params.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(rng_stream),
        );
        for _ in 0..params.restarts {
            let x: Vec<f64> =
                (0..dim).map(|k| lo[k] + rng.gen::<f64>() * (hi[k] - lo[k])).collect();
            starts.push(x);
        }
    }

    let scale = scale_of(d);
    let opts = SimplexOptions {
        x_tol: 1e-9 * scale,
        f_tol: 1e-10 * scale,
        max_iters: 400,
    };

    // seed with the tight fan, which is always feasible
    let mut best: Option<Candidate> = {
        let r = full_radii(d, &lo);
        let mut points = Vec::with_capacity(n);
        place_fan(d, &r, folds, &mut points);
        let raw = raw_defect(d, &points);
        Some(Candidate { c: raw.max(0.0), raw, r, folds: folds.to_vec(), points })
    };
    if best.as_ref().unwrap().c <= 1e-12 {
        return best.unwrap();
    }
    for start in starts {
        let step: Vec<f64> = (0..dim)
            .map(|k| {
                let span = hi[k] - lo[k];
                if span > 0.0 { (0.1 * span).max(1e-6 * scale) } else { 1e-6 * scale }
            })
            .collect();
        let mut buf_inner: Vec<Point2> = Vec::with_capacity(n);
        let result = nelder_mead(
            |x| {
                let (raw, pen) = {
                    let r = full_radii(d, x);
                    let fan_viol = place_fan(d, &r, folds, &mut buf_inner);
                    let mut pen = fan_viol;
                    for (k, &v) in x.iter().enumerate() {
                        pen += (lo[k] - v).max(0.0);
                    }
                    (raw_defect(d, &buf_inner), pen)
                };
                raw.max(0.0) + 10.0 * pen
            },
            &start,
            &step,
            opts,
        );
        // project onto the feasible set and re-evaluate cleanly, so that
        // the reported configuration satisfies the chain equalities exactly
        let free: Vec<f64> =
            result.x.iter().enumerate().map(|(k, &v)| v.max(lo[k])).collect();
        let Some(r) = project_feasible(d, full_radii(d, &free)) else {
            continue;
        };
        let mut points = Vec::with_capacity(n);
        place_fan(d, &r, folds, &mut points);
        let raw = raw_defect(d, &points);
        let cand = Candidate { c: raw.max(0.0), raw, r, folds: folds.to_vec(), points };
        if best.as_ref().map_or(true, |b| better(&cand, b)) {
            best = cand.into();
        }
        if best.as_ref().unwrap().c <= 1e-12 {
            break;
        }
    }
    best.expect("seeded with the tight fan")
}

fn fold_patterns(triangles: usize) -> Vec<Vec<i8>> {
    // first fold fixed counterclockwise: reflections are quotiented out
    let free = triangles.saturating_sub(1);
    (0..(1usize << free))
        .map(|mask| {
            let mut f = vec![1i8; triangles];
            for k in 0..free {
                if mask >> k & 1 == 1 {
                    f[k + 1] = -1;
                }
            }
            f
        })
        .collect()
}

/// Minimal rough-subembedding constant of an ordered tuple (3 <= n <= 8),
/// with the certificate attaining it.
pub fn minimal_defect_ordered(
    d: &[Vec<f64>],
    params: &SearchParams,
) -> Result<SubembeddingCertificate, SubembedError> {
    let n = check_table(d)?;
    if !(3..=8).contains(&n) {
        return Err(SubembedError::BadTupleSize(n, 3, 8));
    }

    let kept = collapse_chain(d);
    if kept.len() < 3 {
        // at most two distinct chain points: place directly
        let mut points = vec![Point2::new(0.0, 0.0); n];
        if kept.len() == 2 {
            let far = Point2::new(d[0][kept[1]], 0.0);
            for i in kept[1]..n {
                // positions at the second distinct point; a zero distance
                // back to position 0 marks the collapsed closing run
                if d[i][0] > 0.0 {
                    points[i] = far;
                }
            }
        }
        let config = ChainConfig {
            points: points.clone(),
            diagonals: (1..n).map(|i| points[0].dist(points[i])).collect(),
            folds: vec![],
        };
        return subembedding_slack(d, &config, 0.0);
    }

    let dr = sub_table(d, &kept);
    let scale = scale_of(&dr);
    let dn: Vec<Vec<f64>> =
        dr.iter().map(|row| row.iter().map(|&v| v / scale).collect()).collect();
    let bounds = free_bounds(&dn);

    let mut best: Option<Candidate> = None;
    for (fi, folds) in fold_patterns(dn.len() - 2).into_iter().enumerate() {
        let cand = search_fold_pattern(&dn, &folds, &bounds, params, fi as u64);
        if best.as_ref().map_or(true, |b| better(&cand, b)) {
            best = cand.into();
        }
        if best.as_ref().unwrap().c <= 1e-12 {
            break;
        }
    }
    let best = best.unwrap();

    // unscale and expand collapsed positions back to the full tuple
    let reduced_points: Vec<Point2> = best.points.iter().map(|p| p.scale(scale)).collect();
    let mut points = vec![Point2::new(0.0, 0.0); n];
    let mut rep = 0usize;
    for i in 0..n {
        if rep + 1 < kept.len() && kept[rep + 1] <= i {
            rep += 1;
        }
        points[i] = reduced_points[rep];
        // positions collapsed onto the closing side belong to p0
        if i > kept[rep] && d[kept[rep]][i] > 0.0 {
            points[i] = reduced_points[0];
        }
    }
    let config = ChainConfig {
        diagonals: (1..n).map(|i| points[0].dist(points[i])).collect(),
        folds: best.folds.clone(),
        points,
    };
    subembedding_slack(d, &config, best.c * scale)
}

/// Result of the exhaustive grid oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub c: f64,
    pub radii: Vec<f64>,
    pub folds: Vec<i8>,
    /// Grid step per free dimension.
    pub steps: Vec<f64>,
    /// Conservative resolution bound: twice the sum of grid steps.
    pub grid_error: f64,
}

/// Exhaustive grid search over free diagonals and all fold patterns
/// (n <= 5). Grids are endpoint-inclusive and nest under refinement, so
/// halving the step never increases the result.
pub fn brute_force_oracle(d: &[Vec<f64>], grid: usize) -> Result<OracleResult, SubembedError> {
    let n = check_table(d)?;
    if n < 3 {
        return Err(SubembedError::BadTupleSize(n, 3, 5));
    }
    if n > 5 {
        return Err(SubembedError::TooLarge(n, 5));
    }
    let kept = collapse_chain(d);
    if kept.len() < 3 {
        return Ok(OracleResult { c: 0.0, radii: vec![], folds: vec![], steps: vec![], grid_error: 0.0 });
    }
    let dr = sub_table(d, &kept);
    let m = dr.len();
    let scale = scale_of(&dr);
    let tol = 1e-12 * scale;
    let bounds = free_bounds(&dr);
    let dim = m - 3;
    let g = grid.max(2);

    let steps: Vec<f64> =
        bounds.iter().map(|&(lo, hi)| if hi > lo { (hi - lo) / (g - 1) as f64 } else { 0.0 }).collect();

    let mut best_c = f64::INFINITY;
    let mut best_r = Vec::new();
    let mut best_folds = Vec::new();
    let mut buf = Vec::with_capacity(m);
    for folds in fold_patterns(m - 2) {
        let total: usize = if dim == 0 { 1 } else { g.pow(dim as u32) };
        for idx in 0..total {
            let mut rem = idx;
            let mut free = vec![0.0; dim];
            for k in 0..dim {
                let s = rem % g;
                rem /= g;
                free[k] = bounds[k].0 + steps[k] * s as f64;
            }
            let r = full_radii(&dr, &free);
            let mut feasible = true;
            for i in 1..=m - 2 {
                let (a, b, c) = (r[i], r[i + 1], dr[i][i + 1]);
                if c > a + b + tol || c < (a - b).abs() - tol {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            place_fan(&dr, &r, &folds, &mut buf);
            let c = raw_defect(&dr, &buf).max(0.0);
            if c < best_c {
                best_c = c;
                best_r = r.clone();
                best_folds = folds.clone();
            }
        }
    }
    let grid_error = 2.0 * steps.iter().sum::<f64>();
    Ok(OracleResult { c: best_c, radii: best_r[1..].to_vec(), folds: best_folds, steps, grid_error })
}

/// Ordering-level defects aggregated over a point set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetDefectReport {
    /// Max over orderings of the per-ordering minimal constant.
    pub c_set: f64,
    pub worst_ordering: Vec<usize>,
    pub worst_cert: SubembeddingCertificate,
    pub orderings_checked: usize,
    pub per_ordering: Vec<(Vec<usize>, f64)>,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Set-level constant: max over tuple orderings (quotiented by chain
/// reversal) of the per-ordering minimal constant. Exhaustive for
/// `n <= 6`; larger sets need `ordering_sample`.
pub fn minimal_defect_set(
    m: &FiniteMetric,
    indices: &[usize],
    params: &SearchParams,
    ordering_sample: Option<(usize, u64)>,
) -> Result<SetDefectReport, SubembedError> {
    let n = indices.len();
    if n < 3 {
        return Err(SubembedError::BadTupleSize(n, 3, 8));
    }
    let mut orderings: Vec<Vec<usize>> = permutations(indices)
        .into_iter()
        // reversing the chain while keeping the base point is a planar
        // reflection; keep one representative
        .filter(|p| p[1] <= p[n - 1])
        .collect();
    if n > 6 {
        match ordering_sample {
            None => return Err(SubembedError::TooManyOrderings(orderings.len())),
            Some((count, seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut sampled = Vec::with_capacity(count.min(orderings.len()));
                for _ in 0..count.min(orderings.len()) {
                    let k = rng.gen_range(0..orderings.len());
                    sampled.push(orderings.swap_remove(k));
                }
                sampled.sort();
                orderings = sampled;
            }
        }
    }

    let results: Vec<(Vec<usize>, SubembeddingCertificate)> = orderings
        .par_iter()
        .map(|ord| {
            let table: Vec<Vec<f64>> =
                ord.iter().map(|&i| ord.iter().map(|&j| m.d(i, j)).collect()).collect();
            let mut cert = minimal_defect_ordered(&table, params)?;
            cert.ordering = ord.clone();
            Ok((ord.clone(), cert))
        })
        .collect::<Result<Vec<_>, SubembedError>>()?;

    let mut worst: Option<&(Vec<usize>, SubembeddingCertificate)> = None;
    for item in &results {
        let take = match worst {
            None => true,
            Some(w) => {
                item.1.c > w.1.c + SLACK_TOL
                    || ((item.1.c - w.1.c).abs() <= SLACK_TOL && item.0 < w.0)
            }
        };
        if take {
            worst = Some(item);
        }
    }
    let (worst_ordering, worst_cert) = worst.expect("at least one ordering").clone();
    Ok(SetDefectReport {
        c_set: worst_cert.c,
        worst_ordering,
        worst_cert,
        orderings_checked: results.len(),
        per_ordering: results.into_iter().map(|(o, c)| (o, c.c)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{path_metric, GraphSpace};

    fn star_tuple_table() -> Vec<Vec<f64>> {
        // ordered (center, a, b, c) of the unit star
        vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![1.0, 2.0, 0.0, 2.0],
            vec![1.0, 2.0, 2.0, 0.0],
        ]
    }

    fn c4_cyclic_table() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 1.0, 2.0, 1.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![2.0, 1.0, 0.0, 1.0],
            vec![1.0, 2.0, 1.0, 0.0],
        ]
    }

    fn c4_crossing_table() -> Vec<Vec<f64>> {
        // ordering (a, b, d, c) of the 4-cycle
        vec![
            vec![0.0, 1.0, 1.0, 2.0],
            vec![1.0, 0.0, 2.0, 1.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![2.0, 1.0, 1.0, 0.0],
        ]
    }

    #[test]
    fn realize_chain_star_tree() {
        let cfg = realize_chain(&star_tuple_table(), &[3f64.sqrt()], &[1, 1]).unwrap();
        let p = &cfg.points;
        assert!(p[1].dist(Point2::new(1.0, 0.0)) < 1e-9);
        assert!(p[2].dist(Point2::new(0.0, 3f64.sqrt())) < 1e-9);
        assert!(p[3].dist(Point2::new(-1.0, 0.0)) < 1e-9);
        assert!((p[1].dist(p[2]) - 2.0).abs() < 1e-9);
        assert!((p[2].dist(p[3]) - 2.0).abs() < 1e-9);
        assert!((p[1].dist(p[3]) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn realize_chain_collinear() {
        let d = vec![
            vec![0.0, 1.0, 2.0, 3.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![2.0, 1.0, 0.0, 1.0],
            vec![3.0, 2.0, 1.0, 0.0],
        ];
        let cfg = realize_chain(&d, &[2.0], &[1, 1]).unwrap();
        for (i, expect) in [(0usize, 0.0), (1, 1.0), (2, 2.0), (3, 3.0)] {
            assert!(cfg.points[i].dist(Point2::new(expect, 0.0)) < 1e-9, "{:?}", cfg.points);
        }
    }

    #[test]
    fn realize_chain_tight_fan_always_feasible() {
        let m = path_metric(&GraphSpace::cycle(6, 6.0)).unwrap();
        let d: Vec<Vec<f64>> =
            (0..5).map(|i| (0..5).map(|j| m.d(i, j)).collect()).collect();
        let free: Vec<f64> = (2..4).map(|i| d[0][i]).collect();
        assert!(realize_chain(&d, &free, &[1, 1, 1]).is_ok());
    }

    #[test]
    fn realize_chain_rejects_infeasible_fan() {
        let d = star_tuple_table();
        // r3 = 3 breaks the first fan triangle (1, 3, 2)
        assert!(matches!(
            realize_chain(&d, &[3.5], &[1, 1]),
            Err(SubembedError::FanTriangleInfeasible(..))
        ));
    }

    #[test]
    fn slack_star_tree_passes_with_zero() {
        let d = star_tuple_table();
        let cfg = realize_chain(&d, &[3f64.sqrt()], &[1, 1]).unwrap();
        let cert = subembedding_slack(&d, &cfg, 0.0).unwrap();
        assert!(cert.pass, "{:?}", cert.slacks);
    }

    #[test]
    fn slack_c4_cyclic_fails_with_one() {
        let d = c4_cyclic_table();
        // r3 is forced to 2: collinear fan, fourth point returns onto the second
        let cfg = realize_chain(&d, &[2.0], &[1, 1]).unwrap();
        let cert = subembedding_slack(&d, &cfg, 1.0).unwrap();
        assert!(!cert.pass);
        let pair = cert.slacks.cond3.iter().find(|&&(i, j, _)| (i, j) == (1, 3)).unwrap();
        assert!((pair.2 - (1.0 - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn slack_repeated_point_reduces() {
        // tuple (i, i, j, k) on the unit star: positions 0 and 1 coincide
        let d = vec![
            vec![0.0, 0.0, 2.0, 2.0],
            vec![0.0, 0.0, 2.0, 2.0],
            vec![2.0, 2.0, 0.0, 2.0],
            vec![2.0, 2.0, 2.0, 0.0],
        ];
        let cert = minimal_defect_ordered(&d, &SearchParams::default()).unwrap();
        assert!(cert.c <= 1e-6, "c = {}", cert.c);
        assert!(cert.pass);
    }

    #[test]
    fn minimal_defect_c4_cyclic_is_two() {
        let cert = minimal_defect_ordered(&c4_cyclic_table(), &SearchParams::default()).unwrap();
        assert!((cert.c - 2.0).abs() < 1e-6, "c = {}", cert.c);
    }

    #[test]
    fn minimal_defect_c4_crossing_is_zero() {
        let cert = minimal_defect_ordered(&c4_crossing_table(), &SearchParams::default()).unwrap();
        assert!(cert.c <= 1e-6, "c = {}", cert.c);
    }

    #[test]
    fn minimal_defect_star_tree_is_zero_at_sqrt3() {
        let cert = minimal_defect_ordered(&star_tuple_table(), &SearchParams::default()).unwrap();
        assert!(cert.c <= 1e-6, "c = {}", cert.c);
        assert!((cert.diagonals[1] - 3f64.sqrt()).abs() < 1e-4, "r3 = {}", cert.diagonals[1]);
    }

    #[test]
    fn planar_tuple_any_order_is_zero() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.3),
            Point2::new(1.1, 1.7),
            Point2::new(-0.4, 2.2),
            Point2::new(0.9, -1.0),
        ];
        for order in [[0usize, 1, 2, 3, 4], [2, 0, 4, 1, 3], [4, 3, 2, 1, 0]] {
            let d: Vec<Vec<f64>> = order
                .iter()
                .map(|&i| order.iter().map(|&j| pts[i].dist(pts[j])).collect())
                .collect();
            let cert = minimal_defect_ordered(&d, &SearchParams::default()).unwrap();
            assert!(cert.c <= 1e-6, "order {:?}: c = {}", order, cert.c);
        }
    }

    #[test]
    fn oracle_c4_cyclic() {
        let r = brute_force_oracle(&c4_cyclic_table(), 41).unwrap();
        assert!((r.c - 2.0).abs() <= r.grid_error.max(1e-9), "c = {}", r.c);
    }

    #[test]
    fn oracle_star_tree_minimizer_near_sqrt3() {
        let r = brute_force_oracle(&star_tuple_table(), 201).unwrap();
        assert!(r.c <= r.grid_error, "c = {}", r.c);
        assert!((r.radii[1] - 3f64.sqrt()).abs() <= 2.0 * r.steps[0] + 1e-9);
    }

    #[test]
    fn oracle_refinement_never_increases() {
        let m = path_metric(&GraphSpace::cycle(5, 5.0)).unwrap();
        let d: Vec<Vec<f64>> =
            (0..5).map(|i| (0..5).map(|j| m.d(i, j)).collect()).collect();
        let coarse = brute_force_oracle(&d, 21).unwrap();
        let fine = brute_force_oracle(&d, 41).unwrap();
        assert!(fine.c <= coarse.c + 1e-12);
    }

    #[test]
    fn set_level_c4_is_two_via_cyclic() {
        let m = path_metric(&GraphSpace::cycle(4, 4.0)).unwrap();
        let report =
            minimal_defect_set(&m, &[0, 1, 2, 3], &SearchParams::default(), None).unwrap();
        assert!((report.c_set - 2.0).abs() < 1e-6, "c_set = {}", report.c_set);
        // witness is a cyclic traversal of the 4-cycle
        let o = &report.worst_ordering;
        let pos: Vec<i64> = o.iter().map(|&x| x as i64).collect();
        let step = (pos[1] - pos[0]).rem_euclid(4);
        assert!(step == 1 || step == 3, "witness {:?}", o);
    }

    #[test]
    fn set_level_three_points_always_zero() {
        let m = path_metric(&GraphSpace::cycle(5, 5.0)).unwrap();
        let report = minimal_defect_set(&m, &[0, 2, 4], &SearchParams::default(), None).unwrap();
        assert!(report.c_set <= 1e-9, "c_set = {}", report.c_set);
    }

    #[test]
    fn scale_equivariance_power_of_two() {
        let d = c4_cyclic_table();
        let cert = minimal_defect_ordered(&d, &SearchParams::default()).unwrap();
        let scaled: Vec<Vec<f64>> =
            d.iter().map(|r| r.iter().map(|&v| v / 4.0).collect()).collect();
        let cert4 = minimal_defect_ordered(&scaled, &SearchParams::default()).unwrap();
        assert_eq!(cert4.c, cert.c / 4.0);
    }

    #[test]
    fn reversal_invariance() {
        let m = path_metric(&GraphSpace::cycle(6, 6.0)).unwrap();
        let fwd = [0usize, 2, 3, 5, 1];
        let rev = [0usize, 1, 5, 3, 2];
        let t = |ord: &[usize]| -> Vec<Vec<f64>> {
            ord.iter().map(|&i| ord.iter().map(|&j| m.d(i, j)).collect()).collect()
        };
        let a = minimal_defect_ordered(&t(&fwd), &SearchParams::default()).unwrap();
        let b = minimal_defect_ordered(&t(&rev), &SearchParams::default()).unwrap();
        assert!((a.c - b.c).abs() < 1e-6, "{} vs {}", a.c, b.c);
    }

    #[test]
    fn appending_repeat_never_increases() {
        let m = path_metric(&GraphSpace::cycle(5, 5.0)).unwrap();
        let base = [0usize, 1, 3, 4];
        let extended = [0usize, 1, 3, 4, 4];
        let t = |ord: &[usize]| -> Vec<Vec<f64>> {
            ord.iter().map(|&i| ord.iter().map(|&j| m.d(i, j)).collect()).collect()
        };
        let a = minimal_defect_ordered(&t(&base), &SearchParams::default()).unwrap();
        let b = minimal_defect_ordered(&t(&extended), &SearchParams::default()).unwrap();
        assert!(b.c <= a.c + 1e-9);
    }
}
