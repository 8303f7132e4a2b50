//! Validated finite metric spaces and weighted-graph length-space models.
//!
//! Graphs are the desk-scale surrogate for abstract length spaces: their
//! geodesics are exactly 0-short, so they qualify for every positive
//! shortness threshold.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::Polyline;
use crate::plane::Point2;

/// Default absolute tolerance for the metric axioms on O(1)-scaled inputs.
pub const METRIC_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("matrix is not square: row {0} has {1} entries, expected {2}")]
    NotSquare(usize, usize, usize),
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("non-finite entry at ({0}, {1})")]
    NonFiniteEntry(usize, usize),
    #[error("nonzero diagonal at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetry at ({0}, {1})")]
    Asymmetry(usize, usize),
    #[error("triangle inequality violated: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("index {0} out of range for {1} points")]
    IndexOutOfRange(usize, usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, f64),
    #[error("edge endpoint {0} out of range for {1} vertices")]
    EdgeEndpointOutOfRange(usize, usize),
    #[error("graph point references missing edge ({0}, {1})")]
    MissingEdge(usize, usize),
}

/// A validated symmetric distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    pub n: usize,
    pub dist: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Largest entry, used as the natural scale of the space.
    pub fn diameter(&self) -> f64 {
        self.dist
            .iter()
            .flat_map(|row| row.iter().copied())
            .fold(0.0, f64::max)
    }

    /// Scales every distance by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> FiniteMetric {
        FiniteMetric {
            n: self.n,
            dist: self
                .dist
                .iter()
                .map(|row| row.iter().map(|&d| d * lambda).collect())
                .collect(),
        }
    }
}

/// Validates a square table as a finite metric with the default tolerance.
pub fn validate_metric(matrix: Vec<Vec<f64>>) -> Result<FiniteMetric, MetricError> {
    validate_metric_with_tol(matrix, METRIC_TOL)
}

/// Validates a square table as a finite metric, reporting the first
/// violated axiom and its indices.
pub fn validate_metric_with_tol(
    matrix: Vec<Vec<f64>>,
    tol: f64,
) -> Result<FiniteMetric, MetricError> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(MetricError::NotSquare(i, row.len(), n));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = matrix[i][j];
            if !d.is_finite() {
                return Err(MetricError::NonFiniteEntry(i, j));
            }
            if d < -tol {
                return Err(MetricError::NegativeEntry(i, j));
            }
        }
        if matrix[i][i].abs() > tol {
            return Err(MetricError::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (matrix[i][j] - matrix[j][i]).abs() > tol {
                return Err(MetricError::Asymmetry(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if matrix[i][k] > matrix[i][j] + matrix[j][k] + tol {
                    return Err(MetricError::TriangleViolation(i, j, k));
                }
            }
        }
    }
    Ok(FiniteMetric { n, dist: matrix })
}

/// A connected weighted graph with optional planar vertex coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpace {
    pub vertices: usize,
    /// `(u, v, weight)` with positive weights.
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Point2>>,
}

impl GraphSpace {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        GraphSpace { vertices, edges, coords: None }
    }

    /// Path graph 0-1-...-(n-1) with unit weights.
    pub fn path(n: usize) -> Self {
        GraphSpace::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1, 1.0)).collect())
    }

    /// Cycle on `k` vertices with total circumference `circ`.
    pub fn cycle(k: usize, circ: f64) -> Self {
        let w = circ / k as f64;
        GraphSpace::new(k, (0..k).map(|i| (i, (i + 1) % k, w)).collect())
    }

    /// Star with the center at vertex 0 and `leaves` unit-weight edges.
    pub fn star(leaves: usize) -> Self {
        GraphSpace::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1.0)).collect())
    }
}

/// A position in a graph: either a vertex or an interior point of an edge
/// at distance `t` from endpoint `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { u: usize, v: usize, t: f64 },
}

/// A graph together with its all-pairs path metric and geodesic retrieval.
#[derive(Debug, Clone)]
pub struct GraphMetric {
    pub space: GraphSpace,
    metric: FiniteMetric,
    /// `next[i][j]`: first hop from `i` on the chosen shortest path to `j`.
    next: Vec<Vec<usize>>,
    weights: HashMap<(usize, usize), f64>,
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    if u <= v { (u, v) } else { (v, u) }
}

impl GraphMetric {
    /// Runs all-pairs shortest paths. Ties between equal-length paths are
    /// broken deterministically by the enumeration order of intermediate
    /// vertices.
    pub fn new(space: GraphSpace) -> Result<Self, MetricError> {
        let n = space.vertices;
        let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
        for &(u, v, w) in &space.edges {
            if u >= n {
                return Err(MetricError::EdgeEndpointOutOfRange(u, n));
            }
            if v >= n {
                return Err(MetricError::EdgeEndpointOutOfRange(v, n));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(MetricError::NonPositiveWeight(u, v, w));
            }
            if u == v {
                continue;
            }
            let e = weights.entry(edge_key(u, v)).or_insert(w);
            if w < *e {
                *e = w;
            }
        }

        let mut dist = vec![vec![f64::INFINITY; n]; n];
        let mut next = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            dist[i][i] = 0.0;
            next[i][i] = i;
        }
        for (&(u, v), &w) in &weights {
            dist[u][v] = w;
            dist[v][u] = w;
            next[u][v] = v;
            next[v][u] = u;
        }
        for k in 0..n {
            for i in 0..n {
                if dist[i][k].is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                        next[i][j] = next[i][k];
                    }
                }
            }
        }
        if dist.iter().flatten().any(|d| d.is_infinite()) {
            return Err(MetricError::DisconnectedGraph);
        }

        // Recompute distances by walking the reconstructed paths so that
        // geodesic lengths and matrix entries share the same arithmetic.
        let mut exact = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut acc = 0.0;
                let mut cur = i;
                while cur != j {
                    let hop = next[cur][j];
                    acc += weights[&edge_key(cur, hop)];
                    cur = hop;
                }
                exact[i][j] = acc;
            }
        }

        Ok(GraphMetric {
            space,
            metric: FiniteMetric { n, dist: exact },
            next,
            weights,
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn n(&self) -> usize {
        self.metric.n
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Result<f64, MetricError> {
        self.weights
            .get(&edge_key(u, v))
            .copied()
            .ok_or(MetricError::MissingEdge(u, v))
    }

    /// Geodesic vertex path from `i` to `j`; its length equals the metric
    /// entry exactly.
    pub fn geodesic(&self, i: usize, j: usize) -> Result<Polyline<GraphPoint>, MetricError> {
        let n = self.metric.n;
        if i >= n {
            return Err(MetricError::IndexOutOfRange(i, n));
        }
        if j >= n {
            return Err(MetricError::IndexOutOfRange(j, n));
        }
        let mut pts = vec![GraphPoint::Vertex(i)];
        let mut lens = Vec::new();
        let mut cur = i;
        while cur != j {
            let hop = self.next[cur][j];
            lens.push(self.weights[&edge_key(cur, hop)]);
            pts.push(GraphPoint::Vertex(hop));
            cur = hop;
        }
        Ok(Polyline::with_lengths(pts, lens).expect("valid geodesic"))
    }

    /// Distance between two graph points (vertices or edge-interior points).
    pub fn point_distance(&self, a: &GraphPoint, b: &GraphPoint) -> f64 {
        let d = &self.metric.dist;
        match (*a, *b) {
            (GraphPoint::Vertex(u), GraphPoint::Vertex(v)) => d[u][v],
            (GraphPoint::Vertex(p), GraphPoint::Edge { u, v, t }) => {
                let w = self.weights[&edge_key(u, v)];
                (d[p][u] + t).min(d[p][v] + (w - t))
            }
            (GraphPoint::Edge { u, v, t }, GraphPoint::Vertex(p)) => {
                let w = self.weights[&edge_key(u, v)];
                (d[p][u] + t).min(d[p][v] + (w - t))
            }
            (GraphPoint::Edge { u: u1, v: v1, t: t1 }, GraphPoint::Edge { u: u2, v: v2, t: t2 }) => {
                let w1 = self.weights[&edge_key(u1, v1)];
                let w2 = self.weights[&edge_key(u2, v2)];
                let mut best = f64::INFINITY;
                if edge_key(u1, v1) == edge_key(u2, v2) {
                    // Align orientation along the shared edge.
                    let s2 = if u1 == u2 { t2 } else { w2 - t2 };
                    best = (t1 - s2).abs();
                }
                for (p, tp) in [(u1, t1), (v1, w1 - t1)] {
                    for (q, tq) in [(u2, t2), (v2, w2 - t2)] {
                        best = best.min(tp + d[p][q] + tq);
                    }
                }
                best
            }
        }
    }

    /// Point at arc-length parameter `s` along a geodesic vertex path.
    pub fn point_along(&self, path: &Polyline<GraphPoint>, s: f64) -> GraphPoint {
        match path.locate(s) {
            None => path.first(),
            Some((idx, off)) => {
                let a = path.points()[idx];
                let b = path.points()[idx + 1];
                let l = path.seg_lengths()[idx];
                if off <= 0.0 {
                    a
                } else if off >= l {
                    b
                } else {
                    match (a, b) {
                        (GraphPoint::Vertex(u), GraphPoint::Vertex(v)) => {
                            GraphPoint::Edge { u, v, t: off }
                        }
                        // Polylines from `geodesic` only contain vertices.
                        _ => a,
                    }
                }
            }
        }
    }
}

/// All-pairs path metric of a connected graph.
pub fn path_metric(g: &GraphSpace) -> Result<FiniteMetric, MetricError> {
    Ok(GraphMetric::new(g.clone())?.metric().clone())
}

/// Ordered tuple distance sub-table with repeated-point flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleDistances {
    pub table: Vec<Vec<f64>>,
    /// Positions `(a, b)` within the tuple whose points coincide
    /// (zero distance).
    pub repeats: Vec<(usize, usize)>,
}

/// Extracts the k×k distance table of an ordered index tuple; repeats are
/// allowed and flagged.
pub fn tuple_distances(m: &FiniteMetric, indices: &[usize]) -> Result<TupleDistances, MetricError> {
    for &i in indices {
        if i >= m.n {
            return Err(MetricError::IndexOutOfRange(i, m.n));
        }
    }
    let k = indices.len();
    let mut table = vec![vec![0.0; k]; k];
    let mut repeats = Vec::new();
    for a in 0..k {
        for b in 0..k {
            table[a][b] = m.dist[indices[a]][indices[b]];
            if a < b && table[a][b] == 0.0 {
                repeats.push((a, b));
            }
        }
    }
    Ok(TupleDistances { table, repeats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_two_point_metric() {
        assert!(validate_metric(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_ok());
    }

    #[test]
    fn rejects_asymmetry() {
        assert_eq!(
            validate_metric(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(MetricError::Asymmetry(0, 1))
        );
    }

    #[test]
    fn rejects_triangle_violation() {
        let m = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert_eq!(validate_metric(m), Err(MetricError::TriangleViolation(0, 1, 2)));
    }

    #[test]
    fn rejects_negative_and_diagonal() {
        assert_eq!(
            validate_metric(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(MetricError::NegativeEntry(0, 1))
        );
        assert_eq!(
            validate_metric(vec![vec![0.5, 1.0], vec![1.0, 0.0]]),
            Err(MetricError::NonzeroDiagonal(0))
        );
    }

    #[test]
    fn path_graph_metric() {
        let m = path_metric(&GraphSpace::path(3)).unwrap();
        assert_eq!(m.d(0, 2), 2.0);
        assert_eq!(m.d(0, 1), 1.0);
    }

    #[test]
    fn cycle_metric() {
        let m = path_metric(&GraphSpace::cycle(4, 4.0)).unwrap();
        assert_eq!(m.d(0, 2), 2.0);
        assert_eq!(m.d(1, 3), 2.0);
        assert_eq!(m.d(0, 1), 1.0);
        assert_eq!(m.d(2, 3), 1.0);
    }

    #[test]
    fn star_metric() {
        let m = path_metric(&GraphSpace::star(3)).unwrap();
        assert_eq!(m.d(1, 2), 2.0);
        assert_eq!(m.d(0, 1), 1.0);
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = GraphSpace::new(3, vec![(0, 1, 1.0)]);
        assert!(matches!(path_metric(&g), Err(MetricError::DisconnectedGraph)));
    }

    #[test]
    fn path_metric_passes_validation() {
        for g in [GraphSpace::path(5), GraphSpace::cycle(7, 3.5), GraphSpace::star(4)] {
            let m = path_metric(&g).unwrap();
            assert!(validate_metric(m.dist).is_ok());
        }
    }

    #[test]
    fn geodesic_length_matches_metric_exactly() {
        let g = GraphSpace::new(
            5,
            vec![(0, 1, 0.3), (1, 2, 0.7), (2, 3, 0.1), (3, 4, 0.9), (0, 4, 2.3), (1, 3, 0.85)],
        );
        let gm = GraphMetric::new(g).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let geo = gm.geodesic(i, j).unwrap();
                assert_eq!(geo.length(), gm.metric().d(i, j), "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn tuple_distances_c4() {
        let m = path_metric(&GraphSpace::cycle(4, 4.0)).unwrap();
        let t = tuple_distances(&m, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            t.table,
            vec![
                vec![0.0, 1.0, 2.0, 1.0],
                vec![1.0, 0.0, 1.0, 2.0],
                vec![2.0, 1.0, 0.0, 1.0],
                vec![1.0, 2.0, 1.0, 0.0],
            ]
        );
        assert!(t.repeats.is_empty());
    }

    #[test]
    fn tuple_distances_repeat_flagged() {
        let m = path_metric(&GraphSpace::path(3)).unwrap();
        let t = tuple_distances(&m, &[1, 1]).unwrap();
        assert_eq!(t.table, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(t.repeats, vec![(0, 1)]);
    }

    #[test]
    fn tuple_distances_star() {
        let m = path_metric(&GraphSpace::star(3)).unwrap();
        let t = tuple_distances(&m, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            t.table,
            vec![
                vec![0.0, 1.0, 1.0, 1.0],
                vec![1.0, 0.0, 2.0, 2.0],
                vec![1.0, 2.0, 0.0, 2.0],
                vec![1.0, 2.0, 2.0, 0.0],
            ]
        );
    }

    #[test]
    fn tuple_distances_rejects_out_of_range() {
        let m = path_metric(&GraphSpace::path(3)).unwrap();
        assert_eq!(tuple_distances(&m, &[0, 5]), Err(MetricError::IndexOutOfRange(5, 3)));
    }

    #[test]
    fn tuple_permutation_is_permuted_table() {
        let m = path_metric(&GraphSpace::cycle(5, 5.0)).unwrap();
        let base = tuple_distances(&m, &[0, 1, 2, 3]).unwrap();
        let perm = tuple_distances(&m, &[2, 0, 3, 1]).unwrap();
        let p = [2usize, 0, 3, 1];
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(perm.table[a][b], m.d(p[a], p[b]));
                // permuted positions of the base tuple
                assert_eq!(perm.table[a][b], base.table[p[a]][p[b]]);
            }
        }
    }

    #[test]
    fn edge_point_distances() {
        let gm = GraphMetric::new(GraphSpace::cycle(4, 4.0)).unwrap();
        let a = GraphPoint::Edge { u: 0, v: 1, t: 0.5 };
        let b = GraphPoint::Edge { u: 2, v: 3, t: 0.5 };
        // 0.5 around either way
        assert_eq!(gm.point_distance(&a, &b), 2.0);
        let c = GraphPoint::Edge { u: 1, v: 0, t: 0.5 };
        // same edge, opposite orientation
        assert_eq!(gm.point_distance(&a, &c), 0.0);
        let v = GraphPoint::Vertex(2);
        assert_eq!(gm.point_distance(&v, &a), 1.5);
    }
}
