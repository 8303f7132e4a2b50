//! Rough comparison-triangle certification: measures how far a model space
//! is from satisfying the Euclidean comparison inequality on short
//! triangles, up to an additive constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{GraphMetric, GraphPoint, MetricError};
use crate::path::Polyline;
use crate::plane::{comparison_point, comparison_triangle, PlaneError, TriSide};
use crate::space::Space;

#[derive(Debug, Error)]
pub enum RcatError {
    #[error("roughness parameter {0} outside (0, 1]")]
    EpsOutOfRange(f64),
    #[error("h = {h} exceeds the admissible threshold {threshold}")]
    HTooLarge { h: f64, threshold: f64 },
    #[error("side {0} does not join the expected vertices")]
    SideEndpointMismatch(usize),
    #[error("side {side} has length {len}, not {h}-short for distance {dist}")]
    SideNotShort { side: usize, len: f64, dist: f64, h: f64 },
    #[error("need at least 2 samples per side, got {0}")]
    TooFewSamples(usize),
    #[error("triangle sampling budget is zero")]
    BudgetZero,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Threshold family parameter: the admissible side slack for a triangle on
/// `x, y, z` is `eps / (1 ∨ d(x,y) ∨ d(x,z) ∨ d(y,z))`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HParams {
    pub eps: f64,
}

impl HParams {
    /// The standard threshold (`eps = 1`).
    pub fn standard() -> Self {
        HParams { eps: 1.0 }
    }

    /// Strengthened variant with `eps` in `(0, 1]`.
    pub fn strengthened(eps: f64) -> Result<Self, RcatError> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(RcatError::EpsOutOfRange(eps));
        }
        Ok(HParams { eps })
    }
}

impl Default for HParams {
    fn default() -> Self {
        HParams::standard()
    }
}

/// Admissible side slack for a triangle with the given vertex distances.
pub fn h_threshold(d12: f64, d13: f64, d23: f64, params: &HParams) -> f64 {
    params.eps / 1.0_f64.max(d12).max(d13).max(d23)
}

/// A triangle of `h`-short sides in a model space. Sides are ordered
/// `[x-y, x-z, y-z]`.
#[derive(Debug, Clone)]
pub struct ShortTriangle<P> {
    pub vertices: [P; 3],
    pub sides: [Polyline<P>; 3],
    pub h: f64,
    /// `(d(x,y), d(x,z), d(y,z))`.
    pub vertex_dists: [f64; 3],
}

fn side_vertex_indices(side: usize) -> (usize, usize) {
    match side {
        0 => (0, 1),
        1 => (0, 2),
        _ => (1, 2),
    }
}

impl<P: Clone + PartialEq + std::fmt::Debug> ShortTriangle<P> {
    pub fn new<S: Space<Point = P>>(
        space: &S,
        vertices: [P; 3],
        sides: [Polyline<P>; 3],
        h: f64,
    ) -> Result<Self, RcatError> {
        let mut dists = [0.0; 3];
        for (k, side) in sides.iter().enumerate() {
            let (i, j) = side_vertex_indices(k);
            if side.first() != vertices[i] || side.last() != vertices[j] {
                return Err(RcatError::SideEndpointMismatch(k));
            }
            let dist = space.distance(&vertices[i], &vertices[j]);
            let len = side.length();
            if len > dist + h + 1e-9 * dist.max(1.0) {
                return Err(RcatError::SideNotShort { side: k, len, dist, h });
            }
            dists[k] = dist;
        }
        Ok(ShortTriangle { vertices, sides, h, vertex_dists: dists })
    }

    /// Triangle whose sides are geodesics (`h = 0`), which is admissible
    /// for every positive threshold.
    pub fn geodesic<S: Space<Point = P>>(space: &S, vertices: [P; 3]) -> Result<Self, RcatError> {
        let sides = [
            space.geodesic(&vertices[0], &vertices[1])?,
            space.geodesic(&vertices[0], &vertices[2])?,
            space.geodesic(&vertices[1], &vertices[2])?,
        ];
        Self::new(space, vertices, sides, 0.0)
    }
}

/// One sampled point in a defect report: side index and arc-length position
/// along that side.
pub type SidePosition = (usize, f64);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefectReport {
    /// Sup of `d(u,v) - |comparison(u) - comparison(v)|` over sampled
    /// cross-side pairs; negative when the inequality holds strictly.
    pub defect: f64,
    pub worst_pair: (SidePosition, SidePosition),
    /// Number of cross-side pairs evaluated.
    pub pairs: usize,
    /// Constant the report is judged against.
    pub c_tested: f64,
    pub pass: bool,
}

impl DefectReport {
    /// Re-judges the report against a different constant.
    pub fn against(mut self, c: f64) -> Self {
        self.c_tested = c;
        self.pass = self.defect <= c + 1e-12;
        self
    }
}

/// Measures the comparison defect of one short triangle on an arc-length-
/// uniform grid of `samples` points per side (endpoints included).
pub fn rcat_triangle_defect<S: Space>(
    space: &S,
    tri: &ShortTriangle<S::Point>,
    samples: usize,
    params: &HParams,
) -> Result<DefectReport, RcatError> {
    if samples < 2 {
        return Err(RcatError::TooFewSamples(samples));
    }
    let [d12, d13, d23] = tri.vertex_dists;
    let threshold = h_threshold(d12, d13, d23, params);
    if tri.h > threshold + 1e-12 {
        return Err(RcatError::HTooLarge { h: tri.h, threshold });
    }
    let comparison = comparison_triangle(d12, d13, d23)?;
    let tri_sides = [TriSide::Xy, TriSide::Xz, TriSide::Yz];

    // sample each side once: space point, comparison point, arc position
    let mut sampled: Vec<Vec<(S::Point, crate::plane::Point2, f64)>> = Vec::with_capacity(3);
    for (k, side) in tri.sides.iter().enumerate() {
        let len = side.length();
        let mut row = Vec::with_capacity(samples);
        for j in 0..samples {
            let s = len * j as f64 / (samples - 1) as f64;
            let u = space.point_along(side, s);
            let bar_u = comparison_point(&comparison, tri_sides[k], s, len - s)?;
            row.push((u, bar_u, s));
        }
        sampled.push(row);
    }

    let mut defect = f64::NEG_INFINITY;
    let mut worst = ((0usize, 0.0), (1usize, 0.0));
    let mut pairs = 0usize;
    for a in 0..3 {
        for b in (a + 1)..3 {
            for (u, bar_u, su) in &sampled[a] {
                for (v, bar_v, sv) in &sampled[b] {
                    let gap = space.distance(u, v) - bar_u.dist(*bar_v);
                    pairs += 1;
                    if gap > defect {
                        defect = gap;
                        worst = ((a, *su), (b, *sv));
                    }
                }
            }
        }
    }
    Ok(DefectReport { defect, worst_pair: worst, pairs, c_tested: 0.0, pass: defect <= 1e-12 })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDefectReport {
    /// Max triangle defect over the sampled vertex triples: a lower bound
    /// for the true constant of the space.
    pub defect: f64,
    pub witness: [usize; 3],
    pub triangles_checked: usize,
    pub samples_per_side: usize,
}

/// Estimates the minimal comparison constant of a graph model by maximizing
/// the triangle defect over vertex triples with geodesic (`h = 0`) sides.
///
/// When the number of triples exceeds `budget`, an evenly strided subset is
/// used, keeping the estimate deterministic. The result only lower-bounds
/// the true constant of the space.
pub fn rcat_space_defect(
    g: &GraphMetric,
    budget: usize,
    samples_per_side: usize,
    params: &HParams,
) -> Result<SpaceDefectReport, RcatError> {
    if budget == 0 {
        return Err(RcatError::BudgetZero);
    }
    let n = g.n();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                triples.push([i, j, k]);
            }
        }
    }
    if triples.len() > budget {
        let stride = triples.len().div_ceil(budget);
        triples = triples.into_iter().step_by(stride).collect();
    }
    if triples.is_empty() {
        return Err(RcatError::BudgetZero);
    }

    let reports: Vec<(usize, [usize; 3], f64)> = triples
        .par_iter()
        .enumerate()
        .map(|(idx, &t)| {
            let vertices = [GraphPoint::Vertex(t[0]), GraphPoint::Vertex(t[1]), GraphPoint::Vertex(t[2])];
            let tri = ShortTriangle::geodesic(g, vertices)?;
            let report = rcat_triangle_defect(g, &tri, samples_per_side, params)?;
            Ok((idx, t, report.defect))
        })
        .collect::<Result<Vec<_>, RcatError>>()?;

    let (_, witness, defect) = reports
        .into_iter()
        .reduce(|best, cur| {
            // deterministic: strictly better defect wins, earlier triple on ties
            if cur.2 > best.2 { cur } else { best }
        })
        .expect("nonempty triples");
    Ok(SpaceDefectReport {
        defect,
        witness,
        triangles_checked: triples.len(),
        samples_per_side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::GraphSpace;
    use crate::plane::Point2;
    use crate::space::EuclideanPlane;

    #[test]
    fn threshold_examples() {
        let std = HParams::standard();
        assert_eq!(h_threshold(0.5, 0.5, 0.5, &std), 1.0);
        assert!((h_threshold(2.0, 3.0, 6.0, &std) - 1.0 / 6.0).abs() < 1e-15);
        let quarter = HParams::strengthened(0.25).unwrap();
        assert_eq!(h_threshold(4.0, 1.0, 1.0, &quarter), 0.0625);
    }

    #[test]
    fn strengthened_rejects_bad_eps() {
        assert!(HParams::strengthened(0.0).is_err());
        assert!(HParams::strengthened(1.5).is_err());
    }

    #[test]
    fn planar_triangle_has_zero_defect() {
        let plane = EuclideanPlane;
        let tri = ShortTriangle::geodesic(
            &plane,
            [Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(1.0, 2.5)],
        )
        .unwrap();
        let report = rcat_triangle_defect(&plane, &tri, 17, &HParams::standard()).unwrap();
        assert!(report.defect.abs() <= 1e-9, "defect = {}", report.defect);
        assert!(report.pass);
    }

    #[test]
    fn tripod_triangle_defect_nonpositive() {
        let g = GraphMetric::new(GraphSpace::star(3)).unwrap();
        let tri = ShortTriangle::geodesic(
            &g,
            [GraphPoint::Vertex(1), GraphPoint::Vertex(2), GraphPoint::Vertex(3)],
        )
        .unwrap();
        // 5 samples per side of length 2 puts the center (s = 1) on the grid
        let report = rcat_triangle_defect(&g, &tri, 5, &HParams::standard()).unwrap();
        assert!(report.defect <= 1e-9, "defect = {}", report.defect);
        // the center appears on two sides: d = 0 against midline length 1
        let c = comparison_triangle(2.0, 2.0, 2.0).unwrap();
        let m1 = comparison_point(&c, TriSide::Xy, 1.0, 1.0).unwrap();
        let m2 = comparison_point(&c, TriSide::Xz, 1.0, 1.0).unwrap();
        assert!((m1.dist(m2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_triangle_defect_positive() {
        let g = GraphMetric::new(GraphSpace::cycle(256, 4.0)).unwrap();
        let tri = ShortTriangle::geodesic(
            &g,
            [GraphPoint::Vertex(0), GraphPoint::Vertex(85), GraphPoint::Vertex(171)],
        )
        .unwrap();
        let report = rcat_triangle_defect(&g, &tri, 33, &HParams::standard()).unwrap();
        assert!(report.defect > 0.0, "defect = {}", report.defect);
    }

    #[test]
    fn defect_monotone_under_grid_refinement() {
        let g = GraphMetric::new(GraphSpace::cycle(16, 4.0)).unwrap();
        let tri = ShortTriangle::geodesic(
            &g,
            [GraphPoint::Vertex(0), GraphPoint::Vertex(5), GraphPoint::Vertex(11)],
        )
        .unwrap();
        let coarse = rcat_triangle_defect(&g, &tri, 5, &HParams::standard()).unwrap();
        // 4 intervals refine into 8: the coarse grid is a subset
        let fine = rcat_triangle_defect(&g, &tri, 9, &HParams::standard()).unwrap();
        assert!(fine.defect >= coarse.defect - 1e-12);
    }

    #[test]
    fn h_too_large_rejected() {
        let plane = EuclideanPlane;
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(5.0, 0.0);
        let c = Point2::new(0.0, 5.0);
        let sides = [
            plane.geodesic(&a, &b).unwrap(),
            plane.geodesic(&a, &c).unwrap(),
            plane.geodesic(&b, &c).unwrap(),
        ];
        let tri = ShortTriangle::new(&plane, [a, b, c], sides, 0.5).unwrap();
        assert!(matches!(
            rcat_triangle_defect(&plane, &tri, 5, &HParams::standard()),
            Err(RcatError::HTooLarge { .. })
        ));
    }

    #[test]
    fn space_defect_tree_nonpositive() {
        // caterpillar tree: path with pendant leaves
        let mut edges: Vec<(usize, usize, f64)> = (0..7).map(|i| (i, i + 1, 0.7 + 0.1 * i as f64)).collect();
        for i in 0..6 {
            edges.push((i, 8 + i, 0.5 + 0.2 * i as f64));
        }
        let g = GraphMetric::new(GraphSpace::new(14, edges)).unwrap();
        let report = rcat_space_defect(&g, 10_000, 9, &HParams::standard()).unwrap();
        assert!(report.defect <= 1e-9, "defect = {}", report.defect);
    }

    #[test]
    fn space_defect_circle_at_least_half() {
        let g = GraphMetric::new(GraphSpace::cycle(16, 4.0)).unwrap();
        let report = rcat_space_defect(&g, 10_000, 17, &HParams::standard()).unwrap();
        assert!(report.defect >= 0.5, "defect = {}", report.defect);
    }

    #[test]
    fn zero_budget_rejected() {
        let g = GraphMetric::new(GraphSpace::cycle(4, 4.0)).unwrap();
        assert!(matches!(
            rcat_space_defect(&g, 0, 5, &HParams::standard()),
            Err(RcatError::BudgetZero)
        ));
    }
}
