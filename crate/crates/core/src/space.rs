//! Model spaces with computable distances and short paths.

use crate::metric::{GraphMetric, GraphPoint, MetricError};
use crate::path::Polyline;
use crate::plane::Point2;

/// A metric model in which distances can be evaluated between arbitrary
/// points and short paths between points can be produced and sampled.
pub trait Space {
    type Point: Clone + PartialEq + std::fmt::Debug;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// A shortest path from `a` to `b`; its length must equal
    /// `distance(a, b)` whenever the model is geodesic.
    fn geodesic(&self, a: &Self::Point, b: &Self::Point)
        -> Result<Polyline<Self::Point>, MetricError>;

    /// Point at arc-length parameter `s` along a path in this space.
    fn point_along(&self, path: &Polyline<Self::Point>, s: f64) -> Self::Point;
}

/// The Euclidean plane: exactly geodesic, its own comparison space.
#[derive(Debug, Clone, Copy, Default)]
pub struct EuclideanPlane;

impl Space for EuclideanPlane {
    type Point = Point2;

    fn distance(&self, a: &Point2, b: &Point2) -> f64 {
        a.dist(*b)
    }

    fn geodesic(&self, a: &Point2, b: &Point2) -> Result<Polyline<Point2>, MetricError> {
        Ok(Polyline::new(vec![*a, *b], |p, q| p.dist(*q)).expect("two points"))
    }

    fn point_along(&self, path: &Polyline<Point2>, s: f64) -> Point2 {
        path.point_at(s, |a, b, r| a.lerp(*b, r))
    }
}

impl Space for GraphMetric {
    type Point = GraphPoint;

    fn distance(&self, a: &GraphPoint, b: &GraphPoint) -> f64 {
        self.point_distance(a, b)
    }

    /// Only vertex-to-vertex geodesics are supported; edge-interior
    /// endpoints would need edge subdivision.
    fn geodesic(&self, a: &GraphPoint, b: &GraphPoint) -> Result<Polyline<GraphPoint>, MetricError> {
        match (a, b) {
            (GraphPoint::Vertex(i), GraphPoint::Vertex(j)) => GraphMetric::geodesic(self, *i, *j),
            _ => Err(MetricError::IndexOutOfRange(usize::MAX, self.n())),
        }
    }

    fn point_along(&self, path: &Polyline<GraphPoint>, s: f64) -> GraphPoint {
        GraphMetric::point_along(self, path, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::GraphSpace;

    #[test]
    fn plane_geodesic_is_straight() {
        let p = EuclideanPlane;
        let g = p.geodesic(&Point2::new(0.0, 0.0), &Point2::new(3.0, 4.0)).unwrap();
        assert_eq!(g.length(), 5.0);
        let mid = p.point_along(&g, 2.5);
        assert!(mid.dist(Point2::new(1.5, 2.0)) < 1e-12);
    }

    #[test]
    fn graph_point_along_hits_edge_interior() {
        let g = GraphMetric::new(GraphSpace::path(4)).unwrap();
        let path = Space::geodesic(&g, &GraphPoint::Vertex(0), &GraphPoint::Vertex(3)).unwrap();
        assert_eq!(path.length(), 3.0);
        let p = Space::point_along(&g, &path, 1.5);
        match p {
            GraphPoint::Edge { u, v, t } => {
                assert_eq!((u, v), (1, 2));
                assert!((t - 0.5).abs() < 1e-12);
            }
            other => panic!("expected edge point, got {other:?}"),
        }
        assert!((g.point_distance(&GraphPoint::Vertex(0), &p) - 1.5).abs() < 1e-12);
    }
}
