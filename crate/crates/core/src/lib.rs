//! Certification toolkit for rough nonpositive curvature in metric spaces.
//!
//! The crate provides exact finite-metric and graph-metric machinery,
//! planar comparison geometry, a searcher for minimal rough-subembedding
//! constants of ordered tuples, triangle-defect certification, polygon
//! gluing constructions, and convergence experiments tying them together.

pub mod experiments;
pub mod glue;
pub mod metric;
pub mod path;
pub mod plane;
pub mod rcat;
pub mod simplex;
pub mod space;
pub mod subembed;

pub use glue::{ConvexPolygon, GlueError, GluedPolygon, NgonMapDescriptor, ShortNgon, SimplePolygonSpace};
pub use metric::{FiniteMetric, GraphMetric, GraphPoint, GraphSpace, MetricError};
pub use path::{PathError, Polyline};
pub use plane::{ComparisonTriangle, PlaneError, Point2};
pub use rcat::{DefectReport, HParams, RcatError, ShortTriangle, SpaceDefectReport};
pub use space::{EuclideanPlane, Space};
pub use subembed::{
    ChainConfig, SearchParams, SetDefectReport, SubembedError, SubembeddingCertificate,
};
