//! Euclidean-plane primitives: comparison triangles, comparison points,
//! the parallelogram-law identity, and executable deviation/comparison
//! bound checks for short segments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::Polyline;

/// A point of the Euclidean plane. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for (f64, f64) {
    fn from(p: Point2) -> Self {
        (p.x, p.y)
    }
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn add(self, other: Point2) -> Point2 {
        Point2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    /// Linear interpolation: `self + r (other - self)`.
    pub fn lerp(self, other: Point2, r: f64) -> Point2 {
        Point2::new(self.x + r * (other.x - self.x), self.y + r * (other.y - self.y))
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Nearest point on segment `[a, b]` to `p`.
pub fn project_to_segment(p: Point2, a: Point2, b: Point2) -> Point2 {
    let ab = b.sub(a);
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return a;
    }
    let t = (p.sub(a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a.lerp(b, t)
}

/// Distance from `p` to segment `[a, b]`.
pub fn dist_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    p.dist(project_to_segment(p, a, b))
}

#[derive(Debug, Error, PartialEq)]
pub enum PlaneError {
    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequalityViolation(f64, f64, f64),
    #[error("negative side length {0}")]
    NegativeLength(f64),
    #[error("sub-path lengths {before} + {after} shorter than side {side}")]
    LengthsShorterThanSide { before: f64, after: f64, side: f64 },
    #[error("ratio {0} outside [0, 1]")]
    RatioOutOfRange(f64),
    #[error("path of length {len} is not {h}-short for endpoint distance {dist}")]
    NotHShort { len: f64, dist: f64, h: f64 },
    #[error("base segment has zero length")]
    ZeroBaseSegment,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("path endpoints do not match the given base points")]
    EndpointMismatch,
}

/// Euclidean triangle in canonical pose realizing three prescribed side
/// lengths: first vertex at the origin, second on the nonnegative x-axis,
/// third with nonnegative y.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonTriangle {
    pub x: Point2,
    pub y: Point2,
    pub z: Point2,
    /// Prescribed side lengths (d_xy, d_xz, d_yz).
    pub sides: [f64; 3],
}

/// Which side of a comparison triangle, named by its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriSide {
    Xy,
    Xz,
    Yz,
}

impl ComparisonTriangle {
    pub fn side_endpoints(&self, side: TriSide) -> (Point2, Point2) {
        match side {
            TriSide::Xy => (self.x, self.y),
            TriSide::Xz => (self.x, self.z),
            TriSide::Yz => (self.y, self.z),
        }
    }

    pub fn side_length(&self, side: TriSide) -> f64 {
        match side {
            TriSide::Xy => self.sides[0],
            TriSide::Xz => self.sides[1],
            TriSide::Yz => self.sides[2],
        }
    }
}

/// Builds the comparison triangle for side lengths `(d12, d13, d23)`.
///
/// Degenerate (collinear) triples are allowed; a violation of the triangle
/// inequality beyond `1e-9` (relative to the largest side) is an error.
pub fn comparison_triangle(d12: f64, d13: f64, d23: f64) -> Result<ComparisonTriangle, PlaneError> {
    for &d in &[d12, d13, d23] {
        if d < 0.0 || !d.is_finite() {
            return Err(PlaneError::NegativeLength(d));
        }
    }
    let scale = d12.max(d13).max(d23).max(1.0);
    let tol = 1e-9 * scale;
    if d12 + d13 < d23 - tol || d12 + d23 < d13 - tol || d13 + d23 < d12 - tol {
        return Err(PlaneError::TriangleInequalityViolation(d12, d13, d23));
    }
    let x = Point2::new(0.0, 0.0);
    let y = Point2::new(d12, 0.0);
    let z = if d12 == 0.0 {
        // x and y coincide; put z on the +x axis.
        Point2::new(d13, 0.0)
    } else {
        let cx = (d12 * d12 + d13 * d13 - d23 * d23) / (2.0 * d12);
        let cy_sq = d13 * d13 - cx * cx;
        Point2::new(cx, cy_sq.max(0.0).sqrt())
    };
    Ok(ComparisonTriangle { x, y, z, sides: [d12, d13, d23] })
}

/// Places a comparison point on a side by the proportional rule: at
/// distance `len_before * side / (len_before + len_after)` from the side's
/// first endpoint.
///
/// Requires `len_before + len_after >= side length`, which makes the result
/// satisfy both comparison-point inequalities.
pub fn comparison_point(
    tri: &ComparisonTriangle,
    side: TriSide,
    len_before: f64,
    len_after: f64,
) -> Result<Point2, PlaneError> {
    if len_before < 0.0 || len_after < 0.0 {
        return Err(PlaneError::NegativeLength(len_before.min(len_after)));
    }
    let side_len = tri.side_length(side);
    let total = len_before + len_after;
    let tol = 1e-9 * side_len.max(1.0);
    if total < side_len - tol {
        return Err(PlaneError::LengthsShorterThanSide { before: len_before, after: len_after, side: side_len });
    }
    let (a, b) = tri.side_endpoints(side);
    if total == 0.0 || side_len == 0.0 {
        return Ok(a);
    }
    let r = (len_before / total).clamp(0.0, 1.0);
    Ok(a.lerp(b, r))
}

/// Evaluates both sides of the parallelogram-law identity for the point
/// `w = y + r (z - y)`:
/// `|x-w|^2 = (1-r)|x-y|^2 + r|x-z|^2 - r(1-r)|y-z|^2`.
///
/// Returns `(w, lhs, rhs)` with `lhs` computed directly and `rhs` by the
/// identity.
pub fn parallelogram_point(
    x: Point2,
    y: Point2,
    z: Point2,
    r: f64,
) -> Result<(Point2, f64, f64), PlaneError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(PlaneError::RatioOutOfRange(r));
    }
    let w = y.lerp(z, r);
    let lhs = x.dist_sq(w);
    let rhs = (1.0 - r) * x.dist_sq(y) + r * x.dist_sq(z) - r * (1.0 - r) * y.dist_sq(z);
    Ok((w, lhs, rhs))
}

/// Deviation report for the nearest-point projection of an h-short planar
/// path onto its base segment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionReport {
    /// Arc-length parameters of the samples.
    pub params: Vec<f64>,
    /// Sampled path points.
    pub path_points: Vec<Point2>,
    /// Projected points on the base segment.
    pub projected: Vec<Point2>,
    /// Per-sample deviation between path point and projection.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// The bound `M = sqrt(2 l h + h^2) / 2`.
    pub bound: f64,
    /// The bound `sqrt(3 eps) / 2`, when `h = eps / (1 ∨ l)` for `eps <= 1`.
    pub eps_bound: Option<f64>,
    /// Worst signed slack of `|λ(t)-x| <= |γ(t)-x|` and the symmetric
    /// inequality at the other endpoint (nonnegative means both hold).
    pub endpoint_slack: f64,
    pub pass: bool,
}

/// Projects every point of an h-short planar path onto the base segment
/// `[x, y]` and checks the deviation bound `M = sqrt(2 l h + h^2) / 2`
/// together with the two endpoint inequalities.
///
/// Samples at the path vertices (where the deviation attains its maximum)
/// plus `samples` arc-length-uniform parameters.
pub fn short_segment_projection(
    p: &Polyline<Point2>,
    x: Point2,
    y: Point2,
    h: f64,
    samples: usize,
) -> Result<ProjectionReport, PlaneError> {
    let l = x.dist(y);
    if l <= 0.0 {
        return Err(PlaneError::ZeroBaseSegment);
    }
    let len = p.length();
    let tol = 1e-9 * len.max(1.0);
    if p.first().dist(x) > tol || p.last().dist(y) > tol {
        return Err(PlaneError::EndpointMismatch);
    }
    if len > l + h + tol {
        return Err(PlaneError::NotHShort { len, dist: l, h });
    }

    let mut params: Vec<f64> = p.cumulative().to_vec();
    for k in 0..samples {
        params.push(len * k as f64 / (samples.max(2) - 1) as f64);
    }
    params.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let bound = 0.5 * (2.0 * l * h + h * h).sqrt();
    let eps = h * l.max(1.0);
    let eps_bound = if eps <= 1.0 + 1e-12 { Some((3.0 * eps).sqrt() / 2.0) } else { None };

    let mut path_points = Vec::with_capacity(params.len());
    let mut projected = Vec::with_capacity(params.len());
    let mut deviations = Vec::with_capacity(params.len());
    let mut max_deviation: f64 = 0.0;
    let mut endpoint_slack = f64::INFINITY;
    for &t in &params {
        let g = p.point_at(t, |a, b, r| a.lerp(*b, r));
        let lam = project_to_segment(g, x, y);
        let dev = g.dist(lam);
        max_deviation = max_deviation.max(dev);
        endpoint_slack = endpoint_slack
            .min(g.dist(x) - lam.dist(x))
            .min(g.dist(y) - lam.dist(y));
        path_points.push(g);
        projected.push(lam);
        deviations.push(dev);
    }

    let check_tol = 1e-9 * l.max(1.0);
    let mut pass = endpoint_slack >= -check_tol && max_deviation <= bound + check_tol;
    if let Some(eb) = eps_bound {
        pass = pass && max_deviation <= eb + check_tol;
    }

    Ok(ProjectionReport {
        params,
        path_points,
        projected,
        deviations,
        max_deviation,
        bound,
        eps_bound,
        endpoint_slack,
        pass,
    })
}

/// A validated instance of the two-triangle comparison hypothesis: primed
/// and unprimed triangles with matched opposite side, slightly stretched
/// legs, and points dividing the legs in equal ratios.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegComparisonInstance {
    pub x0: Point2,
    pub x1: Point2,
    pub x2: Point2,
    pub x0p: Point2,
    pub x1p: Point2,
    pub x2p: Point2,
    pub u1: Point2,
    pub u2: Point2,
    pub u1p: Point2,
    pub u2p: Point2,
    /// Ratio of `u1` along `[x0, x1]`.
    pub s: f64,
    /// Ratio of `u2` along `[x0, x2]`.
    pub t: f64,
    pub eps: f64,
    /// `eps / (1 ∨ |x0'-x1'| ∨ |x0'-x2'|)`.
    pub h: f64,
}

impl LegComparisonInstance {
    /// Builds an instance from the two triangles and leg ratios, validating
    /// every hypothesis within `1e-9`.
    pub fn new(
        x0: Point2,
        x1: Point2,
        x2: Point2,
        x0p: Point2,
        x1p: Point2,
        x2p: Point2,
        s: f64,
        t: f64,
        eps: f64,
    ) -> Result<Self, PlaneError> {
        if !(0.0 < eps && eps <= 1.0) {
            return Err(PlaneError::HypothesisViolated(format!("eps {eps} outside (0, 1]")));
        }
        if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
            return Err(PlaneError::HypothesisViolated(format!("ratios s={s}, t={t} outside [0, 1]")));
        }
        let h = eps / 1f64.max(x0p.dist(x1p)).max(x0p.dist(x2p));
        let scale = [x0.dist(x1), x0.dist(x2), x1.dist(x2), 1.0]
            .into_iter()
            .fold(0.0_f64, f64::max);
        let tol = 1e-9 * scale;
        if (x1.dist(x2) - x1p.dist(x2p)).abs() > tol {
            return Err(PlaneError::HypothesisViolated(format!(
                "|x1-x2| = {} but |x1'-x2'| = {}",
                x1.dist(x2),
                x1p.dist(x2p)
            )));
        }
        for (i, (a, ap)) in [(x1, x1p), (x2, x2p)].into_iter().enumerate() {
            let leg = x0.dist(a);
            let legp = x0p.dist(ap);
            if leg < legp - tol || leg > legp + h + tol {
                return Err(PlaneError::HypothesisViolated(format!(
                    "leg {}: |x0-xi| = {leg} outside [{legp}, {}]",
                    i + 1,
                    legp + h
                )));
            }
        }
        let u1 = x0.lerp(x1, s);
        let u2 = x0.lerp(x2, t);
        let u1p = x0p.lerp(x1p, s);
        let u2p = x0p.lerp(x2p, t);
        Ok(LegComparisonInstance { x0, x1, x2, x0p, x1p, x2p, u1, u2, u1p, u2p, s, t, eps, h })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegComparisonReport {
    /// `|u1-u2| - |u1'-u2'|`.
    pub d: f64,
    /// `sqrt(3 eps)`.
    pub bound: f64,
    pub pass: bool,
    /// Direct and expansion values of `|u1-u2|^2` (and primed), which must
    /// agree within `1e-9`.
    pub direct_sq: f64,
    pub expansion_sq: f64,
    pub direct_sq_primed: f64,
    pub expansion_sq_primed: f64,
    pub expansions_consistent: bool,
}

/// Squared distance between the two leg points via the double
/// parallelogram-law expansion, written division-free:
/// `st |x1-x2|^2 + t(t-s) |x0-x2|^2 - s(t-s) |x0-x1|^2` for `s <= t`.
fn leg_points_dist_sq_expansion(x0: Point2, x1: Point2, x2: Point2, s: f64, t: f64) -> f64 {
    let (x1, x2, s, t) = if s <= t { (x1, x2, s, t) } else { (x2, x1, t, s) };
    s * t * x1.dist_sq(x2) + t * (t - s) * x0.dist_sq(x2) - s * (t - s) * x0.dist_sq(x1)
}

/// Evaluates the comparison bound `|u1-u2| <= |u1'-u2'| + sqrt(3 eps)` on a
/// validated instance and cross-checks the direct distances against the
/// parallelogram-law expansions.
pub fn leg_comparison_check(inst: &LegComparisonInstance) -> LegComparisonReport {
    let direct = inst.u1.dist(inst.u2);
    let directp = inst.u1p.dist(inst.u2p);
    let d = direct - directp;
    let bound = (3.0 * inst.eps).sqrt();

    let direct_sq = direct * direct;
    let direct_sq_primed = directp * directp;
    let expansion_sq = leg_points_dist_sq_expansion(inst.x0, inst.x1, inst.x2, inst.s, inst.t);
    let expansion_sq_primed =
        leg_points_dist_sq_expansion(inst.x0p, inst.x1p, inst.x2p, inst.s, inst.t);

    let scale = direct_sq.max(direct_sq_primed).max(1.0);
    let expansions_consistent = (direct_sq - expansion_sq).abs() <= 1e-9 * scale
        && (direct_sq_primed - expansion_sq_primed).abs() <= 1e-9 * scale;

    LegComparisonReport {
        d,
        bound,
        pass: d <= bound + 1e-9,
        direct_sq,
        expansion_sq,
        direct_sq_primed,
        expansion_sq_primed,
        expansions_consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Polyline;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn comparison_triangle_right() {
        let t = comparison_triangle(3.0, 4.0, 5.0).unwrap();
        assert_eq!(t.x, Point2::new(0.0, 0.0));
        assert_eq!(t.y, Point2::new(3.0, 0.0));
        assert_close(t.z.x, 0.0, 1e-12);
        assert_close(t.z.y, 4.0, 1e-12);
    }

    #[test]
    fn comparison_triangle_degenerate_collinear() {
        let t = comparison_triangle(1.0, 2.0, 1.0).unwrap();
        assert_close(t.z.x, 2.0, 1e-12);
        assert_close(t.z.y, 0.0, 1e-12);
    }

    #[test]
    fn comparison_triangle_equilateral() {
        let t = comparison_triangle(1.0, 1.0, 1.0).unwrap();
        assert_close(t.z.x, 0.5, 1e-12);
        assert_close(t.z.y, 3f64.sqrt() / 2.0, 1e-12);
    }

    #[test]
    fn comparison_triangle_rejects_violation() {
        assert!(matches!(
            comparison_triangle(1.0, 1.0, 3.0),
            Err(PlaneError::TriangleInequalityViolation(..))
        ));
    }

    #[test]
    fn comparison_triangle_side_roundtrip() {
        for (a, b, c) in [(3.0, 4.0, 5.0), (1.0, 1.0, 1.0), (2.0, 3.0, 4.5), (1.0, 2.0, 1.0)] {
            let t = comparison_triangle(a, b, c).unwrap();
            assert_close(t.x.dist(t.y), a, 1e-9);
            assert_close(t.x.dist(t.z), b, 1e-9);
            assert_close(t.y.dist(t.z), c, 1e-9);
        }
    }

    #[test]
    fn comparison_point_proportional() {
        let t = comparison_triangle(4.5, 3.0, 3.0).unwrap();
        let u = comparison_point(&t, TriSide::Xy, 2.0, 3.0).unwrap();
        assert_close(u.dist(t.x), 1.8, 1e-12);
        assert!(u.dist(t.x) <= 2.0 && u.dist(t.y) <= 3.0 + 1e-12);
    }

    #[test]
    fn comparison_point_geodesic_unique() {
        let t = comparison_triangle(5.0, 4.0, 3.0).unwrap();
        let u = comparison_point(&t, TriSide::Xy, 2.0, 3.0).unwrap();
        assert_close(u.dist(t.x), 2.0, 1e-12);
    }

    #[test]
    fn comparison_point_zero_prefix() {
        let t = comparison_triangle(5.0, 4.0, 3.0).unwrap();
        let u = comparison_point(&t, TriSide::Xz, 0.0, 4.0).unwrap();
        assert_eq!(u, t.x);
    }

    #[test]
    fn comparison_point_rejects_short_lengths() {
        let t = comparison_triangle(5.0, 4.0, 3.0).unwrap();
        assert!(matches!(
            comparison_point(&t, TriSide::Xy, 1.0, 2.0),
            Err(PlaneError::LengthsShorterThanSide { .. })
        ));
    }

    #[test]
    fn parallelogram_midpoint() {
        let (w, lhs, rhs) = parallelogram_point(
            Point2::new(0.0, 1.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            0.5,
        )
        .unwrap();
        assert_eq!(w, Point2::new(0.5, 0.0));
        assert_close(lhs, 1.25, 1e-12);
        assert_close(rhs, 1.25, 1e-12);
    }

    #[test]
    fn parallelogram_endpoints() {
        let x = Point2::new(2.0, -1.0);
        let y = Point2::new(0.5, 0.3);
        let z = Point2::new(-1.0, 4.0);
        let (w, lhs, rhs) = parallelogram_point(x, y, z, 0.0).unwrap();
        assert_eq!(w, y);
        assert_close(lhs, x.dist_sq(y), 1e-12);
        assert_close(rhs, x.dist_sq(y), 1e-12);
        let (w, lhs, rhs) = parallelogram_point(x, y, z, 1.0).unwrap();
        assert_eq!(w, z);
        assert_close(lhs, x.dist_sq(z), 1e-12);
        assert_close(rhs, x.dist_sq(z), 1e-12);
    }

    #[test]
    fn parallelogram_rejects_bad_ratio() {
        let p = Point2::new(0.0, 0.0);
        assert!(matches!(parallelogram_point(p, p, p, 1.5), Err(PlaneError::RatioOutOfRange(_))));
    }

    #[test]
    fn projection_straight_segment() {
        let x = Point2::new(0.0, 0.0);
        let y = Point2::new(2.0, 0.0);
        let p = Polyline::new(vec![x, y], |a, b| a.dist(*b)).unwrap();
        let r = short_segment_projection(&p, x, y, 0.5, 16).unwrap();
        assert!(r.pass);
        assert_close(r.max_deviation, 0.0, 1e-12);
    }

    #[test]
    fn projection_bound_l1_h1() {
        // M = sqrt(2*1*1 + 1) / 2 = sqrt(3)/2
        let x = Point2::new(0.0, 0.0);
        let y = Point2::new(1.0, 0.0);
        let p = Polyline::new(vec![x, y], |a, b| a.dist(*b)).unwrap();
        let r = short_segment_projection(&p, x, y, 1.0, 4).unwrap();
        assert_close(r.bound, 3f64.sqrt() / 2.0, 1e-12);
    }

    #[test]
    fn projection_apex_equality() {
        let x = Point2::new(0.0, 0.0);
        let y = Point2::new(1.0, 0.0);
        let apex = Point2::new(0.5, 0.2);
        let p = Polyline::new(vec![x, apex, y], |a, b| a.dist(*b)).unwrap();
        let h = p.length() - 1.0;
        assert_close(h, 2.0 * 0.29f64.sqrt() - 1.0, 1e-12);
        let r = short_segment_projection(&p, x, y, h, 8).unwrap();
        assert_close(r.bound, 0.2, 1e-12);
        assert_close(r.max_deviation, 0.2, 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn projection_rejects_long_path() {
        let x = Point2::new(0.0, 0.0);
        let y = Point2::new(1.0, 0.0);
        let p = Polyline::new(vec![x, Point2::new(0.5, 2.0), y], |a, b| a.dist(*b)).unwrap();
        assert!(matches!(
            short_segment_projection(&p, x, y, 0.1, 4),
            Err(PlaneError::NotHShort { .. })
        ));
    }

    #[test]
    fn leg_comparison_identity_case() {
        let x0 = Point2::new(0.0, 0.0);
        let x1 = Point2::new(3.0, 0.0);
        let x2 = Point2::new(1.0, 2.0);
        let inst = LegComparisonInstance::new(x0, x1, x2, x0, x1, x2, 0.3, 0.7, 1.0).unwrap();
        let r = leg_comparison_check(&inst);
        assert!(r.pass);
        assert!(r.d <= 1e-12);
        assert!(r.expansions_consistent);
    }

    #[test]
    fn leg_comparison_zero_ratios() {
        let x0 = Point2::new(0.0, 0.0);
        let x1 = Point2::new(3.0, 0.0);
        let x2 = Point2::new(1.0, 2.0);
        let inst = LegComparisonInstance::new(x0, x1, x2, x0, x1, x2, 0.0, 0.0, 0.5).unwrap();
        let r = leg_comparison_check(&inst);
        assert_close(r.d, 0.0, 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn leg_comparison_rejects_mismatched_opposite_side() {
        let x0 = Point2::new(0.0, 0.0);
        let x1 = Point2::new(3.0, 0.0);
        let x2 = Point2::new(1.0, 2.0);
        let x2p = Point2::new(1.0, 2.5);
        assert!(matches!(
            LegComparisonInstance::new(x0, x1, x2, x0, x1, x2p, 0.5, 0.5, 1.0),
            Err(PlaneError::HypothesisViolated(_))
        ));
    }
}
