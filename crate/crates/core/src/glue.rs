//! Gluing convex planar polygons along a shared boundary segment, shortest
//! paths in simple polygons, and the inductive construction that embeds a
//! short n-gon of a model space as a convex Euclidean polygon with a
//! constant-speed boundary map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::MetricError;
use crate::path::{PathError, Polyline};
use crate::plane::{comparison_triangle, PlaneError, Point2};
use crate::space::Space;

const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GlueError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon boundary self-intersects or has zero area")]
    NotSimplePolygon,
    #[error("polygon is not convex at vertex {0}")]
    NotConvex(usize),
    #[error("point ({0}, {1}) lies outside the polygon")]
    PointOutsidePolygon(f64, f64),
    #[error("shared segment has zero length")]
    ZeroLengthSeam,
    #[error("shared segment does not lie on the boundary of both polygons")]
    SharedSegmentMismatch,
    #[error("polygons lie on the same side of the shared segment")]
    SameSide,
    #[error("gluing is not along a full edge of both polygons")]
    NotFlatGluing,
    #[error("side {side} has length {len}, not {h}-short for distance {dist}")]
    SideNotShort { side: usize, len: f64, dist: f64, h: f64 },
    #[error("h = {h} is not suitably small for vertex triple ({i}, {j}, {k})")]
    HTooLarge { h: f64, i: usize, j: usize, k: usize },
    #[error("no split path between the designated vertices")]
    SplitPathUnavailable,
    #[error("inconsistent n-gon map descriptor: {0}")]
    InconsistentDescriptor(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Path(#[from] PathError),
}

// ---------------------------------------------------------------------------
// planar predicates

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn on_segment(p: Point2, a: Point2, b: Point2, tol: f64) -> bool {
    crate::plane::dist_to_segment(p, a, b) <= tol
}

/// Proper crossing: interiors of the two segments intersect in one point.
fn segments_cross_properly(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let scale = a.dist(b).max(c.dist(d)).max(1.0);
    let eps = GEOM_TOL * scale * scale;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < -eps * eps && d3 * d4 < -eps * eps
}

fn point_in_simple_polygon(p: Point2, verts: &[Point2], tol: f64) -> bool {
    let n = verts.len();
    for i in 0..n {
        if on_segment(p, verts[i], verts[(i + 1) % n], tol) {
            return true;
        }
    }
    // ray casting with a fixed horizontal ray
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x_cross > p.x {
                inside = !inside;
            }
        }
    }
    inside
}

fn signed_area(verts: &[Point2]) -> f64 {
    let n = verts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        acc += a.cross(b);
    }
    acc / 2.0
}

fn is_simple(verts: &[Point2]) -> bool {
    let n = verts.len();
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        if a.dist(b) <= GEOM_TOL {
            return false;
        }
        for j in (i + 1)..n {
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (c, d) = (verts[j], verts[(j + 1) % n]);
            if segments_cross_properly(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Counterclockwise turn at vertex `i`; negative beyond tolerance means a
/// reflex interior angle.
fn turn_at(verts: &[Point2], i: usize) -> f64 {
    let n = verts.len();
    let prev = verts[(i + n - 1) % n];
    let cur = verts[i];
    let next = verts[(i + 1) % n];
    let d1 = cur.sub(prev);
    let d2 = next.sub(cur);
    d1.cross(d2).atan2(d1.dot(d2))
}

// ---------------------------------------------------------------------------
// polygons

/// A convex polygon with counterclockwise vertices; flat vertices (interior
/// angle exactly pi) are allowed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GlueError> {
        if vertices.len() < 3 {
            return Err(GlueError::TooFewVertices(vertices.len()));
        }
        let mut vertices = vertices;
        let area = signed_area(&vertices);
        if area < 0.0 {
            vertices.reverse();
        }
        if !is_simple(&vertices) {
            return Err(GlueError::NotSimplePolygon);
        }
        let scale = diameter_of(&vertices).max(1.0);
        for i in 0..vertices.len() {
            if turn_at(&vertices, i) < -GEOM_TOL * scale {
                return Err(GlueError::NotConvex(i));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn side_length(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        self.vertices[i].dist(self.vertices[(i + 1) % n])
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_simple_polygon(p, &self.vertices, GEOM_TOL * diameter_of(&self.vertices).max(1.0))
    }

    pub fn edge_index_of(&self, a: Point2, b: Point2, tol: f64) -> Option<usize> {
        let n = self.vertices.len();
        (0..n).find(|&i| {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            (p.dist(a) <= tol && q.dist(b) <= tol) || (p.dist(b) <= tol && q.dist(a) <= tol)
        })
    }
}

fn diameter_of(verts: &[Point2]) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            best = best.max(verts[i].dist(verts[j]));
        }
    }
    best
}

/// A simple (possibly non-convex) polygon with its intrinsic shortest-path
/// metric, computed over the visibility graph of its vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplePolygonSpace {
    pub vertices: Vec<Point2>,
}

impl SimplePolygonSpace {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GlueError> {
        if vertices.len() < 3 {
            return Err(GlueError::TooFewVertices(vertices.len()));
        }
        let mut vertices = vertices;
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        if !is_simple(&vertices) || signed_area(&vertices) <= 0.0 {
            return Err(GlueError::NotSimplePolygon);
        }
        Ok(SimplePolygonSpace { vertices })
    }

    fn tol(&self) -> f64 {
        GEOM_TOL * diameter_of(&self.vertices).max(1.0) * 100.0
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_simple_polygon(p, &self.vertices, self.tol())
    }

    /// Whether the open segment `[a, b]` stays inside the closed region.
    fn segment_inside(&self, a: Point2, b: Point2) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (c, d) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if segments_cross_properly(a, b, c, d) {
                return false;
            }
        }
        // probe interior points; boundary contact counts as inside
        for r in [0.5, 0.25, 0.75, 0.125, 0.875] {
            if !point_in_simple_polygon(a.lerp(b, r), &self.vertices, self.tol()) {
                return false;
            }
        }
        true
    }

    /// Shortest path between two points of the closed region.
    pub fn shortest_path(&self, a: Point2, b: Point2) -> Result<Polyline<Point2>, GlueError> {
        for p in [a, b] {
            if !self.contains(p) {
                return Err(GlueError::PointOutsidePolygon(p.x, p.y));
            }
        }
        if a.dist(b) <= GEOM_TOL || self.segment_inside(a, b) {
            return Ok(Polyline::new(vec![a, b], |p, q| p.dist(*q))?);
        }
        // visibility graph over {a, b} + polygon vertices
        let mut nodes = vec![a, b];
        nodes.extend_from_slice(&self.vertices);
        let m = nodes.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for i in 0..m {
            for j in (i + 1)..m {
                if self.segment_inside(nodes[i], nodes[j]) {
                    let w = nodes[i].dist(nodes[j]);
                    adj[i].push((j, w));
                    adj[j].push((i, w));
                }
            }
        }
        // Dijkstra from node 0 (= a) to node 1 (= b)
        let mut dist = vec![f64::INFINITY; m];
        let mut prev = vec![usize::MAX; m];
        let mut done = vec![false; m];
        dist[0] = 0.0;
        loop {
            let mut cur = usize::MAX;
            let mut best = f64::INFINITY;
            for i in 0..m {
                if !done[i] && dist[i] < best {
                    best = dist[i];
                    cur = i;
                }
            }
            if cur == usize::MAX || cur == 1 {
                break;
            }
            done[cur] = true;
            for &(nxt, w) in &adj[cur] {
                if dist[cur] + w < dist[nxt] {
                    dist[nxt] = dist[cur] + w;
                    prev[nxt] = cur;
                }
            }
        }
        if dist[1].is_infinite() {
            return Err(GlueError::SplitPathUnavailable);
        }
        let mut chain = vec![1usize];
        while *chain.last().unwrap() != 0 {
            chain.push(prev[*chain.last().unwrap()]);
        }
        chain.reverse();
        let pts: Vec<Point2> = chain.into_iter().map(|i| nodes[i]).collect();
        Ok(Polyline::new(pts, |p, q| p.dist(*q))?)
    }
}

impl Space for SimplePolygonSpace {
    type Point = Point2;

    fn distance(&self, a: &Point2, b: &Point2) -> f64 {
        self.shortest_path(*a, *b).map(|p| p.length()).unwrap_or(f64::INFINITY)
    }

    fn geodesic(&self, a: &Point2, b: &Point2) -> Result<Polyline<Point2>, MetricError> {
        self.shortest_path(*a, *b).map_err(|_| MetricError::DisconnectedGraph)
    }

    fn point_along(&self, path: &Polyline<Point2>, s: f64) -> Point2 {
        path.point_at(s, |a, b, r| a.lerp(*b, r))
    }
}

// ---------------------------------------------------------------------------
// gluing

/// Two convex polygons developed flat on opposite sides of a shared
/// boundary segment `S`, carrying the seam metric: paths may cross only
/// through `S`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluedPolygon {
    pub q1: ConvexPolygon,
    pub q2: ConvexPolygon,
    /// Endpoints of the shared segment.
    pub seam: (Point2, Point2),
}

impl GluedPolygon {
    pub fn new(q1: ConvexPolygon, q2: ConvexPolygon, seam: (Point2, Point2)) -> Result<Self, GlueError> {
        let (s0, s1) = seam;
        if s0.dist(s1) <= GEOM_TOL {
            return Err(GlueError::ZeroLengthSeam);
        }
        let tol = GEOM_TOL * diameter_of(&q1.vertices).max(diameter_of(&q2.vertices)).max(1.0) * 100.0;
        for q in [&q1, &q2] {
            let on_boundary = |p: Point2| {
                let n = q.vertices.len();
                (0..n).any(|i| on_segment(p, q.vertices[i], q.vertices[(i + 1) % n], tol))
            };
            if !on_boundary(s0) || !on_boundary(s1) {
                return Err(GlueError::SharedSegmentMismatch);
            }
        }
        // opposite sides of the seam line
        let side_of = |q: &ConvexPolygon| -> f64 {
            q.vertices
                .iter()
                .map(|&v| orient(s0, s1, v))
                .fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc })
        };
        let (a, b) = (side_of(&q1), side_of(&q2));
        if a * b >= 0.0 {
            return Err(GlueError::SameSide);
        }
        Ok(GluedPolygon { q1, q2, seam })
    }

    fn which(&self, p: Point2) -> Option<usize> {
        if self.q1.contains(p) {
            Some(1)
        } else if self.q2.contains(p) {
            Some(2)
        } else {
            None
        }
    }

    /// Best seam point for a cross-seam pair: minimizes
    /// `|a - s| + |s - b|` over `s` in the seam segment.
    pub fn seam_point(&self, a: Point2, b: Point2) -> Point2 {
        let (s0, s1) = self.seam;
        let dir = s1.sub(s0);
        let len_sq = dir.dot(dir);
        // reflect b across the seam line if a and b lie on the same side,
        // so the straight crossing of [a, b'] realizes the unconstrained
        // minimum of the convex objective along the seam line
        let sa = orient(s0, s1, a);
        let sb = orient(s0, s1, b);
        let b_eff = if sa * sb > 0.0 {
            let t = b.sub(s0).dot(dir) / len_sq;
            let foot = s0.add(dir.scale(t));
            foot.add(foot.sub(b))
        } else {
            b
        };
        // crossing parameter of [a, b_eff] with the seam line
        let denom = orient(s0, s1, b_eff) - orient(s0, s1, a);
        let u = if denom.abs() <= GEOM_TOL * len_sq {
            // collinear: project the midpoint
            a.lerp(b_eff, 0.5).sub(s0).dot(dir) / len_sq
        } else {
            let t = -orient(s0, s1, a) / denom;
            a.lerp(b_eff, t).sub(s0).dot(dir) / len_sq
        };
        s0.lerp(s1, u.clamp(0.0, 1.0))
    }
}

/// Distance in the glued metric between `a` in one polygon and `b` in the
/// other: the straight segment if it crosses within the seam, otherwise the
/// best route through a seam endpoint.
pub fn glued_distance(g: &GluedPolygon, a: Point2, b: Point2) -> Result<f64, GlueError> {
    let wa = g.which(a).ok_or(GlueError::PointOutsidePolygon(a.x, a.y))?;
    let wb = g.which(b).ok_or(GlueError::PointOutsidePolygon(b.x, b.y))?;
    if wa == wb {
        return Ok(a.dist(b));
    }
    let s = g.seam_point(a, b);
    Ok(a.dist(s) + s.dist(b))
}

impl Space for GluedPolygon {
    type Point = Point2;

    fn distance(&self, a: &Point2, b: &Point2) -> f64 {
        match (self.which(*a), self.which(*b)) {
            (Some(x), Some(y)) if x == y => a.dist(*b),
            _ => {
                let s = self.seam_point(*a, *b);
                a.dist(s) + s.dist(*b)
            }
        }
    }

    fn geodesic(&self, a: &Point2, b: &Point2) -> Result<Polyline<Point2>, MetricError> {
        let pts = match (self.which(*a), self.which(*b)) {
            (Some(x), Some(y)) if x == y => vec![*a, *b],
            _ => {
                let s = self.seam_point(*a, *b);
                vec![*a, s, *b]
            }
        };
        Ok(Polyline::new(pts, |p, q| p.dist(*q)).expect("nonempty"))
    }

    fn point_along(&self, path: &Polyline<Point2>, s: f64) -> Point2 {
        path.point_at(s, |a, b, r| a.lerp(*b, r))
    }
}

/// Shortest-path length between two points of a simple polygon's closed
/// region (Euclidean when the straight segment stays inside).
pub fn intrinsic_polygon_distance(
    poly: &SimplePolygonSpace,
    a: Point2,
    b: Point2,
) -> Result<f64, GlueError> {
    Ok(poly.shortest_path(a, b)?.length())
}

// ---------------------------------------------------------------------------
// short n-gons and the embedding construction

/// A closed chain of `h`-short sides in a model space; side `i` joins
/// vertices `i` and `i+1 (mod n)`.
#[derive(Debug, Clone)]
pub struct ShortNgon<P> {
    pub vertices: Vec<P>,
    pub sides: Vec<Polyline<P>>,
    pub h: f64,
    /// `d(u_i, u_{i+1})` per side.
    pub side_dists: Vec<f64>,
}

impl<P: Clone + PartialEq + std::fmt::Debug> ShortNgon<P> {
    pub fn new<S: Space<Point = P>>(
        space: &S,
        vertices: Vec<P>,
        sides: Vec<Polyline<P>>,
        h: f64,
    ) -> Result<Self, GlueError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GlueError::TooFewVertices(n));
        }
        if sides.len() != n {
            return Err(GlueError::InconsistentDescriptor(format!(
                "{} sides for {n} vertices",
                sides.len()
            )));
        }
        let mut side_dists = Vec::with_capacity(n);
        for (i, side) in sides.iter().enumerate() {
            let j = (i + 1) % n;
            if side.first() != vertices[i] || side.last() != vertices[j] {
                return Err(GlueError::InconsistentDescriptor(format!(
                    "side {i} does not join vertices {i} and {j}"
                )));
            }
            let dist = space.distance(&vertices[i], &vertices[j]);
            let len = side.length();
            if len > dist + h + 1e-7 * dist.max(1.0) {
                return Err(GlueError::SideNotShort { side: i, len, dist, h });
            }
            side_dists.push(dist);
        }
        Ok(ShortNgon { vertices, sides, h, side_dists })
    }

    /// n-gon with geodesic sides (`h = 0`).
    pub fn geodesic<S: Space<Point = P>>(space: &S, vertices: Vec<P>) -> Result<Self, GlueError> {
        let n = vertices.len();
        let mut sides = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            sides.push(
                space
                    .geodesic(&vertices[i], &vertices[j])
                    .map_err(|_| GlueError::SplitPathUnavailable)?,
            );
        }
        Self::new(space, vertices, sides, 0.0)
    }
}

/// A convex polygon `Q`, a short n-gon `P` in a model space, and the
/// constant-speed boundary correspondence between them: side `i` of `Q` is
/// traversed onto side `i` of `P` with speed `K_i = len(P_i) / |Q_i|`.
#[derive(Debug, Clone)]
pub struct NgonMapDescriptor<P> {
    pub polygon: ConvexPolygon,
    pub ngon: ShortNgon<P>,
    pub speeds: Vec<f64>,
    /// Constant the construction promises: `(n - 2) * C'`.
    pub c_n: f64,
}

impl<P: Clone + PartialEq + std::fmt::Debug> NgonMapDescriptor<P> {
    pub fn new(polygon: ConvexPolygon, ngon: ShortNgon<P>, c_n: f64) -> Result<Self, GlueError> {
        let n = ngon.vertices.len();
        if polygon.n() != n {
            return Err(GlueError::InconsistentDescriptor(format!(
                "polygon has {} vertices, n-gon has {n}",
                polygon.n()
            )));
        }
        let mut speeds = Vec::with_capacity(n);
        for i in 0..n {
            let q_side = polygon.side_length(i);
            let p_len = ngon.sides[i].length();
            if q_side <= GEOM_TOL {
                return Err(GlueError::InconsistentDescriptor(format!(
                    "polygon side {i} has zero length"
                )));
            }
            if (q_side - ngon.side_dists[i]).abs() > 1e-6 * q_side.max(1.0) {
                return Err(GlueError::InconsistentDescriptor(format!(
                    "polygon side {i} length {q_side} != vertex distance {}",
                    ngon.side_dists[i]
                )));
            }
            speeds.push(p_len / q_side);
        }
        Ok(NgonMapDescriptor { polygon, ngon, speeds, c_n })
    }

    /// Boundary point of `Q` on side `i` at distance `t` from vertex `i`.
    pub fn boundary_point(&self, side: usize, t: f64) -> Point2 {
        let n = self.polygon.n();
        let a = self.polygon.vertices[side];
        let b = self.polygon.vertices[(side + 1) % n];
        let l = a.dist(b);
        a.lerp(b, (t / l).clamp(0.0, 1.0))
    }

    /// Image of the boundary point of `Q` on side `i` at distance `t` from
    /// vertex `i` under the constant-speed map.
    pub fn map_boundary<S: Space<Point = P>>(&self, space: &S, side: usize, t: f64) -> P {
        space.point_along(&self.ngon.sides[side], self.speeds[side] * t)
    }
}

fn straight_polyline(a: Point2, b: Point2) -> Polyline<Point2> {
    Polyline::new(vec![a, b], |p, q| p.dist(*q)).expect("two points")
}

/// Maps `w` by the rigid motion (with optional reflection) taking
/// `(p0, p1)` to `(q0, q1)`; `flip` mirrors across the target axis.
fn rigid_image(p0: Point2, p1: Point2, q0: Point2, q1: Point2, w: Point2, flip: bool) -> Point2 {
    let e = p1.sub(p0);
    let el = e.norm().max(1e-300);
    let ex = Point2::new(e.x / el, e.y / el);
    let ey = Point2::new(-ex.y, ex.x);
    let rel = w.sub(p0);
    let (ca, cb) = (rel.dot(ex), rel.dot(ey));
    let cb = if flip { -cb } else { cb };
    let f = q1.sub(q0);
    let fl = f.norm().max(1e-300);
    let fx = Point2::new(f.x / fl, f.y / fl);
    let fy = Point2::new(-fx.y, fx.x);
    q0.add(fx.scale(ca)).add(fy.scale(cb))
}

/// Embeds the vertex chain of an n-gon as a convex polygon, vertex `i` of
/// the result corresponding to vertex `i` of the n-gon, with all side
/// lengths preserved exactly.
fn embed_polygon<S: Space>(space: &S, ngon: &ShortNgon<S::Point>) -> Result<ConvexPolygon, GlueError> {
    let n = ngon.vertices.len();
    if n == 3 {
        let d01 = ngon.side_dists[0];
        let d12 = ngon.side_dists[1];
        let d02 = ngon.side_dists[2]; // side 2 joins vertices 2 and 0
        let t = comparison_triangle(d01, d02, d12)?;
        return ConvexPolygon::new(vec![t.x, t.y, t.z]);
    }

    // split off the triangle (u_0, u_{n-2}, u_{n-1}) along a geodesic
    let u0 = ngon.vertices[0].clone();
    let uk = ngon.vertices[n - 2].clone();
    let split = space.geodesic(&u0, &uk).map_err(|_| GlueError::SplitPathUnavailable)?;

    let sub_vertices: Vec<S::Point> = ngon.vertices[..n - 1].to_vec();
    let mut sub_sides: Vec<Polyline<S::Point>> = ngon.sides[..n - 2].to_vec();
    sub_sides.push(split.reversed());
    let p1 = ShortNgon::new(space, sub_vertices, sub_sides, ngon.h)?;

    let tri = ShortNgon::new(
        space,
        vec![u0, uk, ngon.vertices[n - 1].clone()],
        vec![split, ngon.sides[n - 2].clone(), ngon.sides[n - 1].clone()],
        ngon.h,
    )?;

    let q1 = embed_polygon(space, &p1)?;
    let q2 = embed_polygon(space, &tri)?;

    // develop the triangle flat on the far side of the edge (v_{n-2}, v_0)
    let a = q1.vertices[0];
    let b = q1.vertices[n - 2];
    let mut apex = rigid_image(q2.vertices[0], q2.vertices[1], a, b, q2.vertices[2], false);
    if orient(b, a, apex) > 0.0 {
        apex = rigid_image(q2.vertices[0], q2.vertices[1], a, b, q2.vertices[2], true);
    }
    let mut union: Vec<Point2> = q1.vertices[..n - 1].to_vec();
    union.push(apex);

    // only the hinge vertices can be reflex
    let scale = diameter_of(&union).max(1.0);
    let reflex = [0usize, n - 2]
        .into_iter()
        .find(|&i| turn_at(&union, i) < -GEOM_TOL * scale);
    match reflex {
        None => ConvexPolygon::new(union),
        Some(j) => reembed_without_vertex(&union, j),
    }
}

/// Re-embeds a polygon that is reflex at vertex `j`: the two sides meeting
/// at `j` form a geodesic of the region's intrinsic metric, so the chain
/// without `j` is embedded recursively and `j` is re-inserted as a flat
/// vertex at the preserved arc distance.
fn reembed_without_vertex(union: &[Point2], j: usize) -> Result<ConvexPolygon, GlueError> {
    let m = union.len();
    let region = SimplePolygonSpace::new(union.to_vec())?;

    // chain starts just after the dropped vertex
    let vs: Vec<Point2> = (1..m).map(|t| union[(j + t) % m]).collect();
    let mut sides: Vec<Polyline<Point2>> = Vec::with_capacity(m - 1);
    for t in 0..m - 2 {
        sides.push(straight_polyline(vs[t], vs[t + 1]));
    }
    // merged side runs through the dropped reflex vertex
    sides.push(
        Polyline::new(vec![vs[m - 2], union[j], vs[0]], |p, q| p.dist(*q)).expect("three points"),
    );
    let p_star = ShortNgon::new(&region, vs, sides, 0.0)?;
    let r = embed_polygon(&region, &p_star)?;

    // flat re-insertion on the merged side of `r`
    let prev = r.vertices[m - 2];
    let next = r.vertices[0];
    let l1 = union[(j + m - 1) % m].dist(union[j]);
    let merged_len = prev.dist(next);
    let flat = prev.lerp(next, (l1 / merged_len).clamp(0.0, 1.0));

    let mut out = vec![Point2::new(0.0, 0.0); m];
    for (t, &v) in r.vertices.iter().enumerate() {
        out[(j + 1 + t) % m] = v;
    }
    out[j] = flat;
    ConvexPolygon::new(out)
}

/// Checks that `h` is below the admissible threshold for every vertex
/// triple of the n-gon.
fn check_suitably_small<S: Space>(space: &S, ngon: &ShortNgon<S::Point>) -> Result<(), GlueError> {
    if ngon.h == 0.0 {
        return Ok(());
    }
    let n = ngon.vertices.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let dij = space.distance(&ngon.vertices[i], &ngon.vertices[j]);
                let dik = space.distance(&ngon.vertices[i], &ngon.vertices[k]);
                let djk = space.distance(&ngon.vertices[j], &ngon.vertices[k]);
                let threshold = 1.0 / 1.0_f64.max(dij).max(dik).max(djk);
                if ngon.h >= threshold {
                    return Err(GlueError::HTooLarge { h: ngon.h, i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Builds the convex Euclidean image of a short n-gon by the inductive
/// split-embed-glue procedure, together with its constant-speed boundary
/// map. Side lengths are preserved exactly; distances from vertex 0 can
/// only grow.
pub fn build_ngon_embedding<S: Space>(
    space: &S,
    ngon: &ShortNgon<S::Point>,
    c_prime: f64,
) -> Result<(ConvexPolygon, NgonMapDescriptor<S::Point>), GlueError> {
    check_suitably_small(space, ngon)?;
    let polygon = embed_polygon(space, ngon)?;
    let c_n = (ngon.vertices.len() as f64 - 2.0) * c_prime;
    let descriptor = NgonMapDescriptor::new(polygon.clone(), ngon.clone(), c_n)?;
    Ok((polygon, descriptor))
}

// ---------------------------------------------------------------------------
// standalone convexification of a glued polygon

#[derive(Debug, Clone)]
pub struct ConvexificationRecord {
    /// The flattened union polygon before convexification.
    pub input_union: Vec<Point2>,
    pub reflex_index: usize,
    pub reflex_vertex: Point2,
    /// Convex output with the dropped vertex re-inserted flat.
    pub output: ConvexPolygon,
    pub flat_index: usize,
}

#[derive(Debug, Clone)]
pub enum ConvexifyOutcome {
    AlreadyConvex(ConvexPolygon),
    Convexified(ConvexificationRecord),
}

/// Flattens a gluing along a full shared edge into its union polygon and,
/// if a hinge vertex is reflex, re-embeds the region as a convex polygon
/// with the reflex vertex re-inserted flat.
pub fn convexify(g: &GluedPolygon) -> Result<ConvexifyOutcome, GlueError> {
    let tol = 1e-6 * diameter_of(&g.q1.vertices).max(diameter_of(&g.q2.vertices)).max(1.0);
    let (s0, s1) = g.seam;
    let e1 = g.q1.edge_index_of(s0, s1, tol).ok_or(GlueError::NotFlatGluing)?;
    let e2 = g.q2.edge_index_of(s0, s1, tol).ok_or(GlueError::NotFlatGluing)?;

    let n1 = g.q1.n();
    let n2 = g.q2.n();
    // rotate q1 so the seam edge is (last -> first)
    let q1r: Vec<Point2> = (0..n1).map(|t| g.q1.vertices[(e1 + 1 + t) % n1]).collect();
    let a = q1r[0];
    let b = *q1r.last().unwrap();
    // q2 traverses the seam in the opposite direction (both are CCW on
    // opposite sides); rotate so it starts just past its seam edge
    let start2 = (e2 + 1) % n2;
    let q2r: Vec<Point2> = (0..n2).map(|t| g.q2.vertices[(start2 + t) % n2]).collect();
    // q2r[0] must be the seam endpoint matching `b`
    let q2_seq: Vec<Point2> = if q2r[0].dist(b) <= tol {
        q2r
    } else if q2r[0].dist(a) <= tol {
        // seam traversed in the same direction: reflect ordering
        let mut rev = q2r;
        rev.reverse();
        rev.rotate_right(1);
        rev
    } else {
        return Err(GlueError::NotFlatGluing);
    };

    let mut union: Vec<Point2> = q1r;
    union.extend(q2_seq[1..n2 - 1].iter().copied());
    if !is_simple(&union) {
        return Err(GlueError::NotSimplePolygon);
    }

    let hinge_a = 0usize;
    let hinge_b = n1 - 1;
    let scale = diameter_of(&union).max(1.0);
    let reflex = [hinge_a, hinge_b]
        .into_iter()
        .find(|&i| turn_at(&union, i) < -GEOM_TOL * scale);
    match reflex {
        None => Ok(ConvexifyOutcome::AlreadyConvex(ConvexPolygon::new(union)?)),
        Some(j) => {
            let record = ConvexificationRecord {
                reflex_vertex: union[j],
                reflex_index: j,
                output: reembed_without_vertex(&union, j)?,
                flat_index: j,
                input_union: union,
            };
            Ok(ConvexifyOutcome::Convexified(record))
        }
    }
}

// ---------------------------------------------------------------------------
// verification of the inductive hypothesis conditions

/// Signed worst slacks of the five embedding conditions; each passes when
/// its slack is above `-tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnReport {
    /// 1: vertex correspondence, 2: side-length equality, 3: diagonal
    /// growth from vertex 0, 4: arc-length domination near vertices,
    /// 5: rough contraction with constant `c_n`.
    pub slacks: [f64; 5],
    pub c_n: f64,
    pub samples_per_side: usize,
    pub pass: bool,
}

/// Samples the five conditions of the embedding hypothesis for a
/// descriptor, judging condition 5 against `c_n`.
pub fn verify_an<S: Space>(
    space: &S,
    desc: &NgonMapDescriptor<S::Point>,
    c_n: f64,
    samples: usize,
) -> Result<AnReport, GlueError> {
    if samples < 2 {
        return Err(GlueError::InconsistentDescriptor(format!(
            "need at least 2 samples per side, got {samples}"
        )));
    }
    let n = desc.polygon.n();
    let verts = &desc.polygon.vertices;

    // 1: F(v_i) = u_i at both ends of every side
    let mut slack1 = f64::INFINITY;
    for i in 0..n {
        let side_len = desc.polygon.side_length(i);
        let at_start = desc.map_boundary(space, i, 0.0);
        let at_end = desc.map_boundary(space, i, side_len);
        slack1 = slack1
            .min(-space.distance(&at_start, &desc.ngon.vertices[i]))
            .min(-space.distance(&at_end, &desc.ngon.vertices[(i + 1) % n]));
    }

    // 2: side lengths of Q equal vertex distances of P
    let mut slack2 = f64::INFINITY;
    for i in 0..n {
        slack2 = slack2.min(-(desc.polygon.side_length(i) - desc.ngon.side_dists[i]).abs());
    }

    // 3: diagonals from vertex 0 dominate the space distances
    let mut slack3 = f64::INFINITY;
    for i in 1..n {
        let d = space.distance(&desc.ngon.vertices[0], &desc.ngon.vertices[i]);
        slack3 = slack3.min(verts[0].dist(verts[i]) - d);
    }

    // boundary sample grid: (side, arc position, Q point, P point)
    let mut grid: Vec<(usize, f64, Point2, S::Point)> = Vec::with_capacity(n * samples);
    for i in 0..n {
        let l = desc.polygon.side_length(i);
        for s in 0..samples {
            let t = l * s as f64 / (samples - 1) as f64;
            grid.push((i, t, desc.boundary_point(i, t), desc.map_boundary(space, i, t)));
        }
    }

    // 4: arc length along P from F(x) to an adjacent vertex dominates the
    // flat distance from x to the corresponding polygon vertex
    let mut slack4 = f64::INFINITY;
    for &(i, t, q, _) in &grid {
        let l = desc.polygon.side_length(i);
        let len_to_start = desc.speeds[i] * t;
        let len_to_end = desc.speeds[i] * (l - t);
        slack4 = slack4
            .min(len_to_start - q.dist(verts[i]))
            .min(len_to_end - q.dist(verts[(i + 1) % n]));
    }

    // 5: rough contraction over all boundary pairs
    let mut slack5 = f64::INFINITY;
    for (ai, &(_, _, qa, ref pa)) in grid.iter().enumerate() {
        for &(_, _, qb, ref pb) in grid.iter().skip(ai + 1) {
            slack5 = slack5.min(qa.dist(qb) + c_n - space.distance(pa, pb));
        }
    }

    let scale = desc.ngon.side_dists.iter().copied().fold(1.0, f64::max);
    let tol = 1e-6 * scale;
    let slacks = [slack1, slack2, slack3, slack4, slack5];
    let pass = slacks.iter().all(|&s| s >= -tol);
    Ok(AnReport { slacks, c_n, samples_per_side: samples, pass })
}
