//! Polylines: ordered point sequences with per-segment lengths, shared by
//! planar paths and graph geodesics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("polyline needs at least one point")]
    Empty,
    #[error("segment {0} has negative length")]
    NegativeSegment(usize),
}

/// An ordered list of positions in some space together with the lengths of
/// the segments joining consecutive positions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polyline<P> {
    points: Vec<P>,
    seg_lengths: Vec<f64>,
    /// Cumulative arc length at each point; `cumulative[0] = 0`.
    cumulative: Vec<f64>,
}

impl<P: Clone> Polyline<P> {
    /// Builds a polyline, measuring each segment with `seg_len`.
    pub fn new(points: Vec<P>, mut seg_len: impl FnMut(&P, &P) -> f64) -> Result<Self, PathError> {
        let lengths: Vec<f64> =
            points.windows(2).map(|w| seg_len(&w[0], &w[1])).collect();
        Self::with_lengths(points, lengths)
    }

    pub fn with_lengths(points: Vec<P>, seg_lengths: Vec<f64>) -> Result<Self, PathError> {
        if points.is_empty() {
            return Err(PathError::Empty);
        }
        assert_eq!(seg_lengths.len() + 1, points.len());
        let mut cumulative = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for (i, &l) in seg_lengths.iter().enumerate() {
            if l < 0.0 {
                return Err(PathError::NegativeSegment(i));
            }
            acc += l;
            cumulative.push(acc);
        }
        Ok(Polyline { points, seg_lengths, cumulative })
    }

    /// The same polyline traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let mut seg_lengths = self.seg_lengths.clone();
        seg_lengths.reverse();
        Polyline::with_lengths(points, seg_lengths).expect("reversal preserves validity")
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn seg_lengths(&self) -> &[f64] {
        &self.seg_lengths
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn first(&self) -> P {
        self.points.first().unwrap().clone()
    }

    pub fn last(&self) -> P {
        self.points.last().unwrap().clone()
    }

    /// Segment index and in-segment offset for arc-length parameter `s`
    /// (clamped to `[0, length]`). Returns `None` when the polyline is a
    /// single point.
    pub fn locate(&self, s: f64) -> Option<(usize, f64)> {
        if self.seg_lengths.is_empty() {
            return None;
        }
        let s = s.clamp(0.0, self.length());
        // Last segment with cumulative start <= s; skip zero-length segments.
        let mut idx = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        idx = idx.min(self.seg_lengths.len() - 1);
        Some((idx, s - self.cumulative[idx]))
    }

    /// Point at arc-length parameter `s`, interpolating within a segment via
    /// `interp(a, b, ratio)`.
    pub fn point_at(&self, s: f64, interp: impl Fn(&P, &P, f64) -> P) -> P {
        match self.locate(s) {
            None => self.first(),
            Some((idx, off)) => {
                let l = self.seg_lengths[idx];
                if off <= 0.0 || l <= 0.0 {
                    self.points[idx].clone()
                } else if off >= l {
                    self.points[idx + 1].clone()
                } else {
                    interp(&self.points[idx], &self.points[idx + 1], off / l)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Point2;

    #[test]
    fn length_is_sum_of_segments() {
        let p = Polyline::new(
            vec![Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(3.0, 4.0)],
            |a, b| a.dist(*b),
        )
        .unwrap();
        assert_eq!(p.length(), 7.0);
        assert_eq!(p.cumulative(), &[0.0, 3.0, 7.0]);
    }

    #[test]
    fn point_at_endpoints_and_interior() {
        let p = Polyline::new(
            vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(2.0, 2.0)],
            |a, b| a.dist(*b),
        )
        .unwrap();
        let lerp = |a: &Point2, b: &Point2, r: f64| a.lerp(*b, r);
        assert_eq!(p.point_at(0.0, lerp), Point2::new(0.0, 0.0));
        assert_eq!(p.point_at(4.0, lerp), Point2::new(2.0, 2.0));
        assert_eq!(p.point_at(3.0, lerp), Point2::new(2.0, 1.0));
        // Clamping.
        assert_eq!(p.point_at(9.0, lerp), Point2::new(2.0, 2.0));
    }

    #[test]
    fn single_point_polyline() {
        let p = Polyline::new(vec![Point2::new(1.0, 1.0)], |a, b| a.dist(*b)).unwrap();
        assert_eq!(p.length(), 0.0);
        assert_eq!(p.point_at(0.5, |a, b, r| a.lerp(*b, r)), Point2::new(1.0, 1.0));
    }
}
