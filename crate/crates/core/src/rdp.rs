//! Ramer-Douglas-Peucker baseline for comparisons.
//!
//! Unlike the engine, RDP is vertex-restricted: its output is always a
//! subsequence of the input vertices, which is exactly why it cannot keep
//! rectilinear features square.

use thiserror::Error;

use crate::geom::{point_segment_distance, Point, Segment};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdpParams {
    /// Perpendicular-distance threshold; a vertex survives only if it
    /// deviates from the anchor chord by at least this much.
    pub tolerance: f64,
}

impl RdpParams {
    pub fn new(tolerance: f64) -> Self {
        RdpParams { tolerance }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RdpError {
    #[error("polyline needs at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// Recursive polyline simplification. Endpoints always survive; interior
/// points are kept while some deviation from the chord reaches the
/// tolerance, so a tolerance of zero returns the input unchanged.
pub fn rdp_polyline(points: &[Point], params: RdpParams) -> Result<Vec<Point>, RdpError> {
    if points.len() < 2 {
        return Err(RdpError::TooFewPoints(points.len()));
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    split(points, 0, points.len() - 1, params.tolerance, &mut keep);
    Ok(points
        .iter()
        .zip(&keep)
        .filter_map(|(p, &k)| k.then_some(*p))
        .collect())
}

fn split(points: &[Point], first: usize, last: usize, tolerance: f64, keep: &mut [bool]) {
    if last <= first + 1 {
        return;
    }
    let chord = Segment::new(points[first], points[last]);
    let mut max_dist = f64::NEG_INFINITY;
    let mut max_idx = first;
    for i in first + 1..last {
        // Distance to the closed chord, not its supporting line, so points
        // beyond the chord ends measure to the nearest endpoint.
        let d = point_segment_distance(chord, points[i]);
        if d > max_dist {
            max_dist = d;
            max_idx = i;
        }
    }
    if max_dist >= tolerance {
        keep[max_idx] = true;
        split(points, first, max_idx, tolerance, keep);
        split(points, max_idx, last, tolerance, keep);
    }
}

/// Closed-ring adaptation: the ring is cut at its first vertex and at the
/// vertex farthest from it, both halves are simplified as polylines, and the
/// results are rejoined. Returns `None` when fewer than 3 vertices survive.
pub fn rdp_ring(ring: &Ring, params: RdpParams) -> Option<Ring> {
    rdp_cycle(&ring.points(), params).map(|pts| {
        Ring::from_points(&pts).expect("rdp output keeps at least 3 distinct vertices")
    })
}

/// [`rdp_ring`] on a raw vertex cycle.
pub fn rdp_cycle(points: &[Point], params: RdpParams) -> Option<Vec<Point>> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let anchor = points[0];
    let far = (1..n)
        .max_by(|&i, &j| {
            anchor
                .distance_squared(points[i])
                .total_cmp(&anchor.distance_squared(points[j]))
        })
        .unwrap();

    let first_half = &points[..=far];
    let second_half: Vec<Point> = points[far..]
        .iter()
        .chain(std::iter::once(&points[0]))
        .copied()
        .collect();

    let mut out = rdp_polyline(first_half, params).expect("half has >= 2 points");
    let back = rdp_polyline(&second_half, params).expect("half has >= 2 points");
    out.extend_from_slice(&back[1..back.len() - 1]);
    if out.len() < 3 {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn zigzag() -> Vec<Point> {
        vec![
            pt(0.0, 0.0),
            pt(1.0, 0.1),
            pt(2.0, 0.0),
            pt(3.0, 0.1),
            pt(4.0, 0.0),
        ]
    }

    #[test]
    fn drops_deviations_below_tolerance() {
        let got = rdp_polyline(&zigzag(), RdpParams::new(0.2)).unwrap();
        assert_eq!(got, vec![pt(0.0, 0.0), pt(4.0, 0.0)]);
    }

    #[test]
    fn keeps_deviations_above_tolerance() {
        let got = rdp_polyline(&zigzag(), RdpParams::new(0.05)).unwrap();
        assert_eq!(got, zigzag());
    }

    #[test]
    fn zero_tolerance_is_identity() {
        // Even exactly collinear interior points survive at tolerance zero.
        let line = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)];
        let got = rdp_polyline(&line, RdpParams::new(0.0)).unwrap();
        assert_eq!(got, line);
    }

    #[test]
    fn rejects_single_point() {
        assert_eq!(
            rdp_polyline(&[pt(0.0, 0.0)], RdpParams::new(1.0)),
            Err(RdpError::TooFewPoints(1))
        );
    }

    #[test]
    fn ring_square_unchanged() {
        let square = vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)];
        let got = rdp_cycle(&square, RdpParams::new(0.1)).unwrap();
        assert_eq!(got, square);
    }

    #[test]
    fn ring_removes_edge_midpoint() {
        let square = vec![
            pt(0.0, 0.0),
            pt(5.0, 0.0),
            pt(10.0, 0.0),
            pt(10.0, 10.0),
            pt(0.0, 10.0),
        ];
        let got = rdp_cycle(&square, RdpParams::new(0.1)).unwrap();
        assert_eq!(
            got,
            vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)]
        );
    }

    #[test]
    fn ring_flattens_notch_at_large_tolerance() {
        let notch = vec![
            pt(0.0, 0.0),
            pt(4.0, 0.0),
            pt(4.0, 1.0),
            pt(6.0, 1.0),
            pt(6.0, 0.0),
            pt(10.0, 0.0),
            pt(10.0, 10.0),
            pt(0.0, 10.0),
        ];
        let got = rdp_cycle(&notch, RdpParams::new(1.5)).unwrap();
        assert_eq!(got.len(), 4);
        for p in &got {
            assert!(notch.contains(p), "rdp output must reuse input vertices");
        }
    }
}
