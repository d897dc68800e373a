//! Simplification quality measures: size reduction, positional error, and
//! rectilinearity preservation.
//!
//! The Hausdorff distance is computed over boundaries, not filled regions: a
//! lost intrusion changes the boundary distance even when the area barely
//! moves. The computation is analytic — candidate extrema are solved for on
//! each edge instead of sampling the boundary.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geom::{self, point_segment_distance, Point, Segment};

/// Angular window around π/2 and 3π/2 inside which a corner counts as a
/// right angle (5 degrees).
pub const RIGHT_ANGLE_WINDOW: f64 = PI / 36.0;

/// Side-by-side quality numbers for one simplification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub segment_count_before: usize,
    pub segment_count_after: usize,
    pub area_before: f64,
    pub area_after: f64,
    pub hausdorff: f64,
    pub right_angle_fraction_before: f64,
    pub right_angle_fraction_after: f64,
    pub vanished: bool,
}

/// Builds a [`QualityReport`] for a ring and its simplified form. A vanished
/// result reports zero counts and, in place of a boundary-to-boundary
/// Hausdorff distance, the largest distance from the original boundary to
/// its own centroid.
pub fn quality_report(before: &[Point], after: Option<&[Point]>) -> QualityReport {
    let (area_before, _) = geom::area_and_orientation(before);
    match after {
        Some(after) => QualityReport {
            segment_count_before: before.len(),
            segment_count_after: after.len(),
            area_before,
            area_after: geom::area_and_orientation(after).0,
            hausdorff: hausdorff_distance(before, after),
            right_angle_fraction_before: right_angle_fraction(before),
            right_angle_fraction_after: right_angle_fraction(after),
            vanished: false,
        },
        None => {
            let c = centroid(before);
            let hausdorff = before.iter().map(|p| p.distance(c)).fold(0.0, f64::max);
            QualityReport {
                segment_count_before: before.len(),
                segment_count_after: 0,
                area_before,
                area_after: 0.0,
                hausdorff,
                right_angle_fraction_before: right_angle_fraction(before),
                right_angle_fraction_after: 0.0,
                vanished: true,
            }
        }
    }
}

/// Fraction of interior angles within [`RIGHT_ANGLE_WINDOW`] of π/2 or 3π/2.
/// Symmetric under orientation reversal.
pub fn right_angle_fraction(cycle: &[Point]) -> f64 {
    let n = cycle.len();
    if n < 3 {
        return 0.0;
    }
    let right = (0..n)
        .filter(|&i| {
            let a = geom::interior_angle_at(cycle[(i + n - 1) % n], cycle[i], cycle[(i + 1) % n]);
            (a - PI / 2.0).abs() <= RIGHT_ANGLE_WINDOW
                || (a - 3.0 * PI / 2.0).abs() <= RIGHT_ANGLE_WINDOW
        })
        .count();
    right as f64 / n as f64
}

/// Area centroid of a vertex cycle; falls back to the vertex mean for
/// degenerate areas.
pub fn centroid(cycle: &[Point]) -> Point {
    let area2 = geom::signed_area2(cycle);
    let diag = geom::bbox_diagonal(cycle);
    if area2.abs() <= 1e-12 * diag * diag || cycle.is_empty() {
        let n = cycle.len().max(1) as f64;
        let sum = cycle.iter().fold(Point::new(0.0, 0.0), |acc, &p| acc + p);
        return sum * (1.0 / n);
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    let n = cycle.len();
    for i in 0..n {
        let a = cycle[i];
        let b = cycle[(i + 1) % n];
        let w = a.cross(b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    Point::new(cx / (3.0 * area2), cy / (3.0 * area2))
}

/// Symmetric Hausdorff distance between two closed boundaries.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// max over points of `a`'s boundary of the distance to `b`'s boundary.
///
/// Along one edge the distance-to-boundary function is a lower envelope of
/// convex per-feature distances, so its maximum sits at an edge endpoint or
/// at a point equidistant to two features of `b` (a vertex or a supporting
/// line each). Those crossings are linear or quadratic in the edge
/// parameter and are solved in closed form.
pub fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let edges_b = cycle_edges(b);
    if edges_b.is_empty() {
        return 0.0;
    }
    let mut best = 0.0_f64;
    for e in cycle_edges(a) {
        best = best.max(edge_max_distance(e, b, &edges_b, best));
    }
    best
}

fn cycle_edges(cycle: &[Point]) -> Vec<Segment> {
    let n = cycle.len();
    (0..n)
        .map(|i| Segment::new(cycle[i], cycle[(i + 1) % n]))
        .collect()
}

fn distance_to_boundary(p: Point, edges: &[Segment]) -> f64 {
    edges
        .iter()
        .map(|s| point_segment_distance(*s, p))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy)]
enum Feature {
    Vertex(Point),
    Edge(Segment),
}

fn edge_max_distance(e: Segment, b: &[Point], edges_b: &[Segment], so_far: f64) -> f64 {
    let d0 = distance_to_boundary(e.start, edges_b);
    let d1 = distance_to_boundary(e.end, edges_b);
    let mut best = d0.max(d1);
    let elen = e.length();
    if elen == 0.0 {
        return best;
    }
    // The distance function is 1-Lipschitz along the edge, which bounds the
    // achievable maximum and prunes features that can never be nearest at it.
    let ub = 0.5 * (d0 + d1) + 0.5 * elen;
    if ub <= so_far.max(best) {
        return best;
    }
    let reach = ub * 1.0000001 + 1e-12;

    let mut features: Vec<Feature> = Vec::new();
    for s in edges_b {
        if segment_segment_distance(e, *s) <= reach {
            features.push(Feature::Edge(*s));
        }
    }
    for &v in b {
        if point_segment_distance(e, v) <= reach {
            features.push(Feature::Vertex(v));
        }
    }

    let mut candidates: Vec<f64> = Vec::new();
    for i in 0..features.len() {
        for j in i + 1..features.len() {
            equidistant_params(e, features[i], features[j], &mut candidates);
        }
    }
    for t in candidates {
        if (0.0..=1.0).contains(&t) {
            let p = e.start + e.vector() * t;
            best = best.max(distance_to_boundary(p, edges_b));
        }
    }
    best
}

/// Pushes the edge parameters where the two features are equidistant from
/// the edge point. Edges enter through their supporting lines; candidates
/// are validated later by evaluating the true boundary distance.
fn equidistant_params(e: Segment, f: Feature, g: Feature, out: &mut Vec<f64>) {
    let s = e.start;
    let d = e.vector();
    match (f, g) {
        (Feature::Vertex(u), Feature::Vertex(v)) => {
            // |x-u|^2 = |x-v|^2, linear in t.
            let w = v - u;
            let denom = 2.0 * d.dot(w);
            if denom.abs() > 1e-30 {
                let num = v.dot(v) - u.dot(u) - 2.0 * s.dot(w);
                out.push(num / denom);
            }
        }
        (Feature::Edge(a), Feature::Edge(b)) => {
            let (na, ca) = line_normal_offset(a);
            let (nb, cb) = line_normal_offset(b);
            // |na.x - ca| = |nb.x - cb|: two sign cases, each linear in t.
            for sign in [1.0, -1.0] {
                let n = na - nb * sign;
                let denom = n.dot(d);
                if denom.abs() > 1e-30 {
                    let t = (ca - sign * cb - n.dot(s)) / denom;
                    out.push(t);
                }
            }
        }
        (Feature::Vertex(u), Feature::Edge(a)) | (Feature::Edge(a), Feature::Vertex(u)) => {
            // |x-u|^2 = (n.x - c)^2, quadratic in t.
            let (n, c) = line_normal_offset(a);
            let su = s - u;
            let c0 = n.dot(s) - c;
            let c1 = n.dot(d);
            let qa = d.dot(d) - c1 * c1;
            let qb = 2.0 * (d.dot(su) - c0 * c1);
            let qc = su.dot(su) - c0 * c0;
            push_quadratic_roots(qa, qb, qc, out);
        }
    }
}

/// Unit normal and offset of a segment's supporting line: n·x = c.
fn line_normal_offset(s: Segment) -> (Point, f64) {
    let v = s.vector();
    let len = v.norm();
    let n = Point::new(-v.y / len, v.x / len);
    (n, n.dot(s.start))
}

fn push_quadratic_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    if a.abs() <= 1e-30 {
        if b.abs() > 1e-30 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    // Numerically stable splitting of the two roots.
    let q = -0.5 * (b + b.signum() * sq);
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

/// Minimum distance between two closed segments.
pub fn segment_segment_distance(a: Segment, b: Segment) -> f64 {
    if segments_intersect(a, b) {
        return 0.0;
    }
    point_segment_distance(a, b.start)
        .min(point_segment_distance(a, b.end))
        .min(point_segment_distance(b, a.start))
        .min(point_segment_distance(b, a.end))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Whether the closed segments share any point.
pub fn segments_intersect(s1: Segment, s2: Segment) -> bool {
    let d1 = orient(s2.start, s2.end, s1.start);
    let d2 = orient(s2.start, s2.end, s1.end);
    let d3 = orient(s1.start, s1.end, s2.start);
    let d4 = orient(s1.start, s1.end, s2.end);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(s2, s1.start))
        || (d2 == 0.0 && on_segment(s2, s1.end))
        || (d3 == 0.0 && on_segment(s1, s2.start))
        || (d4 == 0.0 && on_segment(s1, s2.end))
}

fn on_segment(s: Segment, p: Point) -> bool {
    p.x >= s.start.x.min(s.end.x)
        && p.x <= s.start.x.max(s.end.x)
        && p.y >= s.start.y.min(s.end.y)
        && p.y <= s.start.y.max(s.end.y)
}

/// Reports whether any two non-adjacent boundary edges of the cycle touch or
/// cross. Used by the optional post-run validity check; nothing is repaired.
pub fn self_intersects(cycle: &[Point]) -> bool {
    let edges = cycle_edges(cycle);
    let n = edges.len();
    for i in 0..n {
        for j in i + 1..n {
            // Skip adjacent edges (they share a vertex by construction).
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(edges[i], edges[j]) {
                return true;
            }
        }
    }
    false
}
