//! 2D primitives: points, segments, angles, line intersection.
//!
//! Everything here is value-level and side-effect free. The mutable ring
//! structure built on top of these primitives lives in [`crate::ring`].

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

/// Errors raised by geometric constructors and queries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("ring needs at least 3 distinct vertices, got {0}")]
    DegenerateRing(usize),
    #[error("non-finite coordinate ({0}, {1})")]
    InvalidCoordinate(f64, f64),
    #[error("zero-length segment has no direction")]
    DegenerateSegment,
    #[error("interpolation parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("spike angle at vertex {0}")]
    SpikeAngle(usize),
}

/// A 2D coordinate pair in map units. Also used for direction vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(&self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product of two direction vectors.
    pub fn cross(&self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: Point) -> f64 {
        (*self - other).norm()
    }

    pub fn distance_squared(&self, other: Point) -> f64 {
        let d = *self - other;
        d.dot(d)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// A directed straight segment between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub const fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }

    pub fn vector(&self) -> Point {
        self.end - self.start
    }

    pub fn length(&self) -> f64 {
        self.vector().norm()
    }

    /// Absolute bearing of the segment in [0, 2π).
    pub fn direction_angle(&self) -> Result<DirectionAngle, GeomError> {
        direction_angle(*self)
    }

    /// Point at parameter `r` in [0, 1] along the segment, measured from `start`.
    pub fn point_along(&self, r: f64) -> Result<Point, GeomError> {
        point_along(*self, r)
    }

    /// Minimum Euclidean distance from `q` to the closed segment.
    pub fn distance_to_point(&self, q: Point) -> f64 {
        point_segment_distance(*self, q)
    }
}

/// Absolute bearing of a segment, wrapped into [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionAngle {
    radians: f64,
}

impl DirectionAngle {
    pub fn new(radians: f64) -> Self {
        DirectionAngle {
            radians: wrap_to_tau(radians),
        }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn unit_vector(&self) -> Point {
        Point::new(self.radians.cos(), self.radians.sin())
    }
}

/// Interior angle at a polygon vertex, in [0, 2π).
///
/// Convex vertices are below π, reflex vertices above; an exact U-turn
/// (spike) reads as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorAngle {
    radians: f64,
}

impl InteriorAngle {
    pub fn new(radians: f64) -> Self {
        InteriorAngle { radians }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn is_convex(&self) -> bool {
        self.radians < PI
    }

    pub fn is_reflex(&self) -> bool {
        self.radians > PI
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_to_tau(radians: f64) -> f64 {
    let r = radians.rem_euclid(TAU);
    if r == TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle difference into (-π, π]. Exactly opposite directions map to +π.
pub fn wrap_signed(radians: f64) -> f64 {
    let mut r = radians.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Difference between two interior angles, wrapped so the result lies in [0, π].
pub fn angle_difference(a: InteriorAngle, b: InteriorAngle) -> f64 {
    angle_difference_radians(a.radians(), b.radians())
}

/// Same as [`angle_difference`] on raw radians.
pub fn angle_difference_radians(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(TAU - d)
}

/// Interior angle at vertex `at`, coming in from `prev` and leaving toward `next`.
///
/// Measured on the left-hand side of counterclockwise travel, so a left turn
/// gives a convex angle below π and a right turn a reflex angle above π.
pub fn interior_angle_at(prev: Point, at: Point, next: Point) -> f64 {
    let incoming = at - prev;
    let outgoing = next - at;
    let turn = wrap_signed(outgoing.y.atan2(outgoing.x) - incoming.y.atan2(incoming.x));
    PI - turn
}

/// Bearing of `end - start` in [0, 2π).
pub fn direction_angle(s: Segment) -> Result<DirectionAngle, GeomError> {
    let v = s.vector();
    if v.x == 0.0 && v.y == 0.0 {
        return Err(GeomError::DegenerateSegment);
    }
    Ok(DirectionAngle::new(v.y.atan2(v.x)))
}

/// Point at distance `length(s) * r` from `s.start` along `s`.
pub fn point_along(s: Segment, r: f64) -> Result<Point, GeomError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(GeomError::ParameterOutOfRange(r));
    }
    Ok(s.start + s.vector() * r)
}

/// Outcome of intersecting two (infinite) lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineIntersection {
    Point(Point),
    Parallel,
}

impl LineIntersection {
    pub fn point(&self) -> Option<Point> {
        match self {
            LineIntersection::Point(p) => Some(*p),
            LineIntersection::Parallel => None,
        }
    }
}

/// Intersection of the lines through `p1` with direction `d1` and through `p2`
/// with direction `d2`. Near-parallel directions (relative cross product below
/// 1e-12) yield [`LineIntersection::Parallel`].
pub fn line_intersection(p1: Point, d1: Point, p2: Point, d2: Point) -> LineIntersection {
    let denom = d1.cross(d2);
    if denom.abs() <= 1e-12 * d1.norm() * d2.norm() {
        return LineIntersection::Parallel;
    }
    let t = (p2 - p1).cross(d2) / denom;
    LineIntersection::Point(p1 + d1 * t)
}

/// Minimum distance from `q` to the closed segment `s` (not its supporting line).
pub fn point_segment_distance(s: Segment, q: Point) -> f64 {
    let v = s.vector();
    let len_sq = v.dot(v);
    if len_sq == 0.0 {
        return q.distance(s.start);
    }
    let t = ((q - s.start).dot(v) / len_sq).clamp(0.0, 1.0);
    q.distance(s.start + v * t)
}

/// Ring orientation from the sign of the shoelace area.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Degenerate,
}

/// Twice the signed shoelace area of a closed vertex cycle (no repeated
/// closing point expected).
pub fn signed_area2(points: &[Point]) -> f64 {
    let n = points.len();
    let mut sum = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        sum += a.cross(b);
    }
    sum
}

/// Diagonal of the axis-aligned bounding box of `points`.
pub fn bbox_diagonal(points: &[Point]) -> f64 {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    if points.is_empty() {
        0.0
    } else {
        (max - min).norm()
    }
}

/// Absolute area and orientation of a vertex cycle. The cycle counts as
/// degenerate when its area is below 1e-12 of the squared bounding-box
/// diagonal.
pub fn area_and_orientation(points: &[Point]) -> (f64, Orientation) {
    let signed = signed_area2(points) / 2.0;
    let diag = bbox_diagonal(points);
    let orientation = if signed.abs() <= 1e-12 * diag * diag {
        Orientation::Degenerate
    } else if signed > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    };
    (signed.abs(), orientation)
}
