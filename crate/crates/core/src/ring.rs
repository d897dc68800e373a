//! Circular, mutable vertex ring with stable segment handles.
//!
//! Vertices live in a slot arena linked into a doubly-linked cycle, so edits
//! are O(1) and references survive unrelated edits. Each slot carries a
//! generation stamp for the segment starting there; replacing or removing a
//! segment bumps the stamp, which is how queued references go stale.

use crate::geom::{
    self, GeomError, InteriorAngle, Orientation, Point, Segment,
};

/// Stable identifier of a ring vertex (and of the segment starting at it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexId(pub(crate) usize);

/// Reference to a ring segment at a specific generation. A handle whose
/// generation no longer matches the ring is stale and must be ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentHandle {
    pub(crate) start: VertexId,
    pub(crate) generation: u64,
}

#[derive(Debug, Clone)]
struct Node {
    point: Point,
    prev: usize,
    next: usize,
    live: bool,
    seg_gen: u64,
}

/// A simple polygon boundary in counterclockwise processing order.
#[derive(Debug, Clone)]
pub struct Ring {
    nodes: Vec<Node>,
    head: usize,
    len: usize,
    input_was_clockwise: bool,
    /// Twice the signed area, maintained incrementally across edits.
    area2: f64,
    /// Bounding-box diagonal of the input, fixed at construction; all
    /// degeneracy thresholds scale from it.
    scale: f64,
    gen_counter: u64,
}

impl Ring {
    /// Builds a counterclockwise ring from an ordered vertex list.
    ///
    /// A repeated closing point is dropped, consecutive duplicates are merged,
    /// and clockwise input is reversed (recorded in
    /// [`Ring::input_was_clockwise`] so output can restore it).
    pub fn from_points(points: &[Point]) -> Result<Ring, GeomError> {
        for p in points {
            if !p.is_finite() {
                return Err(GeomError::InvalidCoordinate(p.x, p.y));
            }
        }
        let scale = geom::bbox_diagonal(points);
        let eps = degeneracy_epsilon(scale);

        let mut cleaned: Vec<Point> = Vec::with_capacity(points.len());
        for &p in points {
            if cleaned.last().is_some_and(|last| last.distance(p) <= eps) {
                continue;
            }
            cleaned.push(p);
        }
        while cleaned.len() > 1
            && cleaned[0].distance(*cleaned.last().unwrap()) <= eps
        {
            cleaned.pop();
        }
        if cleaned.len() < 3 {
            return Err(GeomError::DegenerateRing(cleaned.len()));
        }

        let (_, orientation) = geom::area_and_orientation(&cleaned);
        let input_was_clockwise = orientation == Orientation::Clockwise;
        if input_was_clockwise {
            // Head-preserving reversal keeps the first input vertex first.
            cleaned[1..].reverse();
        }

        let n = cleaned.len();
        let nodes = cleaned
            .iter()
            .enumerate()
            .map(|(i, &p)| Node {
                point: p,
                prev: (i + n - 1) % n,
                next: (i + 1) % n,
                live: true,
                seg_gen: i as u64,
            })
            .collect::<Vec<_>>();
        let area2 = geom::signed_area2(&cleaned);
        Ok(Ring {
            nodes,
            head: 0,
            len: n,
            input_was_clockwise,
            area2,
            scale,
            gen_counter: n as u64,
        })
    }

    /// Number of live vertices (equals the number of segments).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn input_was_clockwise(&self) -> bool {
        self.input_was_clockwise
    }

    /// Bounding-box diagonal of the input ring.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Length below which a segment counts as degenerate.
    pub fn length_epsilon(&self) -> f64 {
        degeneracy_epsilon(self.scale)
    }

    /// Twice the signed area as maintained incrementally.
    pub fn signed_area2(&self) -> f64 {
        self.area2
    }

    /// Recomputes twice the signed area from scratch.
    pub fn recompute_area2(&self) -> f64 {
        geom::signed_area2(&self.points())
    }

    /// True when the tracked area is degenerate relative to the input scale.
    pub fn is_area_degenerate(&self) -> bool {
        let threshold = 1e-12 * self.scale * self.scale;
        if self.area2.abs() / 2.0 > 10.0 * threshold {
            return false;
        }
        // Near the cutoff, trust a fresh shoelace pass over the drifting
        // incremental value.
        self.recompute_area2().abs() / 2.0 <= threshold
    }

    pub fn head(&self) -> VertexId {
        VertexId(self.head)
    }

    pub fn is_live_vertex(&self, v: VertexId) -> bool {
        self.nodes.get(v.0).is_some_and(|n| n.live)
    }

    pub fn next(&self, v: VertexId) -> VertexId {
        VertexId(self.nodes[v.0].next)
    }

    pub fn prev(&self, v: VertexId) -> VertexId {
        VertexId(self.nodes[v.0].prev)
    }

    pub fn point(&self, v: VertexId) -> Point {
        self.nodes[v.0].point
    }

    /// The segment starting at `v` and ending at its successor.
    pub fn segment(&self, v: VertexId) -> Segment {
        Segment::new(self.point(v), self.point(self.next(v)))
    }

    /// Current handle for the segment starting at `v`.
    pub fn handle(&self, v: VertexId) -> SegmentHandle {
        SegmentHandle {
            start: v,
            generation: self.nodes[v.0].seg_gen,
        }
    }

    pub fn is_live_handle(&self, h: SegmentHandle) -> bool {
        self.nodes
            .get(h.start.0)
            .is_some_and(|n| n.live && n.seg_gen == h.generation)
    }

    /// Live vertex ids in cycle order starting at the head.
    pub fn vertex_ids(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.len);
        if self.len == 0 {
            return out;
        }
        let mut v = self.head;
        for _ in 0..self.len {
            out.push(VertexId(v));
            v = self.nodes[v].next;
        }
        out
    }

    /// Live vertex coordinates in cycle order starting at the head.
    pub fn points(&self) -> Vec<Point> {
        self.vertex_ids().iter().map(|&v| self.point(v)).collect()
    }

    /// Coordinates in the input's original orientation.
    pub fn points_in_input_orientation(&self) -> Vec<Point> {
        let mut pts = self.points();
        if self.input_was_clockwise {
            pts[1..].reverse();
        }
        pts
    }

    /// Raw interior angle at `v` in [0, 2π); 0 denotes an exact spike.
    pub fn vertex_angle(&self, v: VertexId) -> f64 {
        geom::interior_angle_at(
            self.point(self.prev(v)),
            self.point(v),
            self.point(self.next(v)),
        )
    }

    /// Interior angle at the `i`-th vertex of the current cycle (from the
    /// head, wrapping modulo the length). Spike vertices report
    /// [`GeomError::SpikeAngle`] so cleanup can act on them.
    pub fn interior_angle(&self, i: usize) -> Result<InteriorAngle, GeomError> {
        assert!(self.len >= 3, "interior angle on a dead ring");
        let ids = self.vertex_ids();
        let idx = i % self.len;
        let angle = self.vertex_angle(ids[idx]);
        if angle <= SPIKE_ANGLE_EPSILON || angle >= std::f64::consts::TAU - SPIKE_ANGLE_EPSILON {
            return Err(GeomError::SpikeAngle(idx));
        }
        Ok(InteriorAngle::new(angle))
    }

    /// Absolute area and orientation of the current cycle.
    pub fn area_and_orientation(&self) -> (f64, Orientation) {
        geom::area_and_orientation(&self.points())
    }

    fn bump_segment(&mut self, slot: usize) {
        self.gen_counter += 1;
        self.nodes[slot].seg_gen = self.gen_counter;
    }

    /// Moves `v` to `p`, invalidating the two segments incident to it.
    pub(crate) fn move_vertex(&mut self, v: VertexId, p: Point) {
        debug_assert!(self.is_live_vertex(v));
        let prev = self.nodes[v.0].prev;
        let next = self.nodes[v.0].next;
        let pp = self.nodes[prev].point;
        let pv = self.nodes[v.0].point;
        let pn = self.nodes[next].point;
        self.area2 += pp.cross(p) + p.cross(pn) - pp.cross(pv) - pv.cross(pn);
        self.nodes[v.0].point = p;
        self.bump_segment(v.0);
        self.bump_segment(prev);
    }

    /// Unlinks `v`; the predecessor's segment now runs to the successor.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        debug_assert!(self.is_live_vertex(v));
        debug_assert!(self.len > 1);
        let prev = self.nodes[v.0].prev;
        let next = self.nodes[v.0].next;
        let pp = self.nodes[prev].point;
        let pv = self.nodes[v.0].point;
        let pn = self.nodes[next].point;
        self.area2 += pp.cross(pn) - pp.cross(pv) - pv.cross(pn);
        self.nodes[prev].next = next;
        self.nodes[next].prev = prev;
        self.nodes[v.0].live = false;
        self.bump_segment(v.0);
        self.bump_segment(prev);
        self.len -= 1;
        if self.head == v.0 {
            self.head = next;
        }
    }
}

/// Angular width below which a vertex counts as an exact spike.
pub(crate) const SPIKE_ANGLE_EPSILON: f64 = 1e-9;

/// Degenerate-length threshold for a ring of the given bounding-box diagonal.
pub(crate) fn degeneracy_epsilon(scale: f64) -> f64 {
    1e-9 * scale
}
