//! Queue-driven polygon simplification.
//!
//! The entry point is [`simplify`]: all segments go into a length-ordered
//! queue, and the shortest live segment is repeatedly dequeued and either
//! merged with a collinear neighbor, regressed, translated, joined, or
//! discarded. The four edit operations are public so their local contracts
//! can be exercised directly.
//!
//! Shared algorithm semantics (the literal step interpreter in the test
//! suite mirrors these exactly):
//! - queue order is (length, insertion sequence), FIFO among equal lengths;
//!   stale entries are dropped silently on dequeue;
//! - edits re-enqueue changed segments in the order the update rules state
//!   them;
//! - after an edit, local cleanup walks the vertices the edit repositioned,
//!   contracting degenerate-length segments and deleting exact spike
//!   vertices, re-enqueueing whatever that touches;
//! - any edit (or cleanup step) that would leave fewer than 3 segments, or
//!   a ring whose area degenerates, vanishes the ring.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{
    self, GeomError, LineIntersection, Point, Segment,
};
use crate::ring::{Ring, SegmentHandle, VertexId, SPIKE_ANGLE_EPSILON};

/// Safety-net dequeue budget, as a multiple of the initial segment count.
pub const DEQUEUE_BUDGET_FACTOR: usize = 16;

/// How the joining distance threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaPolicy {
    /// Constant threshold in map units.
    Fixed(f64),
    /// The dequeued segment's own current length.
    DynamicCurrentLength,
}

/// Thresholds controlling a simplification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifyParams {
    /// Distance threshold: only segments at most this long are simplified.
    pub tau: f64,
    /// Angle threshold for choosing between regression and translation.
    pub epsilon: f64,
    /// Half-width of the collinearity window around π.
    pub delta: f64,
    pub gamma: GammaPolicy,
    /// Use the translate rule's literal case-(b) formula instead of the
    /// corrected sign. See [`translate_segment`].
    pub legacy_translate_sign: bool,
}

/// Default angle threshold (5 degrees).
pub const DEFAULT_EPSILON: f64 = PI / 36.0;
/// Default collinearity threshold (1 degree).
pub const DEFAULT_DELTA: f64 = PI / 180.0;

impl SimplifyParams {
    /// Parameters with the customary defaults for everything but `tau`.
    pub fn new(tau: f64) -> Self {
        SimplifyParams {
            tau,
            epsilon: DEFAULT_EPSILON,
            delta: DEFAULT_DELTA,
            gamma: GammaPolicy::DynamicCurrentLength,
            legacy_translate_sign: false,
        }
    }

    pub fn validate(&self) -> Result<(), InvalidParams> {
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(InvalidParams::Tau(self.tau));
        }
        if !(0.0..PI / 2.0).contains(&self.epsilon) {
            return Err(InvalidParams::Epsilon(self.epsilon));
        }
        if !(0.0..PI / 2.0).contains(&self.delta) {
            return Err(InvalidParams::Delta(self.delta));
        }
        if let GammaPolicy::Fixed(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(InvalidParams::Gamma(g));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvalidParams {
    #[error("tau must be finite and non-negative, got {0}")]
    Tau(f64),
    #[error("epsilon must lie in [0, pi/2), got {0}")]
    Epsilon(f64),
    #[error("delta must lie in [0, pi/2), got {0}")]
    Delta(f64),
    #[error("fixed gamma must be finite and non-negative, got {0}")]
    Gamma(f64),
}

/// Per-run accounting: how often each edit fired and how the run ended.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SimplifyReport {
    pub initial_vertices: usize,
    pub final_vertices: usize,
    /// Live dequeues: this is the count the budget applies to.
    pub dequeues: usize,
    pub stale_dequeues: usize,
    pub collinear_merges: usize,
    pub regressions: usize,
    pub translations: usize,
    pub joins: usize,
    /// Middle-point removals from the failed-join path (collinear merges are
    /// counted separately above).
    pub removed_middle_points: usize,
    pub fallback_skips: usize,
    pub budget_exhausted: bool,
    pub vanished: bool,
}

/// Result of simplifying one ring.
#[derive(Debug)]
pub enum Simplified {
    Live(Ring),
    Vanished,
}

impl Simplified {
    pub fn ring(&self) -> Option<&Ring> {
        match self {
            Simplified::Live(r) => Some(r),
            Simplified::Vanished => None,
        }
    }

    pub fn is_vanished(&self) -> bool {
        matches!(self, Simplified::Vanished)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct QueueEntry {
    length_bits: u64,
    seq: u64,
    handle: SegmentHandle,
}

impl QueueEntry {
    fn key(&self) -> (u64, u64) {
        (self.length_bits, self.seq)
    }
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-priority queue of segments keyed by (length, insertion sequence).
///
/// Deletion is lazy: edits bump the ring's segment generations, and entries
/// whose handle no longer matches are dropped when they surface.
#[derive(Debug, Default)]
pub struct SegmentQueue {
    heap: BinaryHeap<Reverse<QueueEntry>>,
    seq: u64,
}

impl SegmentQueue {
    pub fn new() -> Self {
        SegmentQueue::default()
    }

    /// Enqueues the segment currently starting at `v`.
    pub fn push(&mut self, ring: &Ring, v: VertexId) {
        let length = ring.segment(v).length();
        debug_assert!(length.is_finite());
        // Finite non-negative doubles order correctly by their bit patterns.
        let entry = QueueEntry {
            length_bits: length.to_bits(),
            seq: self.seq,
            handle: ring.handle(v),
        };
        self.seq += 1;
        self.heap.push(Reverse(entry));
    }

    fn pop(&mut self) -> Option<(f64, SegmentHandle)> {
        self.heap
            .pop()
            .map(|Reverse(e)| (f64::from_bits(e.length_bits), e.handle))
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// What a single edit did to the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOutcome {
    Applied,
    /// The edit (or its cleanup) left the ring below 3 segments.
    Vanished,
    /// The edit could not be applied safely and changed nothing.
    Skipped,
}

/// Merges `s_k` with its successor into a single segment spanning their
/// outer endpoints, deleting the shared vertex.
pub fn remove_middle_point(
    ring: &mut Ring,
    queue: &mut SegmentQueue,
    s_k: SegmentHandle,
) -> EditOutcome {
    debug_assert!(ring.is_live_handle(s_k));
    if ring.len() - 1 < 3 {
        return EditOutcome::Vanished;
    }
    let v = s_k.start;
    let p_k = ring.point(v);
    let p_k2 = ring.point(ring.next(ring.next(v)));
    ring.remove_vertex(ring.next(v));
    debug_assert_eq!(ring.segment(v), Segment::new(p_k, p_k2));
    queue.push(ring, v);
    cleanup(ring, queue, &[])
}

/// Replaces `s_k` with a segment along the length-weighted mean direction of
/// its neighbors, re-anchored on the supporting lines of the segments two
/// steps away. Leaves the vertex count unchanged; the updated neighbors come
/// out exactly collinear with their outer neighbors, so later dequeues merge
/// them through the collinearity branch.
///
/// Falls back to a no-op (`Skipped`) when the ring has fewer than 5
/// segments, a projection is parallel, or an updated segment would reverse
/// direction (fold the boundary back on itself).
pub fn segment_regression(
    ring: &mut Ring,
    queue: &mut SegmentQueue,
    s_k: SegmentHandle,
) -> EditOutcome {
    debug_assert!(ring.is_live_handle(s_k));
    if ring.len() < 5 {
        return EditOutcome::Skipped;
    }
    let v = s_k.start;
    let v_prev = ring.prev(v);
    let v_next = ring.next(v);
    let seg_k = ring.segment(v);
    let seg_prev = ring.segment(v_prev);
    let seg_next = ring.segment(v_next);
    let seg_prev2 = ring.segment(ring.prev(v_prev));
    let seg_next2 = ring.segment(ring.next(v_next));

    let len_prev = seg_prev.length();
    let len_next = seg_next.length();
    let r = len_prev / (len_prev + len_next);
    let Ok(p) = seg_k.point_along(r) else {
        return EditOutcome::Skipped;
    };

    // Mean direction of the two neighbors, weighted by r along the shorter
    // circular arc.
    let (Ok(dir_prev), Ok(dir_next)) = (seg_prev.direction_angle(), seg_next.direction_angle())
    else {
        return EditOutcome::Skipped;
    };
    let arc = geom::wrap_signed(dir_next.radians() - dir_prev.radians());
    let theta = geom::DirectionAngle::new(dir_prev.radians() + (1.0 - r) * arc);
    let dir = theta.unit_vector();

    let q1 = geom::line_intersection(seg_prev2.start, seg_prev2.vector(), p, dir);
    let q2 = geom::line_intersection(seg_next2.start, seg_next2.vector(), p, dir);
    let (LineIntersection::Point(q1), LineIntersection::Point(q2)) = (q1, q2) else {
        return EditOutcome::Skipped;
    };

    // Reject inversions of the three updated segments and fold-backs along
    // the outer supporting lines.
    let new_sk = q2 - q1;
    let new_prev = q1 - seg_prev.start;
    let new_next = seg_next.end - q2;
    if new_sk.dot(seg_k.vector()) < 0.0
        || new_prev.dot(seg_prev.vector()) < 0.0
        || new_next.dot(seg_next.vector()) < 0.0
        || new_prev.dot(seg_prev2.vector()) < 0.0
        || new_next.dot(seg_next2.vector()) < 0.0
    {
        return EditOutcome::Skipped;
    }

    debug_assert!(on_line(q1, seg_prev2), "q1 off the prev-prev line");
    debug_assert!(on_line(q2, seg_next2), "q2 off the next-next line");

    ring.move_vertex(v, q1);
    ring.move_vertex(v_next, q2);
    queue.push(ring, v_prev);
    queue.push(ring, v);
    queue.push(ring, v_next);
    cleanup(ring, queue, &[v, v_next])
}

/// Shifts `s_k` sideways onto the level of its shorter neighbor, absorbing
/// an intrusion, extrusion, or offset step.
///
/// With equal neighbor lengths both neighbors are deleted and `s_k` spans
/// their outer endpoints. With `legacy_sign` the literal update-rule formula
/// `p' = p_k - vec(s_{k+1})` is used for the longer-previous case; the
/// default flips that sign so the moved segment is an exact rigid translate
/// of the original, mirroring the other case.
pub fn translate_segment(
    ring: &mut Ring,
    queue: &mut SegmentQueue,
    s_k: SegmentHandle,
    legacy_sign: bool,
) -> EditOutcome {
    debug_assert!(ring.is_live_handle(s_k));
    let v = s_k.start;
    let v_prev = ring.prev(v);
    let v_next = ring.next(v);
    let seg_k = ring.segment(v);
    let seg_prev = ring.segment(v_prev);
    let seg_next = ring.segment(v_next);
    let len_prev = seg_prev.length();
    let len_next = seg_next.length();
    let old_len = seg_k.length();

    if len_prev < len_next {
        if ring.len() - 1 < 3 {
            return EditOutcome::Vanished;
        }
        let p_new = seg_k.end - seg_prev.vector();
        ring.move_vertex(v_next, p_new);
        ring.remove_vertex(v);
        debug_assert!(
            (ring.segment(v_prev).length() - old_len).abs() <= 1e-9 * old_len.max(1.0),
            "translate must move s_k rigidly"
        );
        queue.push(ring, v_prev); // new s_k
        queue.push(ring, v_next); // new s_{k+1}
        cleanup(ring, queue, &[v_next])
    } else if len_prev > len_next {
        if ring.len() - 1 < 3 {
            return EditOutcome::Vanished;
        }
        let p_new = if legacy_sign {
            seg_k.start - seg_next.vector()
        } else {
            seg_k.start + seg_next.vector()
        };
        ring.move_vertex(v, p_new);
        ring.remove_vertex(v_next);
        if !legacy_sign {
            debug_assert!(
                (ring.segment(v).length() - old_len).abs() <= 1e-9 * old_len.max(1.0),
                "translate must move s_k rigidly"
            );
        }
        queue.push(ring, v_prev); // new s_{k-1}
        queue.push(ring, v); // new s_k
        cleanup(ring, queue, &[v])
    } else {
        if ring.len() - 2 < 3 {
            return EditOutcome::Vanished;
        }
        ring.remove_vertex(v_next);
        ring.remove_vertex(v);
        queue.push(ring, v_prev); // new s_k spanning the outer endpoints
        cleanup(ring, queue, &[])
    }
}

/// Deletes `s_k` and reconnects its neighbors through `q`, the intersection
/// of their supporting lines. The caller has already verified that `q` lies
/// within the joining distance of `s_k`.
pub fn join_segment(
    ring: &mut Ring,
    queue: &mut SegmentQueue,
    s_k: SegmentHandle,
    q: Point,
) -> EditOutcome {
    debug_assert!(ring.is_live_handle(s_k));
    if ring.len() - 1 < 3 {
        return EditOutcome::Vanished;
    }
    let v = s_k.start;
    let v_prev = ring.prev(v);
    let v_next = ring.next(v);
    debug_assert!(on_line(q, ring.segment(v_prev)), "q off the prev line");
    debug_assert!(on_line(q, ring.segment(v_next)), "q off the next line");
    ring.move_vertex(v_next, q);
    ring.remove_vertex(v);
    queue.push(ring, v_prev); // new s_{k-1}
    queue.push(ring, v_next); // new s_{k+1}
    cleanup(ring, queue, &[v_next])
}

fn on_line(q: Point, line: Segment) -> bool {
    let d = line.vector();
    let cross = (q - line.start).cross(d);
    cross.abs() <= 1e-9 * d.norm() * (1.0 + (q - line.start).norm())
}

/// Local degeneracy repair around vertices an edit repositioned.
///
/// Contracts segments below the length epsilon and deletes exact spike
/// vertices, cascading to whatever those removals touch. Newly merged
/// segments are enqueued like any other changed segment.
fn cleanup(ring: &mut Ring, queue: &mut SegmentQueue, moved: &[VertexId]) -> EditOutcome {
    let eps = ring.length_epsilon();
    let mut work: VecDeque<VertexId> = moved.iter().copied().collect();
    while let Some(v) = work.pop_front() {
        if !ring.is_live_vertex(v) {
            continue;
        }
        let prev = ring.prev(v);
        let next = ring.next(v);
        if ring.point(v).distance(ring.point(prev)) <= eps {
            if ring.len() - 1 < 3 {
                return EditOutcome::Vanished;
            }
            ring.remove_vertex(v);
            queue.push(ring, prev);
            work.push_back(prev);
        } else if ring.point(next).distance(ring.point(v)) <= eps {
            if ring.len() - 1 < 3 {
                return EditOutcome::Vanished;
            }
            ring.remove_vertex(next);
            queue.push(ring, v);
            work.push_back(v);
        } else {
            let angle = ring.vertex_angle(v);
            if angle <= SPIKE_ANGLE_EPSILON || angle >= 2.0 * PI - SPIKE_ANGLE_EPSILON {
                if ring.len() - 1 < 3 {
                    return EditOutcome::Vanished;
                }
                ring.remove_vertex(v);
                queue.push(ring, prev);
                work.push_back(prev);
                work.push_back(next);
            }
        }
    }
    EditOutcome::Applied
}

/// Simplifies a counterclockwise ring in place, consuming it.
///
/// Dequeues the shortest live segment and dispatches on its interior angles:
/// near-π angles merge collinear neighbors regardless of length; segments at
/// most `tau` long are regressed, translated, or joined depending on the
/// difference between the angles entering and leaving them; everything else
/// is discarded. Needle-shaped remnants vanish rather than survive as
/// slivers.
pub fn simplify(ring: Ring, params: &SimplifyParams) -> (Simplified, SimplifyReport) {
    params
        .validate()
        .expect("invalid simplification parameters");
    let mut ring = ring;
    let mut report = SimplifyReport {
        initial_vertices: ring.len(),
        ..SimplifyReport::default()
    };

    if ring.is_area_degenerate() {
        report.vanished = true;
        return (Simplified::Vanished, report);
    }

    let budget = DEQUEUE_BUDGET_FACTOR * ring.len();
    let mut queue = SegmentQueue::new();
    for v in ring.vertex_ids() {
        queue.push(&ring, v);
    }

    while ring.len() >= 3 {
        let Some((length, handle)) = queue.pop() else {
            break;
        };
        if !ring.is_live_handle(handle) {
            report.stale_dequeues += 1;
            continue;
        }
        if report.dequeues >= budget {
            report.budget_exhausted = true;
            break;
        }
        report.dequeues += 1;

        let v = handle.start;

        // A degenerate-length survivor (e.g. a fold merged onto itself) is
        // contracted like any cleanup case.
        if length <= ring.length_epsilon() {
            if cleanup(&mut ring, &mut queue, &[v]) == EditOutcome::Vanished {
                return vanish(report);
            }
            if vanished_by_area(&mut ring, &mut report) {
                return (Simplified::Vanished, report);
            }
            continue;
        }

        let hat_i = ring.vertex_angle(ring.next(v));
        let outcome = if PI - params.delta < hat_i && hat_i < PI + params.delta {
            report.collinear_merges += 1;
            remove_middle_point(&mut ring, &mut queue, handle)
        } else if length <= params.tau {
            let hat_prev = ring.vertex_angle(v);
            let alpha = geom::angle_difference_radians(hat_prev, hat_i);
            if alpha <= params.epsilon && ring.len() >= 5 {
                match segment_regression(&mut ring, &mut queue, handle) {
                    EditOutcome::Skipped => {
                        report.fallback_skips += 1;
                        EditOutcome::Skipped
                    }
                    other => {
                        report.regressions += 1;
                        other
                    }
                }
            } else if PI - alpha <= params.epsilon {
                report.translations += 1;
                translate_segment(&mut ring, &mut queue, handle, params.legacy_translate_sign)
            } else {
                let seg_prev = ring.segment(ring.prev(v));
                let seg_next = ring.segment(ring.next(v));
                let gamma = match params.gamma {
                    GammaPolicy::Fixed(g) => g,
                    GammaPolicy::DynamicCurrentLength => length,
                };
                let q = geom::line_intersection(
                    seg_prev.start,
                    seg_prev.vector(),
                    seg_next.start,
                    seg_next.vector(),
                )
                .point()
                .filter(|q| ring.segment(v).distance_to_point(*q) <= gamma);
                match q {
                    Some(q) => {
                        report.joins += 1;
                        join_segment(&mut ring, &mut queue, handle, q)
                    }
                    None => {
                        report.removed_middle_points += 1;
                        let target = if seg_prev.length() < seg_next.length() {
                            ring.handle(ring.prev(v))
                        } else {
                            handle
                        };
                        remove_middle_point(&mut ring, &mut queue, target)
                    }
                }
            }
        } else {
            // Longer than tau and not collinear: discarded, not re-enqueued.
            EditOutcome::Skipped
        };

        if outcome == EditOutcome::Vanished {
            return vanish(report);
        }
        if outcome == EditOutcome::Applied && vanished_by_area(&mut ring, &mut report) {
            return (Simplified::Vanished, report);
        }
    }

    if ring.len() < 3 {
        return vanish(report);
    }
    report.final_vertices = ring.len();
    (Simplified::Live(ring), report)
}

fn vanish(mut report: SimplifyReport) -> (Simplified, SimplifyReport) {
    report.vanished = true;
    report.final_vertices = 0;
    (Simplified::Vanished, report)
}

fn vanished_by_area(ring: &mut Ring, report: &mut SimplifyReport) -> bool {
    if ring.is_area_degenerate() {
        report.vanished = true;
        report.final_vertices = 0;
        true
    } else {
        false
    }
}

/// Simplifies a raw vertex cycle, returning the result in the orientation
/// the input used.
pub fn simplify_cycle(
    points: &[Point],
    params: &SimplifyParams,
) -> Result<(Option<Vec<Point>>, SimplifyReport), GeomError> {
    let ring = Ring::from_points(points)?;
    let (result, report) = simplify(ring, params);
    let out = match result {
        Simplified::Live(r) => Some(r.points_in_input_orientation()),
        Simplified::Vanished => None,
    };
    Ok((out, report))
}

/// One polygon: an exterior ring plus zero or more interior rings (holes).
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonRings {
    pub exterior: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

/// Result of simplifying a polygon ring-by-ring.
#[derive(Debug)]
pub struct PolygonOutcome {
    /// `None` when the exterior ring vanished.
    pub polygon: Option<PolygonRings>,
    pub exterior_report: SimplifyReport,
    pub hole_reports: Vec<SimplifyReport>,
}

/// Simplifies each ring of a polygon independently. Vanished holes are
/// dropped; a vanished exterior drops the polygon.
pub fn simplify_polygon(
    polygon: &PolygonRings,
    params: &SimplifyParams,
) -> Result<PolygonOutcome, GeomError> {
    let (exterior, exterior_report) = simplify_cycle(&polygon.exterior, params)?;
    let mut hole_reports = Vec::with_capacity(polygon.holes.len());
    let mut holes = Vec::new();
    for hole in &polygon.holes {
        let (simplified, report) = simplify_cycle(hole, params)?;
        hole_reports.push(report);
        if let Some(points) = simplified {
            holes.push(points);
        }
    }
    let polygon = exterior.map(|exterior| PolygonRings { exterior, holes });
    Ok(PolygonOutcome {
        polygon,
        exterior_report,
        hole_reports,
    })
}
