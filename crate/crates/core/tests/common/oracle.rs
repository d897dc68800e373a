//! Literal step interpreter for the queue-driven simplification procedure.
//!
//! This is the independent oracle the production engine is checked against.
//! It shares no code with the engine: the ring is a plain vector that gets
//! spliced on every edit, the queue is a vector scanned for its minimum on
//! every dequeue, and all geometry is computed inline. It follows the same
//! update rules and documented bookkeeping (FIFO tie-breaks, re-enqueue
//! orders, local cleanup, vanish conditions) step by step.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy)]
struct Vtx {
    x: f64,
    y: f64,
    /// Stable vertex identity (survives coordinate changes).
    vid: u64,
    /// Identity of the segment starting at this vertex; refreshed whenever
    /// the segment changes, which strands stale queue entries.
    seg: u64,
}

#[derive(Debug, Clone, Copy)]
struct QueueEntry {
    len: f64,
    seq: u64,
    seg: u64,
}

pub struct OracleOutcome {
    /// Final vertex cycle, or `None` if the ring vanished.
    pub ring: Option<Vec<(f64, f64)>>,
    pub live_dequeues: usize,
    pub budget_exhausted: bool,
}

struct Interp {
    ring: Vec<Vtx>,
    queue: Vec<QueueEntry>,
    next_vid: u64,
    next_seg: u64,
    next_seq: u64,
    len_eps: f64,
}

const SPIKE_EPS: f64 = 1e-9;

pub fn oracle_simplify(
    input: &[(f64, f64)],
    tau: f64,
    epsilon: f64,
    delta: f64,
    gamma: Option<f64>,
) -> OracleOutcome {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let diag = bbox_diag(input);
    let eps = 1e-9 * diag;
    for &p in input {
        if let Some(&last) = pts.last() {
            if dist(last, p) <= eps {
                continue;
            }
        }
        pts.push(p);
    }
    while pts.len() > 1 && dist(pts[0], *pts.last().unwrap()) <= eps {
        pts.pop();
    }
    assert!(pts.len() >= 3, "oracle input must form a ring");
    if shoelace2(&pts) < 0.0 {
        pts[1..].reverse();
    }

    let mut interp = Interp {
        ring: Vec::new(),
        queue: Vec::new(),
        next_vid: 0,
        next_seg: 0,
        next_seq: 0,
        len_eps: eps,
    };
    for &(x, y) in &pts {
        let vid = interp.next_vid;
        interp.next_vid += 1;
        let seg = interp.next_seg;
        interp.next_seg += 1;
        interp.ring.push(Vtx { x, y, vid, seg });
    }
    let n0 = interp.ring.len();
    let budget = 16 * n0;

    let mut live_dequeues = 0usize;
    let mut budget_exhausted = false;

    if area_degenerate(&interp.ring, diag) {
        return OracleOutcome {
            ring: None,
            live_dequeues,
            budget_exhausted,
        };
    }

    for i in 0..interp.ring.len() {
        interp.enqueue(i);
    }

    let mut vanished = false;
    'main: while interp.ring.len() >= 3 {
        let Some((len, seg)) = interp.dequeue() else {
            break;
        };
        if live_dequeues >= budget {
            budget_exhausted = true;
            break;
        }
        live_dequeues += 1;
        let k = interp.index_of_seg(seg).expect("dequeued segment is live");

        if len <= interp.len_eps {
            let vid = interp.ring[k].vid;
            if interp.cleanup(vec![vid]) {
                vanished = true;
                break;
            }
            if area_degenerate(&interp.ring, diag) {
                vanished = true;
                break;
            }
            continue;
        }

        let n = interp.ring.len();
        let hat_i = interp.angle_at((k + 1) % n);
        let applied = if PI - delta < hat_i && hat_i < PI + delta {
            match interp.remove_middle_point(k) {
                Edit::Vanished => {
                    vanished = true;
                    break 'main;
                }
                e => e == Edit::Applied,
            }
        } else if len <= tau {
            let hat_prev = interp.angle_at(k);
            let mut alpha = (hat_prev - hat_i).abs();
            alpha = alpha.min(TAU - alpha);
            let edit = if alpha <= epsilon && n >= 5 {
                interp.segment_regression(k)
            } else if PI - alpha <= epsilon {
                interp.translate_segment(k)
            } else {
                let g = gamma.unwrap_or(len);
                interp.corner(k, g)
            };
            match edit {
                Edit::Vanished => {
                    vanished = true;
                    break 'main;
                }
                e => e == Edit::Applied,
            }
        } else {
            false // longer than tau, not collinear: dropped
        };

        if applied && area_degenerate(&interp.ring, diag) {
            vanished = true;
            break;
        }
    }

    if vanished || interp.ring.len() < 3 {
        return OracleOutcome {
            ring: None,
            live_dequeues,
            budget_exhausted,
        };
    }
    OracleOutcome {
        ring: Some(interp.ring.iter().map(|v| (v.x, v.y)).collect()),
        live_dequeues,
        budget_exhausted,
    }
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Edit {
    Applied,
    Vanished,
    Skipped,
}

impl Interp {
    fn pos(&self, i: usize) -> (f64, f64) {
        let v = &self.ring[i % self.ring.len()];
        (v.x, v.y)
    }

    fn index_of_seg(&self, seg: u64) -> Option<usize> {
        self.ring.iter().position(|v| v.seg == seg)
    }

    fn index_of_vid(&self, vid: u64) -> Option<usize> {
        self.ring.iter().position(|v| v.vid == vid)
    }

    fn seg_len(&self, i: usize) -> f64 {
        let n = self.ring.len();
        dist(self.pos(i), self.pos((i + 1) % n))
    }

    fn enqueue(&mut self, i: usize) {
        let entry = QueueEntry {
            len: self.seg_len(i),
            seq: self.next_seq,
            seg: self.ring[i].seg,
        };
        self.next_seq += 1;
        self.queue.push(entry);
    }

    /// Scan-minimum dequeue over live entries, FIFO among equal lengths.
    fn dequeue(&mut self) -> Option<(f64, u64)> {
        let mut best: Option<usize> = None;
        for (i, entry) in self.queue.iter().enumerate() {
            if self.index_of_seg(entry.seg).is_none() {
                continue; // stale
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let cur = &self.queue[b];
                    if (entry.len, entry.seq) < (cur.len, cur.seq) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let i = best?;
        let entry = self.queue.remove(i);
        Some((entry.len, entry.seg))
    }

    fn refresh(&mut self, i: usize) {
        self.ring[i].seg = self.next_seg;
        self.next_seg += 1;
    }

    fn move_vertex(&mut self, i: usize, p: (f64, f64)) {
        let n = self.ring.len();
        self.ring[i].x = p.0;
        self.ring[i].y = p.1;
        self.refresh(i);
        self.refresh((i + n - 1) % n);
    }

    fn remove_vertex(&mut self, i: usize) {
        let n = self.ring.len();
        self.refresh((i + n - 1) % n);
        self.ring.remove(i);
    }

    fn angle_at(&self, i: usize) -> f64 {
        let n = self.ring.len();
        let a = self.pos((i + n - 1) % n);
        let b = self.pos(i);
        let c = self.pos((i + 1) % n);
        let din = (b.1 - a.1).atan2(b.0 - a.0);
        let dout = (c.1 - b.1).atan2(c.0 - b.0);
        PI - wrap_signed(dout - din)
    }

    /// Merge segments k and k+1 into (p_k, p_{k+2}).
    fn remove_middle_point(&mut self, k: usize) -> Edit {
        let n = self.ring.len();
        if n - 1 < 3 {
            return Edit::Vanished;
        }
        let vid_k = self.ring[k].vid;
        self.remove_vertex((k + 1) % n);
        let k_now = self.index_of_vid(vid_k).unwrap();
        self.enqueue(k_now);
        if self.cleanup(vec![]) {
            return Edit::Vanished;
        }
        Edit::Applied
    }

    fn translate_segment(&mut self, k: usize) -> Edit {
        let n = self.ring.len();
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        let next2 = (k + 2) % n;
        let lm = self.seg_len(prev);
        let lp = self.seg_len(next);
        let p_prev = self.pos(prev);
        let p_k = self.pos(k);
        let p_k1 = self.pos(next);
        let p_k2 = self.pos(next2);
        let vid_prev = self.ring[prev].vid;
        if lm < lp {
            if n - 1 < 3 {
                return Edit::Vanished;
            }
            let moved = (p_k1.0 - (p_k.0 - p_prev.0), p_k1.1 - (p_k.1 - p_prev.1));
            let vid_moved = self.ring[next].vid;
            self.move_vertex(next, moved);
            let k_now = self.index_of_vid(self.ring[k].vid).unwrap();
            self.remove_vertex(k_now);
            self.enqueue(self.index_of_vid(vid_prev).unwrap()); // new s_k
            self.enqueue(self.index_of_vid(vid_moved).unwrap()); // new s_{k+1}
            if self.cleanup(vec![vid_moved]) {
                return Edit::Vanished;
            }
            Edit::Applied
        } else if lm > lp {
            if n - 1 < 3 {
                return Edit::Vanished;
            }
            // Corrected sign: push p_k forward by the next segment's vector.
            let moved = (p_k.0 + (p_k2.0 - p_k1.0), p_k.1 + (p_k2.1 - p_k1.1));
            let vid_k = self.ring[k].vid;
            self.move_vertex(k, moved);
            self.remove_vertex((self.index_of_vid(vid_k).unwrap() + 1) % self.ring.len());
            self.enqueue(self.index_of_vid(vid_prev).unwrap()); // new s_{k-1}
            self.enqueue(self.index_of_vid(vid_k).unwrap()); // new s_k
            if self.cleanup(vec![vid_k]) {
                return Edit::Vanished;
            }
            Edit::Applied
        } else {
            if n - 2 < 3 {
                return Edit::Vanished;
            }
            let vid_k = self.ring[k].vid;
            self.remove_vertex(next);
            let k_now = self.index_of_vid(vid_k).unwrap();
            self.remove_vertex(k_now);
            self.enqueue(self.index_of_vid(vid_prev).unwrap()); // new s_k
            if self.cleanup(vec![]) {
                return Edit::Vanished;
            }
            Edit::Applied
        }
    }

    fn segment_regression(&mut self, k: usize) -> Edit {
        let n = self.ring.len();
        if n < 5 {
            return Edit::Skipped;
        }
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        let prev2 = (k + n - 2) % n;
        let next2 = (k + 2) % n;

        let lm = self.seg_len(prev);
        let lp = self.seg_len(next);
        let r = lm / (lm + lp);

        let p_k = self.pos(k);
        let p_k1 = self.pos(next);
        let p = (
            p_k.0 + (p_k1.0 - p_k.0) * r,
            p_k.1 + (p_k1.1 - p_k.1) * r,
        );

        let d_prev = self.direction(prev);
        let d_next = self.direction(next);
        let theta = d_prev + (1.0 - r) * wrap_signed(d_next - d_prev);
        let dir = (theta.cos(), theta.sin());

        let line_prev2 = (self.pos(prev2), self.vector(prev2));
        let line_next2 = (self.pos(next2), self.vector(next2));
        let Some(q1) = line_cross(line_prev2.0, line_prev2.1, p, dir) else {
            return Edit::Skipped;
        };
        let Some(q2) = line_cross(line_next2.0, line_next2.1, p, dir) else {
            return Edit::Skipped;
        };

        let p_prev = self.pos(prev);
        let p_k2 = self.pos(next2);
        let new_sk = sub(q2, q1);
        let new_prev = sub(q1, p_prev);
        let new_next = sub(p_k2, q2);
        if dot(new_sk, self.vector(k)) < 0.0
            || dot(new_prev, self.vector(prev)) < 0.0
            || dot(new_next, self.vector(next)) < 0.0
            || dot(new_prev, self.vector(prev2)) < 0.0
            || dot(new_next, self.vector(next2)) < 0.0
        {
            return Edit::Skipped;
        }

        let vid_prev = self.ring[prev].vid;
        let vid_k = self.ring[k].vid;
        let vid_next = self.ring[next].vid;
        self.move_vertex(k, q1);
        self.move_vertex(self.index_of_vid(vid_next).unwrap(), q2);
        self.enqueue(self.index_of_vid(vid_prev).unwrap());
        self.enqueue(self.index_of_vid(vid_k).unwrap());
        self.enqueue(self.index_of_vid(vid_next).unwrap());
        if self.cleanup(vec![vid_k, vid_next]) {
            return Edit::Vanished;
        }
        Edit::Applied
    }

    /// Join through the neighbor-line intersection when it is close enough,
    /// otherwise remove the middle point on the shorter-neighbor side.
    fn corner(&mut self, k: usize, gamma: f64) -> Edit {
        let n = self.ring.len();
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        let q = line_cross(self.pos(prev), self.vector(prev), self.pos(next), self.vector(next));
        if let Some(q) = q {
            if point_seg_dist(q, self.pos(k), self.pos(next)) <= gamma {
                if n - 1 < 3 {
                    return Edit::Vanished;
                }
                let vid_prev = self.ring[prev].vid;
                let vid_next = self.ring[next].vid;
                let vid_k = self.ring[k].vid;
                self.move_vertex(next, q);
                let k_now = self.index_of_vid(vid_k).unwrap();
                self.remove_vertex(k_now);
                self.enqueue(self.index_of_vid(vid_prev).unwrap()); // new s_{k-1}
                self.enqueue(self.index_of_vid(vid_next).unwrap()); // new s_{k+1}
                if self.cleanup(vec![vid_next]) {
                    return Edit::Vanished;
                }
                return Edit::Applied;
            }
        }
        if self.seg_len(prev) < self.seg_len(next) {
            self.remove_middle_point(prev)
        } else {
            self.remove_middle_point(k)
        }
    }

    fn direction(&self, i: usize) -> f64 {
        let v = self.vector(i);
        v.1.atan2(v.0)
    }

    fn vector(&self, i: usize) -> (f64, f64) {
        let n = self.ring.len();
        sub(self.pos((i + 1) % n), self.pos(i))
    }

    /// Contract degenerate-length segments and delete exact spikes around
    /// the vertices an edit repositioned. Returns true if the ring vanished.
    fn cleanup(&mut self, moved: Vec<u64>) -> bool {
        let mut work: VecDeque<u64> = moved.into();
        while let Some(vid) = work.pop_front() {
            let Some(i) = self.index_of_vid(vid) else {
                continue;
            };
            let n = self.ring.len();
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            if dist(self.pos(i), self.pos(prev)) <= self.len_eps {
                if n - 1 < 3 {
                    return true;
                }
                let vid_prev = self.ring[prev].vid;
                self.remove_vertex(i);
                self.enqueue(self.index_of_vid(vid_prev).unwrap());
                work.push_back(vid_prev);
            } else if dist(self.pos(next), self.pos(i)) <= self.len_eps {
                if n - 1 < 3 {
                    return true;
                }
                self.remove_vertex(next);
                self.enqueue(self.index_of_vid(vid).unwrap());
                work.push_back(vid);
            } else {
                let angle = self.angle_at(i);
                if angle <= SPIKE_EPS || angle >= TAU - SPIKE_EPS {
                    if n - 1 < 3 {
                        return true;
                    }
                    let vid_prev = self.ring[prev].vid;
                    let vid_next = self.ring[next].vid;
                    self.remove_vertex(i);
                    self.enqueue(self.index_of_vid(vid_prev).unwrap());
                    work.push_back(vid_prev);
                    work.push_back(vid_next);
                }
            }
        }
        false
    }
}

fn sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn bbox_diag(points: &[(f64, f64)]) -> f64 {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        0.0
    } else {
        (x1 - x0).hypot(y1 - y0)
    }
}

fn shoelace2(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| cross(points[i], points[(i + 1) % n]))
        .sum()
}

fn area_degenerate(ring: &[Vtx], diag: f64) -> bool {
    let pts: Vec<(f64, f64)> = ring.iter().map(|v| (v.x, v.y)).collect();
    shoelace2(&pts).abs() / 2.0 <= 1e-12 * diag * diag
}

fn wrap_signed(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

fn line_cross(
    p1: (f64, f64),
    d1: (f64, f64),
    p2: (f64, f64),
    d2: (f64, f64),
) -> Option<(f64, f64)> {
    let denom = cross(d1, d2);
    if denom.abs() <= 1e-12 * d1.0.hypot(d1.1) * d2.0.hypot(d2.1) {
        return None;
    }
    let t = cross(sub(p2, p1), d2) / denom;
    Some((p1.0 + d1.0 * t, p1.1 + d1.1 * t))
}

fn point_seg_dist(q: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let v = sub(b, a);
    let len_sq = dot(v, v);
    if len_sq == 0.0 {
        return dist(q, a);
    }
    let t = (dot(sub(q, a), v) / len_sq).clamp(0.0, 1.0);
    dist(q, (a.0 + v.0 * t, a.1 + v.1 * t))
}
