//! Deterministic fixtures and generators shared by the test suites.

use polysimp::geom::Point;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
    coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

pub fn tuples(points: &[Point]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.x, p.y)).collect()
}

pub fn square() -> Vec<Point> {
    pts(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)])
}

/// Rectangular intrusion cut into the bottom wall of a square.
pub fn notch() -> Vec<Point> {
    pts(&[
        (0.0, 0.0),
        (4.0, 0.0),
        (4.0, 1.0),
        (6.0, 1.0),
        (6.0, 0.0),
        (10.0, 0.0),
        (10.0, 10.0),
        (0.0, 10.0),
    ])
}

/// Step between two parallel wall runs at different levels.
pub fn offset() -> Vec<Point> {
    pts(&[
        (0.0, 0.0),
        (4.0, 0.0),
        (4.0, 1.0),
        (10.0, 1.0),
        (10.0, 10.0),
        (0.0, 10.0),
    ])
}

/// Three equal risers; the first tread has equal-length neighbors.
pub fn staircase() -> Vec<Point> {
    pts(&[
        (0.0, 0.0),
        (2.0, 0.0),
        (2.0, 1.0),
        (4.0, 1.0),
        (4.0, 2.0),
        (6.0, 2.0),
        (6.0, 3.0),
        (0.0, 3.0),
    ])
}

/// Sliver triangle of width 0.5.
pub fn needle() -> Vec<Point> {
    pts(&[(0.0, 0.0), (10.0, 0.0), (10.0, 0.5)])
}

/// Random rectilinear "histogram" ring: a flat base with `k` columns of
/// varying width and height. Feature sizes stay on a 0.5 grid in [0.5, 5].
pub fn rectilinear_ring(rng: &mut ChaCha8Rng, target_vertices: usize) -> Vec<Point> {
    let k = (target_vertices.saturating_sub(2) / 2).max(2);
    let mut widths = Vec::with_capacity(k);
    let mut heights: Vec<f64> = Vec::with_capacity(k);
    for i in 0..k {
        widths.push(0.5 * rng.random_range(1..=10) as f64);
        loop {
            let h = 0.5 * rng.random_range(4..=14) as f64;
            if i == 0 || (h - heights[i - 1]).abs() >= 0.5 {
                heights.push(h);
                break;
            }
        }
    }
    let mut x_edges = Vec::with_capacity(k + 1);
    let mut x = 0.0;
    x_edges.push(x);
    for w in &widths {
        x += w;
        x_edges.push(x);
    }
    let total_width = x;

    let mut ring = Vec::with_capacity(2 * k + 2);
    ring.push(Point::new(0.0, 0.0));
    ring.push(Point::new(total_width, 0.0));
    ring.push(Point::new(total_width, heights[k - 1]));
    for i in (1..k).rev() {
        ring.push(Point::new(x_edges[i], heights[i]));
        ring.push(Point::new(x_edges[i], heights[i - 1]));
    }
    ring.push(Point::new(0.0, heights[0]));
    ring
}

/// Synthetic corridor: a fixed-seed histogram ring with ~100 segments and
/// feature sizes between 0.5 and 5 units.
pub fn corridor() -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0a51d0);
    rectilinear_ring(&mut rng, 100)
}

/// Jittered convex polygon around a circle (non-rectilinear variety).
pub fn jittered_polygon(rng: &mut ChaCha8Rng, sides: usize) -> Vec<Point> {
    let n = sides.max(3);
    (0..n)
        .map(|i| {
            let angle = i as f64 / n as f64 * std::f64::consts::TAU;
            let radius = rng.random_range(8.0..12.0);
            Point::new(radius * angle.cos(), radius * angle.sin())
        })
        .collect()
}

/// Fifty assorted rings: the named fixtures plus generated rectilinear and
/// jittered convex shapes.
pub fn ring_corpus() -> Vec<Vec<Point>> {
    let mut corpus = vec![
        square(),
        notch(),
        offset(),
        staircase(),
        needle(),
        corridor(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1c70235);
    for i in 0..32 {
        corpus.push(rectilinear_ring(&mut rng, 10 + 4 * i));
    }
    for i in 0..12 {
        corpus.push(jittered_polygon(&mut rng, 3 + 2 * i));
    }
    corpus
}

/// True when the two cycles contain the same vertices in the same circular
/// order (any rotation, no reflection), coordinatewise within `tol`.
pub fn cycles_equal(got: &[Point], want: &[Point], tol: f64) -> bool {
    if got.len() != want.len() {
        return false;
    }
    let n = got.len();
    (0..n).any(|shift| {
        (0..n).all(|i| {
            let g = got[(i + shift) % n];
            (g.x - want[i].x).abs() <= tol && (g.y - want[i].y).abs() <= tol
        })
    })
}

pub fn assert_cycle_eq(got: &[Point], want: &[Point], tol: f64) {
    assert!(
        cycles_equal(got, want, tol),
        "cycle mismatch:\n got: {got:?}\nwant: {want:?}"
    );
}
