//! Iterative, feature-preserving simplification of 2D polygons.
//!
//! The engine walks a length-ordered queue of boundary segments and removes
//! short ones with edits chosen by the local corner pattern, so intrusions,
//! extrusions, offsets, and corners of building and indoor-space footprints
//! survive simplification. A Ramer-Douglas-Peucker baseline, quality
//! metrics, and GeoJSON/WKT/SVG/CSV interfaces round out the toolkit; the
//! `polysimp` binary wires them into `simplify`, `sweep`, `compare`, and
//! `render` commands.

pub mod cli;
pub mod engine;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod rdp;
pub mod ring;

pub use engine::{
    simplify, simplify_cycle, simplify_polygon, GammaPolicy, PolygonRings, SimplifyParams,
    SimplifyReport, Simplified,
};
pub use geom::{GeomError, Point, Segment};
pub use ring::{Ring, SegmentHandle};
