//! Geometry and result I/O: GeoJSON and WKT in, GeoJSON/WKT/SVG/CSV out.

pub mod geojson;
pub mod svg;
pub mod sweep;
pub mod wkt;

use serde_json::Map;
use thiserror::Error;

use crate::engine::PolygonRings;

/// Concrete geometry formats the toolkit reads and writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    GeoJson,
    Wkt,
}

/// Input format selection; `Auto` sniffs the leading token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatChoice {
    #[default]
    Auto,
    GeoJson,
    Wkt,
}

/// Syntax or structural error with the position it was detected at.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("nothing to render")]
    NothingToRender,
}

/// One polygon with its carried-through attributes. MultiPolygon parts are
/// expanded into one record each, sharing their parent id plus a part
/// suffix. `geometry: None` marks a vanished feature on the write side.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub id: Option<String>,
    /// Opaque attributes, re-emitted unchanged.
    pub properties: Map<String, serde_json::Value>,
    /// Rings in their original orientation.
    pub geometry: Option<PolygonRings>,
}

impl FeatureRecord {
    pub fn from_polygon(polygon: PolygonRings) -> Self {
        FeatureRecord {
            id: None,
            properties: Map::new(),
            geometry: Some(polygon),
        }
    }
}

/// Parsed features plus a count of non-areal geometries that were skipped.
#[derive(Debug, Default)]
pub struct ReadOutcome {
    pub records: Vec<FeatureRecord>,
    pub skipped_non_areal: usize,
}

/// Parses a whole document in the declared or sniffed format.
pub fn read_features(input: &str, format: FormatChoice) -> Result<ReadOutcome, ParseError> {
    let detected = match format {
        FormatChoice::GeoJson => Format::GeoJson,
        FormatChoice::Wkt => Format::Wkt,
        FormatChoice::Auto => match detect_format(input) {
            Some(f) => f,
            None if input.trim().is_empty() => return Ok(ReadOutcome::default()),
            None => {
                return Err(ParseError::new(
                    1,
                    1,
                    "cannot detect input format (expected `{` for GeoJSON or a geometry keyword for WKT)",
                ))
            }
        },
    };
    match detected {
        Format::GeoJson => geojson::read(input),
        Format::Wkt => wkt::read(input),
    }
}

/// Leading-token format sniffing: `{` means GeoJSON, a letter means WKT.
pub fn detect_format(input: &str) -> Option<Format> {
    let first = input.trim_start().chars().next()?;
    if first == '{' {
        Some(Format::GeoJson)
    } else if first.is_ascii_alphabetic() {
        Some(Format::Wkt)
    } else {
        None
    }
}

/// Serializes records in the requested format. Returns the number of
/// vanished records a format could not represent (WKT has no null
/// geometry; GeoJSON emits null-geometry features instead).
pub fn write_features(
    records: &[FeatureRecord],
    format: Format,
    sink: &mut dyn std::io::Write,
) -> Result<usize, IoError> {
    match format {
        Format::GeoJson => {
            geojson::write(records, sink)?;
            Ok(0)
        }
        Format::Wkt => wkt::write(records, sink),
    }
}
