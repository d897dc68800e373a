//! GeoJSON reading and writing.
//!
//! Reads bare geometries, Features, and FeatureCollections; Polygons and
//! MultiPolygons become records, everything else is skipped with a warning
//! count. Output follows the RFC conventions: rings closed, exterior
//! counterclockwise, holes clockwise, regardless of input orientation.

use serde_json::{json, Map, Value};

use crate::engine::PolygonRings;
use crate::geom::{self, Orientation, Point};

use super::{FeatureRecord, IoError, ParseError, ReadOutcome};

pub fn read(input: &str) -> Result<ReadOutcome, ParseError> {
    let value: Value = serde_json::from_str(input)
        .map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))?;
    let mut out = ReadOutcome::default();
    read_value(&value, &mut out)?;
    Ok(out)
}

fn read_value(value: &Value, out: &mut ReadOutcome) -> Result<(), ParseError> {
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| structural("GeoJSON object without a \"type\" member"))?;
    match kind {
        "FeatureCollection" => {
            let features = value
                .get("features")
                .and_then(Value::as_array)
                .ok_or_else(|| structural("FeatureCollection without a \"features\" array"))?;
            for feature in features {
                read_value(feature, out)?;
            }
            Ok(())
        }
        "Feature" => {
            let id = match value.get("id") {
                Some(Value::String(s)) => Some(s.clone()),
                Some(Value::Number(n)) => Some(n.to_string()),
                _ => None,
            };
            let properties = match value.get("properties") {
                Some(Value::Object(map)) => map.clone(),
                _ => Map::new(),
            };
            match value.get("geometry") {
                Some(geometry) if !geometry.is_null() => {
                    read_geometry(geometry, id, properties, out)
                }
                _ => {
                    out.skipped_non_areal += 1;
                    Ok(())
                }
            }
        }
        "Polygon" | "MultiPolygon" => read_geometry(value, None, Map::new(), out),
        "Point" | "MultiPoint" | "LineString" | "MultiLineString" | "GeometryCollection" => {
            out.skipped_non_areal += 1;
            Ok(())
        }
        other => Err(structural(format!("unknown GeoJSON type {other:?}"))),
    }
}

fn read_geometry(
    geometry: &Value,
    id: Option<String>,
    properties: Map<String, Value>,
    out: &mut ReadOutcome,
) -> Result<(), ParseError> {
    let kind = geometry
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| structural("geometry without a \"type\" member"))?;
    let coordinates = geometry
        .get("coordinates")
        .ok_or_else(|| structural(format!("{kind} geometry without coordinates")))?;
    match kind {
        "Polygon" => {
            let polygon = parse_polygon(coordinates)?;
            out.records.push(FeatureRecord {
                id,
                properties,
                geometry: Some(polygon),
            });
            Ok(())
        }
        "MultiPolygon" => {
            let parts = coordinates
                .as_array()
                .ok_or_else(|| structural("MultiPolygon coordinates must be an array"))?;
            for (i, part) in parts.iter().enumerate() {
                let polygon = parse_polygon(part)?;
                let part_id = match &id {
                    Some(base) => Some(format!("{base}/{i}")),
                    None => Some(format!("{i}")),
                };
                out.records.push(FeatureRecord {
                    id: part_id,
                    properties: properties.clone(),
                    geometry: Some(polygon),
                });
            }
            Ok(())
        }
        _ => {
            out.skipped_non_areal += 1;
            Ok(())
        }
    }
}

fn parse_polygon(coordinates: &Value) -> Result<PolygonRings, ParseError> {
    let rings = coordinates
        .as_array()
        .ok_or_else(|| structural("Polygon coordinates must be an array of rings"))?;
    if rings.is_empty() {
        return Err(structural("Polygon must have at least an exterior ring"));
    }
    let mut parsed = rings.iter().map(parse_ring).collect::<Result<Vec<_>, _>>()?;
    let exterior = parsed.remove(0);
    Ok(PolygonRings {
        exterior,
        holes: parsed,
    })
}

fn parse_ring(ring: &Value) -> Result<Vec<Point>, ParseError> {
    let positions = ring
        .as_array()
        .ok_or_else(|| structural("ring must be an array of positions"))?;
    let mut points = Vec::with_capacity(positions.len());
    for position in positions {
        let coords = position
            .as_array()
            .ok_or_else(|| structural("position must be an array"))?;
        if coords.len() < 2 {
            return Err(structural("position needs at least two coordinates"));
        }
        let x = coords[0]
            .as_f64()
            .ok_or_else(|| structural("coordinate must be a number"))?;
        let y = coords[1]
            .as_f64()
            .ok_or_else(|| structural("coordinate must be a number"))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(structural("coordinate must be finite"));
        }
        points.push(Point::new(x, y));
    }
    check_ring(&points)?;
    Ok(open_ring(points))
}

/// Records hold open cycles; the writers re-close them on output.
pub(super) fn open_ring(mut points: Vec<Point>) -> Vec<Point> {
    while points.len() > 1 && points.first() == points.last() {
        points.pop();
    }
    points
}

/// Rings must still have 3 distinct vertices once the closing point and
/// consecutive duplicates are dropped.
pub(super) fn check_ring(points: &[Point]) -> Result<(), ParseError> {
    let eps = 1e-9 * geom::bbox_diagonal(points);
    let mut cleaned: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if cleaned.last().is_some_and(|last| last.distance(p) <= eps) {
            continue;
        }
        cleaned.push(p);
    }
    while cleaned.len() > 1 && cleaned[0].distance(*cleaned.last().unwrap()) <= eps {
        cleaned.pop();
    }
    if cleaned.len() < 3 {
        return Err(structural(format!(
            "ring has {} distinct vertices, needs at least 3",
            cleaned.len()
        )));
    }
    Ok(())
}

fn structural(message: impl Into<String>) -> ParseError {
    ParseError::new(0, 0, message)
}

pub fn write(records: &[FeatureRecord], sink: &mut dyn std::io::Write) -> Result<(), IoError> {
    let features: Vec<Value> = records.iter().map(feature_value).collect();
    let doc = json!({
        "type": "FeatureCollection",
        "features": features,
    });
    serde_json::to_writer(&mut *sink, &doc).map_err(std::io::Error::other)?;
    sink.write_all(b"\n")?;
    Ok(())
}

fn feature_value(record: &FeatureRecord) -> Value {
    let mut feature = Map::new();
    feature.insert("type".into(), Value::String("Feature".into()));
    if let Some(id) = &record.id {
        feature.insert("id".into(), Value::String(id.clone()));
    }
    feature.insert("properties".into(), Value::Object(record.properties.clone()));
    let geometry = match &record.geometry {
        Some(polygon) => json!({
            "type": "Polygon",
            "coordinates": polygon_coordinates(polygon),
        }),
        None => Value::Null,
    };
    feature.insert("geometry".into(), geometry);
    Value::Object(feature)
}

fn polygon_coordinates(polygon: &PolygonRings) -> Value {
    let mut rings = Vec::with_capacity(1 + polygon.holes.len());
    rings.push(ring_coordinates(&polygon.exterior, Orientation::CounterClockwise));
    for hole in &polygon.holes {
        rings.push(ring_coordinates(hole, Orientation::Clockwise));
    }
    Value::Array(rings)
}

fn ring_coordinates(ring: &[Point], wanted: Orientation) -> Value {
    let mut points: Vec<Point> = ring.to_vec();
    let (_, orientation) = geom::area_and_orientation(&points);
    if orientation != wanted && orientation != Orientation::Degenerate {
        points.reverse();
    }
    let mut positions: Vec<Value> = points
        .iter()
        .map(|p| Value::Array(vec![json_number(p.x), json_number(p.y)]))
        .collect();
    if let Some(first) = positions.first().cloned() {
        positions.push(first); // close the ring
    }
    Value::Array(positions)
}

fn json_number(v: f64) -> Value {
    Value::Number(serde_json::Number::from_f64(v).expect("finite coordinate"))
}
