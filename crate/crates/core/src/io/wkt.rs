//! WKT reading and writing for POLYGON and MULTIPOLYGON.
//!
//! The reader accepts one geometry per line or several separated by
//! whitespace, tolerates Z/M coordinates (extra ordinates are dropped), and
//! skips non-areal geometry types with a warning count. The writer emits one
//! geometry per line in the record's original orientation, with coordinates
//! in their shortest round-trip decimal form.

use crate::engine::PolygonRings;
use crate::geom::Point;

use super::{FeatureRecord, IoError, ParseError, ReadOutcome};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    rest: std::str::Chars<'a>,
    peeked: Option<char>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            rest: input.chars(),
            peeked: None,
            line: 1,
            column: 0,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peeked.take().or_else(|| self.rest.next())?;
        if c == '\n' {
            self.line += 1;
            self.column = 0;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        if self.peeked.is_none() {
            self.peeked = self.rest.next();
        }
        self.peeked
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, ParseError> {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let line = self.line;
        let column = self.column + 1;
        let token = match c {
            '(' => {
                self.bump();
                Token::LParen
            }
            ')' => {
                self.bump();
                Token::RParen
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    word.push(self.bump().unwrap());
                }
                Token::Ident(word.to_ascii_uppercase())
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut text = String::new();
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || "+-.eE".contains(c))
                {
                    text.push(self.bump().unwrap());
                }
                let value: f64 = text
                    .parse()
                    .map_err(|_| self.error(format!("invalid number {text:?}")))?;
                Token::Number(value)
            }
            other => return Err(self.error(format!("unexpected character {other:?}"))),
        };
        Ok(Some((token, line, column)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(Token, usize, usize)>,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(input),
            lookahead: None,
        }
    }

    fn peek(&mut self) -> Result<Option<&Token>, ParseError> {
        if self.lookahead.is_none() {
            self.lookahead = self.lexer.next_token()?;
        }
        Ok(self.lookahead.as_ref().map(|(t, _, _)| t))
    }

    fn next(&mut self) -> Result<Option<(Token, usize, usize)>, ParseError> {
        if let Some(t) = self.lookahead.take() {
            return Ok(Some(t));
        }
        self.lexer.next_token()
    }

    fn expect(&mut self, wanted: Token, what: &str) -> Result<(), ParseError> {
        match self.next()? {
            Some((t, _, _)) if t == wanted => Ok(()),
            Some((t, line, column)) => Err(ParseError::new(
                line,
                column,
                format!("expected {what}, found {t:?}"),
            )),
            None => Err(self.eof(what)),
        }
    }

    fn eof(&self, what: &str) -> ParseError {
        ParseError::new(
            self.lexer.line,
            self.lexer.column,
            format!("unexpected end of input, expected {what}"),
        )
    }

    /// Consumes an optional dimension tag (Z, M, ZM).
    fn skip_dimension_tag(&mut self) -> Result<(), ParseError> {
        if let Some(Token::Ident(word)) = self.peek()? {
            if matches!(word.as_str(), "Z" | "M" | "ZM") {
                self.next()?;
            }
        }
        Ok(())
    }

    fn is_empty_tag(&mut self) -> Result<bool, ParseError> {
        if let Some(Token::Ident(word)) = self.peek()? {
            if word == "EMPTY" {
                self.next()?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn parse_point(&mut self) -> Result<Point, ParseError> {
        let mut coords = Vec::with_capacity(2);
        while let Some(Token::Number(_)) = self.peek()? {
            let Some((Token::Number(v), ..)) = self.next()? else {
                unreachable!()
            };
            coords.push(v);
        }
        if coords.len() < 2 {
            return Err(self.eof("at least two coordinates per point"));
        }
        Ok(Point::new(coords[0], coords[1]))
    }

    fn parse_ring(&mut self) -> Result<Vec<Point>, ParseError> {
        self.expect(Token::LParen, "`(` opening a ring")?;
        let mut points = vec![self.parse_point()?];
        loop {
            match self.next()? {
                Some((Token::Comma, ..)) => points.push(self.parse_point()?),
                Some((Token::RParen, ..)) => break,
                Some((t, line, column)) => {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("expected `,` or `)` in ring, found {t:?}"),
                    ))
                }
                None => return Err(self.eof("`,` or `)` in ring")),
            }
        }
        super::geojson::check_ring(&points)?;
        Ok(super::geojson::open_ring(points))
    }

    fn parse_polygon_body(&mut self) -> Result<PolygonRings, ParseError> {
        self.expect(Token::LParen, "`(` opening a polygon")?;
        let mut rings = vec![self.parse_ring()?];
        loop {
            match self.next()? {
                Some((Token::Comma, ..)) => rings.push(self.parse_ring()?),
                Some((Token::RParen, ..)) => break,
                Some((t, line, column)) => {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("expected `,` or `)` in polygon, found {t:?}"),
                    ))
                }
                None => return Err(self.eof("`,` or `)` in polygon")),
            }
        }
        let exterior = rings.remove(0);
        Ok(PolygonRings {
            exterior,
            holes: rings,
        })
    }

    /// Skips a balanced parenthesized body (for non-areal geometries).
    fn skip_body(&mut self) -> Result<(), ParseError> {
        if self.is_empty_tag()? {
            return Ok(());
        }
        self.expect(Token::LParen, "`(` opening a geometry body")?;
        let mut depth = 1usize;
        while depth > 0 {
            match self.next()? {
                Some((Token::LParen, ..)) => depth += 1,
                Some((Token::RParen, ..)) => depth -= 1,
                Some(_) => {}
                None => return Err(self.eof("`)` closing a geometry body")),
            }
        }
        Ok(())
    }
}

pub fn read(input: &str) -> Result<ReadOutcome, ParseError> {
    let mut parser = Parser::new(input);
    let mut out = ReadOutcome::default();
    let mut ordinal = 0usize;
    loop {
        let Some((token, line, column)) = parser.next()? else {
            break;
        };
        let Token::Ident(keyword) = token else {
            return Err(ParseError::new(
                line,
                column,
                format!("expected a geometry keyword, found {token:?}"),
            ));
        };
        match keyword.as_str() {
            "POLYGON" => {
                parser.skip_dimension_tag()?;
                if parser.is_empty_tag()? {
                    out.skipped_non_areal += 1;
                } else {
                    out.records
                        .push(FeatureRecord::from_polygon(parser.parse_polygon_body()?));
                }
            }
            "MULTIPOLYGON" => {
                parser.skip_dimension_tag()?;
                if parser.is_empty_tag()? {
                    out.skipped_non_areal += 1;
                } else {
                    parser.expect(Token::LParen, "`(` opening a multipolygon")?;
                    let mut part = 0usize;
                    loop {
                        let polygon = parser.parse_polygon_body()?;
                        out.records.push(FeatureRecord {
                            id: Some(format!("{ordinal}/{part}")),
                            properties: serde_json::Map::new(),
                            geometry: Some(polygon),
                        });
                        part += 1;
                        match parser.next()? {
                            Some((Token::Comma, ..)) => {}
                            Some((Token::RParen, ..)) => break,
                            Some((t, line, column)) => {
                                return Err(ParseError::new(
                                    line,
                                    column,
                                    format!("expected `,` or `)` in multipolygon, found {t:?}"),
                                ))
                            }
                            None => return Err(parser.eof("`,` or `)` in multipolygon")),
                        }
                    }
                }
            }
            "POINT" | "LINESTRING" | "MULTIPOINT" | "MULTILINESTRING" | "GEOMETRYCOLLECTION"
            | "CIRCULARSTRING" | "TRIANGLE" => {
                parser.skip_dimension_tag()?;
                parser.skip_body()?;
                out.skipped_non_areal += 1;
            }
            other => {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("unknown geometry keyword {other:?}"),
                ))
            }
        }
        ordinal += 1;
    }
    Ok(out)
}

pub fn write(
    records: &[FeatureRecord],
    sink: &mut dyn std::io::Write,
) -> Result<usize, IoError> {
    let mut skipped = 0usize;
    for record in records {
        match &record.geometry {
            Some(polygon) => {
                writeln!(sink, "{}", polygon_wkt(polygon))?;
            }
            None => skipped += 1,
        }
    }
    Ok(skipped)
}

fn polygon_wkt(polygon: &PolygonRings) -> String {
    let mut rings = vec![ring_wkt(&polygon.exterior)];
    rings.extend(polygon.holes.iter().map(|h| ring_wkt(h)));
    format!("POLYGON ({})", rings.join(", "))
}

fn ring_wkt(ring: &[Point]) -> String {
    let mut parts: Vec<String> = ring.iter().map(|p| format!("{} {}", p.x, p.y)).collect();
    if let Some(first) = parts.first().cloned() {
        parts.push(first); // close the ring
    }
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn reads_polygon_and_drops_closing_point() {
        let out = read("POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0))").unwrap();
        assert_eq!(out.records.len(), 1);
        let ring = &out.records[0].geometry.as_ref().unwrap().exterior;
        assert_eq!(ring.len(), 4);
    }

    #[test]
    fn rejects_two_point_ring() {
        let err = read("POLYGON ((0 0, 1 1))").unwrap_err();
        assert!(err.message.contains("distinct vertices"), "{err}");
    }

    #[test]
    fn reads_multipolygon_with_part_ids() {
        let out =
            read("MULTIPOLYGON (((0 0, 1 0, 1 1, 0 0)), ((5 5, 6 5, 6 6, 5 5)))").unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[0].id.as_deref(), Some("0/0"));
        assert_eq!(out.records[1].id.as_deref(), Some("0/1"));
    }

    #[test]
    fn skips_non_areal_and_empty() {
        let out = read("POINT (1 2)\nPOLYGON EMPTY\nPOLYGON ((0 0, 1 0, 1 1, 0 0))").unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.skipped_non_areal, 2);
    }

    #[test]
    fn reads_z_coordinates_by_dropping_them() {
        let out = read("POLYGON Z ((0 0 1, 10 0 1, 10 10 1, 0 0 1))").unwrap();
        assert_eq!(out.records[0].geometry.as_ref().unwrap().exterior[1], pt(10.0, 0.0));
    }

    #[test]
    fn error_position_is_reported() {
        let err = read("POLYGON ((0 0, 1 0, 1 1,\n 0 x))").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.column >= 3, "{err:?}");
    }

    #[test]
    fn writes_square_in_expected_form() {
        let record = FeatureRecord::from_polygon(PolygonRings {
            exterior: vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)],
            holes: vec![],
        });
        let mut buf = Vec::new();
        let skipped = write(&[record], &mut buf).unwrap();
        assert_eq!(skipped, 0);
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0))\n"
        );
    }

    #[test]
    fn vanished_records_are_skipped_with_count() {
        let records = vec![FeatureRecord {
            id: None,
            properties: serde_json::Map::new(),
            geometry: None,
        }];
        let mut buf = Vec::new();
        assert_eq!(write(&records, &mut buf).unwrap(), 1);
        assert!(buf.is_empty());
    }

    #[test]
    fn round_trip_preserves_geometry() {
        let text = "POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0), (4 4, 4 6, 6 6, 6 4, 4 4))\n";
        let first = read(text).unwrap();
        let mut buf = Vec::new();
        write(&first.records, &mut buf).unwrap();
        let written = String::from_utf8(buf).unwrap();
        assert_eq!(written, text);
        let second = read(&written).unwrap();
        assert_eq!(first.records, second.records);
    }
}
