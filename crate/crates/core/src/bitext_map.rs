//! Bitext maps: monotone chains of corresponding character offsets.
//!
//! Map files hold one point per line as `X<TAB>Y` decimal offsets. Blank
//! lines and lines starting with `#` are skipped; CRLF endings are accepted.

use std::io::BufRead;

use thiserror::Error;

use crate::geometry::MapPoint;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{}y decreases from {first} to {second}", at_lines(*.lines))]
    NonMonotone {
        first: MapPoint,
        second: MapPoint,
        lines: Option<(usize, usize)>,
    },
    #[error("{}two points share abscissa {}: {first} and {second}", at_lines(*.lines), .first.x)]
    SharedAbscissa {
        first: MapPoint,
        second: MapPoint,
        lines: Option<(usize, usize)>,
    },
    #[error("{}point {point} lies outside the {width}x{height} bitext space", at_line(*.line))]
    OutOfRange {
        point: MapPoint,
        width: u64,
        height: u64,
        line: Option<usize>,
    },
    #[error("bitext space must have positive width and height, got {width}x{height}")]
    EmptySpace { width: u64, height: u64 },
    #[error("no points")]
    NoPoints,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_lines(lines: Option<(usize, usize)>) -> String {
    lines.map_or_else(String::new, |(a, b)| format!("lines {a} and {b}: "))
}

fn at_line(line: Option<usize>) -> String {
    line.map_or_else(String::new, |l| format!("line {l}: "))
}

/// A point read from a map file together with its 1-based line number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParsedPoint {
    pub point: MapPoint,
    pub line: usize,
}

/// Read `X<TAB>Y` lines without validating them against a bitext space.
pub fn parse_points<R: BufRead>(reader: R) -> Result<Vec<ParsedPoint>, MapError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 2 {
            return Err(MapError::Parse {
                line: line_no,
                reason: format!("expected 2 tab-separated fields, found {}", fields.len()),
            });
        }
        let parse = |field: &str, name: &str| {
            field.trim().parse::<u64>().map_err(|_| MapError::Parse {
                line: line_no,
                reason: format!("{name} offset {field:?} is not a non-negative integer"),
            })
        };
        let x = parse(fields[0], "x")?;
        let y = parse(fields[1], "y")?;
        out.push(ParsedPoint {
            point: MapPoint::new(x, y),
            line: line_no,
        });
    }
    Ok(out)
}

/// Parse and validate a map file for a bitext space of the given size.
pub fn parse_map<R: BufRead>(reader: R, width: u64, height: u64) -> Result<BitextMap, MapError> {
    let parsed = parse_points(reader)?;
    BitextMap::from_parsed(parsed, width, height)
}

/// One piece of a map between two adjacent points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapSegment {
    pub start: MapPoint,
    pub end: MapPoint,
}

/// A validated bitext map.
///
/// Points are strictly increasing in x and never decrease in y. Horizontal
/// runs are legal; noisy mappers produce them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitextMap {
    points: Vec<MapPoint>,
    width: u64,
    height: u64,
    dropped_points: usize,
}

impl BitextMap {
    /// Sort, drop exact duplicates, and validate.
    pub fn new(points: Vec<MapPoint>, width: u64, height: u64) -> Result<Self, MapError> {
        let entries = points.into_iter().map(|point| (point, None)).collect();
        Self::normalize(entries, width, height)
    }

    pub fn from_parsed(
        parsed: Vec<ParsedPoint>,
        width: u64,
        height: u64,
    ) -> Result<Self, MapError> {
        let entries = parsed
            .into_iter()
            .map(|p| (p.point, Some(p.line)))
            .collect();
        Self::normalize(entries, width, height)
    }

    /// Build a map whose space is the bounding box of its points.
    pub fn spanning(points: Vec<MapPoint>) -> Result<Self, MapError> {
        let (w, h) = bounds(points.iter().copied());
        Self::new(points, w, h)
    }

    fn normalize(
        mut entries: Vec<(MapPoint, Option<usize>)>,
        width: u64,
        height: u64,
    ) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::EmptySpace { width, height });
        }
        if entries.is_empty() {
            return Err(MapError::NoPoints);
        }
        entries.sort_by_key(|&(p, line)| (p, line));
        entries.dedup_by_key(|&mut (p, _)| p);

        for &(point, line) in &entries {
            if point.x > width || point.y > height {
                return Err(MapError::OutOfRange {
                    point,
                    width,
                    height,
                    line,
                });
            }
        }
        for pair in entries.windows(2) {
            let ((first, l1), (second, l2)) = (pair[0], pair[1]);
            let lines = l1.zip(l2);
            if first.x == second.x {
                return Err(MapError::SharedAbscissa {
                    first,
                    second,
                    lines,
                });
            }
            if second.y < first.y {
                return Err(MapError::NonMonotone {
                    first,
                    second,
                    lines,
                });
            }
        }
        Ok(Self {
            points: entries.into_iter().map(|(p, _)| p).collect(),
            width,
            height,
            dropped_points: 0,
        })
    }

    pub fn points(&self) -> &[MapPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    /// Points discarded by the last transposition because they shared an
    /// ordinate with a point further right.
    pub fn dropped_points(&self) -> usize {
        self.dropped_points
    }

    /// Adjacent-point segments in x order. Empty for a single-point map.
    pub fn segments(&self) -> impl ExactSizeIterator<Item = MapSegment> + '_ {
        self.points.windows(2).map(|w| MapSegment {
            start: w[0],
            end: w[1],
        })
    }

    /// Swap the axes.
    ///
    /// A horizontal run turns into several points sharing an abscissa. Of
    /// those only the highest survives, which keeps the outer envelope of
    /// the run; the rest are counted in [`dropped_points`](Self::dropped_points).
    pub fn transpose(&self) -> BitextMap {
        let mut points: Vec<MapPoint> = Vec::with_capacity(self.points.len());
        let mut dropped = 0;
        for p in self.points.iter().map(|p| p.transposed()) {
            match points.last_mut() {
                // source x is strictly increasing, so the later point is higher
                Some(last) if last.x == p.x => {
                    *last = p;
                    dropped += 1;
                }
                _ => points.push(p),
            }
        }
        BitextMap {
            points,
            width: self.height,
            height: self.width,
            dropped_points: dropped,
        }
    }

    /// Piecewise-linear ordinate at `x`, extrapolating from the first or last
    /// segment outside the map's extent.
    pub fn interpolate(&self, x: f64) -> f64 {
        let pts = &self.points;
        if pts.len() == 1 {
            return pts[0].y as f64;
        }
        // index of the first point strictly right of x
        let right = pts.partition_point(|p| (p.x as f64) <= x);
        if right > 0 && pts[right - 1].x as f64 == x {
            return pts[right - 1].y as f64;
        }
        let hi = right.clamp(1, pts.len() - 1);
        let (a, b) = (pts[hi - 1], pts[hi]);
        let slope = (b.y as f64 - a.y as f64) / (b.x as f64 - a.x as f64);
        a.y as f64 + slope * (x - a.x as f64)
    }

    /// Add the space's corners `(0, 0)` and `(width, height)` where they are
    /// missing. A corner is skipped when another point already occupies its
    /// abscissa.
    pub fn with_corners(&self) -> BitextMap {
        let mut points = self.points.clone();
        if points.first().is_some_and(|p| p.x > 0) {
            points.insert(0, MapPoint::new(0, 0));
        }
        if points.last().is_some_and(|p| p.x < self.width) {
            points.push(MapPoint::new(self.width, self.height));
        }
        BitextMap {
            points,
            ..self.clone()
        }
    }
}

/// Largest x and y over a point set, each at least 1.
pub fn bounds(points: impl Iterator<Item = MapPoint>) -> (u64, u64) {
    points.fold((1, 1), |(w, h), p| (w.max(p.x), h.max(p.y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: u64, y: u64) -> MapPoint {
        MapPoint::new(x, y)
    }

    fn parse(text: &str, w: u64, h: u64) -> Result<BitextMap, MapError> {
        parse_map(text.as_bytes(), w, h)
    }

    #[test]
    fn parses_two_points() {
        let m = parse("0\t0\n10\t11\n", 10, 11).unwrap();
        assert_eq!(m.points(), &[p(0, 0), p(10, 11)]);
    }

    #[test]
    fn sorts_input_and_skips_comments() {
        let m = parse("# header\n5\t9\r\n\n0\t0\r\n5\t9\n", 10, 10).unwrap();
        assert_eq!(m.points(), &[p(0, 0), p(5, 9)]);
    }

    #[test]
    fn rejects_decreasing_y_with_both_points_named() {
        let err = parse("0\t5\n3\t2\n", 10, 10).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(
            err,
            MapError::NonMonotone {
                lines: Some((1, 2)),
                ..
            }
        ));
        assert!(msg.contains("(0, 5)") && msg.contains("(3, 2)"), "{msg}");
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in ["1\t2\t3\n", "1 2\n", "a\t2\n", "-1\t2\n", "1.5\t2\n"] {
            let err = parse(&format!("0\t0\n{bad}"), 10, 10).unwrap_err();
            assert!(
                matches!(err, MapError::Parse { line: 2, .. }),
                "{bad:?}: {err}"
            );
        }
    }

    #[test]
    fn rejects_points_outside_space() {
        let err = parse("0\t0\n11\t3\n", 10, 10).unwrap_err();
        assert!(matches!(err, MapError::OutOfRange { line: Some(2), .. }));
    }

    #[test]
    fn rejects_shared_abscissa_and_empty_input() {
        assert!(matches!(
            parse("4\t1\n4\t2\n", 10, 10),
            Err(MapError::SharedAbscissa { .. })
        ));
        assert!(matches!(
            parse("# nothing\n\n", 10, 10),
            Err(MapError::NoPoints)
        ));
        assert!(matches!(
            parse("0\t0\n", 0, 10),
            Err(MapError::EmptySpace { .. })
        ));
    }

    #[test]
    fn segments_chain() {
        let m = BitextMap::new(vec![p(0, 0), p(3, 4)], 10, 10).unwrap();
        assert_eq!(m.segments().len(), 1);
        let single = BitextMap::new(vec![p(3, 4)], 10, 10).unwrap();
        assert_eq!(single.segments().len(), 0);

        let m = BitextMap::new((0..20).map(|i| p(i * 5, i * 3)).collect(), 100, 100).unwrap();
        let segs: Vec<_> = m.segments().collect();
        assert_eq!(segs.len(), 19);
        assert!(segs.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn transpose_simple_and_with_horizontal_run() {
        let m = BitextMap::new(vec![p(0, 0), p(5, 3)], 5, 3).unwrap();
        let t = m.transpose();
        assert_eq!(t.points(), &[p(0, 0), p(3, 5)]);
        assert_eq!((t.width(), t.height()), (3, 5));

        let m = BitextMap::new(vec![p(0, 0), p(4, 2), p(9, 2), p(12, 6)], 12, 6).unwrap();
        let t = m.transpose();
        assert_eq!(t.points(), &[p(0, 0), p(2, 9), p(6, 12)]);
        assert_eq!(t.dropped_points(), 1);
    }

    #[test]
    fn interpolation() {
        let m = BitextMap::new(vec![p(0, 0), p(10, 20)], 10, 20).unwrap();
        assert_eq!(m.interpolate(5.0), 10.0);
        assert_eq!(m.interpolate(10.0), 20.0);

        let m = BitextMap::new(vec![p(2, 3), p(4, 6), p(9, 7)], 10, 10).unwrap();
        assert_eq!(m.interpolate(0.0), 0.0);
        assert_eq!(m.interpolate(4.0), 6.0);
        assert!((m.interpolate(10.0) - 7.2).abs() < 1e-12);
    }

    #[test]
    fn corners_are_added_only_where_free() {
        let m = BitextMap::new(vec![p(3, 4), p(6, 8)], 10, 12).unwrap();
        assert_eq!(
            m.with_corners().points(),
            &[p(0, 0), p(3, 4), p(6, 8), p(10, 12)]
        );
        let m = BitextMap::new(vec![p(0, 4), p(10, 8)], 10, 12).unwrap();
        assert_eq!(m.with_corners().points(), m.points());
    }

    fn monotone_points() -> impl Strategy<Value = Vec<MapPoint>> {
        prop::collection::vec((1u64..500, 0u64..500), 1..80).prop_map(|steps| {
            let (mut x, mut y) = (0, 0);
            steps
                .into_iter()
                .map(|(dx, dy)| {
                    x += dx;
                    y += dy;
                    p(x, y)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn segments_always_advance(points in monotone_points()) {
            let m = BitextMap::spanning(points).unwrap();
            let mut dx_total = 0;
            for s in m.segments() {
                prop_assert!(s.end.x > s.start.x);
                prop_assert!(s.end.y >= s.start.y);
                dx_total += s.end.x - s.start.x;
            }
            let pts = m.points();
            prop_assert_eq!(dx_total, pts[pts.len() - 1].x - pts[0].x);
        }

        #[test]
        fn interpolate_is_monotone(points in monotone_points(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let m = BitextMap::spanning(points).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let w = m.width() as f64;
            prop_assert!(m.interpolate(lo * w) <= m.interpolate(hi * w) + 1e-9);
        }

        #[test]
        fn strict_maps_transpose_back(steps in prop::collection::vec((1u64..500, 1u64..500), 1..80)) {
            let (mut x, mut y) = (0, 0);
            let points = steps.into_iter().map(|(dx, dy)| { x += dx; y += dy; p(x, y) }).collect();
            let m = BitextMap::spanning(points).unwrap();
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
