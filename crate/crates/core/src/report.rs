//! Rendering detection reports for people and for programs.

use std::io::{self, Write};

use serde::Serialize;

use crate::detector::{Axis, DetectionReport, Method};

/// One report entry as a flat record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRecord {
    pub rank: usize,
    pub axis: Axis,
    pub x_start: u64,
    pub y_start: u64,
    pub x_end: u64,
    pub y_end: u64,
    pub length: u64,
    pub angle_degrees: f64,
    pub method: Method,
    pub threshold_degrees: f64,
}

pub fn records(report: &DetectionReport) -> impl Iterator<Item = SegmentRecord> + '_ {
    report
        .segments
        .iter()
        .enumerate()
        .map(|(i, s)| SegmentRecord {
            rank: i + 1,
            axis: s.axis,
            x_start: s.start.x,
            y_start: s.start.y,
            x_end: s.end.x,
            y_end: s.end.y,
            length: s.length,
            angle_degrees: s.angle_degrees(),
            method: report.method,
            threshold_degrees: report.threshold_degrees,
        })
}

/// One line per segment: rank, axis, endpoints, length, slope angle.
pub fn write_text<W: Write + ?Sized>(out: &mut W, report: &DetectionReport) -> io::Result<()> {
    for r in records(report) {
        writeln!(
            out,
            "{:>4}  {:<11}  ({}, {}) to ({}, {})  length {}  angle {:.3}",
            r.rank, r.axis, r.x_start, r.y_start, r.x_end, r.y_end, r.length, r.angle_degrees
        )?;
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_records<W: Write + ?Sized>(out: &mut W, report: &DetectionReport) -> io::Result<()> {
    for r in records(report) {
        writeln!(out, "{}", serde_json::to_string(&r)?)?;
    }
    Ok(())
}
