use std::fmt;

use super::inject::Omission;
use super::SimError;
use crate::detector::DetectionReport;

/// Verdict on one report entry: the true omissions it overlaps. An empty
/// list is a false alarm.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mark {
    pub truths: Vec<usize>,
}

impl Mark {
    pub fn is_true(&self) -> bool {
        !self.truths.is_empty()
    }
}

/// Verdicts in report order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pattern(pub Vec<Mark>);

impl Pattern {
    /// Build a pattern from plain labels, giving every true label its own
    /// truth.
    pub fn from_labels(labels: impl IntoIterator<Item = bool>) -> Self {
        let mut next = 0;
        Pattern(
            labels
                .into_iter()
                .map(|hit| {
                    if hit {
                        next += 1;
                        Mark {
                            truths: vec![next - 1],
                        }
                    } else {
                        Mark::default()
                    }
                })
                .collect(),
        )
    }

    pub fn marks(&self) -> &[Mark] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Pattern {
    /// `T` and `F` per entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            f.write_str(if m.is_true() { "T" } else { "F" })?;
        }
        Ok(())
    }
}

fn overlaps(a: (u64, u64), b: (u64, u64)) -> bool {
    a.0 < b.1 && b.0 < a.1
}

/// Label each report entry by whether its range along the original shares
/// at least one character with a true omission's projection. Ranges are
/// half-open.
pub fn score(report: &DetectionReport, truth: &[Omission]) -> Pattern {
    Pattern(
        report
            .segments
            .iter()
            .map(|seg| {
                let span = seg.span();
                Mark {
                    truths: truth
                        .iter()
                        .enumerate()
                        .filter(|(_, o)| overlaps(span, o.x_range()))
                        .map(|(i, _)| i)
                        .collect(),
                }
            })
            .collect(),
    )
}

/// Recall of a reviewer who stops at the first run of `patience`
/// consecutive false alarms.
///
/// Each true omission counts once however many entries hit it.
pub fn patience_recall(
    pattern: &Pattern,
    truth_count: usize,
    patience: usize,
) -> Result<f64, SimError> {
    if patience == 0 {
        return Err(SimError::ZeroPatience);
    }
    if truth_count == 0 {
        return Err(SimError::NoTruth);
    }
    let mut found = Vec::new();
    let mut misses = 0;
    for mark in pattern.marks() {
        if mark.is_true() {
            misses = 0;
            found.extend_from_slice(&mark.truths);
        } else {
            misses += 1;
            if misses == patience {
                break;
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    Ok((found.len() as f64 / truth_count as f64).min(1.0))
}

/// Fraction of report entries that hit a true omission; `None` for an
/// empty report.
pub fn precision(pattern: &Pattern) -> Option<f64> {
    if pattern.is_empty() {
        return None;
    }
    let hits = pattern.marks().iter().filter(|m| m.is_true()).count();
    Some(hits as f64 / pattern.len() as f64)
}
