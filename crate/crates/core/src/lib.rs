//! Omission detection in translations by geometric analysis of bitext maps.
//!
//! A bitext map pairs character offsets in an original text (x) with offsets
//! in its translation (y). Where the translation leaves something out, the
//! map runs nearly flat: lots of x, hardly any y. [`detector`] flags those
//! runs, either segment by segment ([`Method::Basic`]) or by reassembling
//! runs that map noise has broken into pieces ([`Method::Adomit`]).
//! [`simulator`] measures how well that works on synthetic omissions under
//! a parametric noise model.

pub mod bitext_map;
pub mod cli;
pub mod detector;
pub mod geometry;
pub mod report;
pub mod simulator;

pub use bitext_map::{parse_map, BitextMap, MapError, MapSegment};
pub use detector::{
    detect, Axis, DetectError, DetectOptions, DetectionReport, Method, OmittedSegment,
};
pub use geometry::{MapPoint, Threshold};
