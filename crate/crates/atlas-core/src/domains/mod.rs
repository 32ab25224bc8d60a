//! Partition of strips into fundamental domains: arcs through branch points
//! (pre-images of the segment joining z = 1 to the critical value) cut each
//! strip into sub-strips that map conformally onto the plane minus slits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

mod eta_arc;
mod partition;
pub mod verify_domain;

pub use eta_arc::build_eta_arcs;
pub use partition::partition_strip;
pub use verify_domain::verify_fundamental;

/// How an arc ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ArcEnd {
    /// Finite endpoint where the function value reaches 1, usually a marked
    /// u-point of a whole-axis curve.
    UPoint {
        location: Complex64,
        curve: Option<String>,
    },
    /// The arc leaves the window (the value approaches 1 only at infinity).
    Unbounded { exit: Complex64 },
}

/// Pre-image component through a branch point v of the straight segment
/// from z = 1 to f(v).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaArc {
    pub branch_point: Complex64,
    /// f(v), the image endpoint of the slit segment.
    pub image_end: Complex64,
    /// Polyline through the branch point, ordered from `ends[0]` to `ends[1]`.
    pub points: Vec<Complex64>,
    pub ends: [ArcEnd; 2],
}

/// Type of a boundary piece of a fundamental domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegKind {
    /// Lower bounding (1,inf)-class curve of the strip.
    StripLower(String),
    StripUpper(String),
    WindowLeft,
    WindowRight,
    /// Arm of a whole-axis curve with image in [1, inf).
    GammaArm(String),
    /// Arc through a branch point (index into the arc list).
    EtaArc(usize),
    /// Portion of the (-inf,1)-class curve with image [0, 1] (double-zero
    /// configuration).
    GammaZeroPart(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub kind: SegKind,
    pub points: Vec<Complex64>,
}

/// Description of the image slit system of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitDescription {
    /// Slit along [1, inf) (always present) or along [0, inf) in the
    /// double-zero configuration.
    pub positive_axis_from_zero: bool,
    /// Additional straight slits from z = 1 to each listed branch value.
    pub branch_values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub strip: i64,
    pub index: usize,
    pub boundary: Vec<BoundarySegment>,
    /// Closed polygon (window-truncated) used for sampling.
    pub polygon: Vec<Complex64>,
    /// Zero of f strictly inside, when one exists; the double-zero
    /// configuration places the zero on the shared boundary instead.
    pub interior_zero: Option<Complex64>,
    pub boundary_double_zero: Option<Complex64>,
    pub image_slit: SlitDescription,
    /// True when the domain does not reach the right window edge (the
    /// embraced-curve configuration).
    pub bounded_right: bool,
}

impl SlitDescription {
    /// Distance from a point to the slit set.
    pub fn distance(&self, w: Complex64) -> f64 {
        let mut d = if self.positive_axis_from_zero {
            if w.re >= 0.0 {
                w.im.abs()
            } else {
                w.norm()
            }
        } else if w.re >= 1.0 {
            w.im.abs()
        } else {
            (w - Complex64::new(1.0, 0.0)).norm()
        };
        let one = Complex64::new(1.0, 0.0);
        for &bv in &self.branch_values {
            d = d.min(crate::geom::point_segment_distance(w, one, bv));
        }
        d
    }
}
