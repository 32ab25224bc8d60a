//! Zeros of f, f', and f'': argument-principle counting, quadtree location
//! with certificates, order determination, and per-strip merge trees.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::ZeroError;
use crate::geom::Rect;
use crate::series::SeriesSpec;

pub mod locate;
pub mod merge;
pub mod order;
pub mod winding;

pub use locate::{locate_zeros, newton_refine};
pub use merge::{build_merge_tree, MergeNode, MergeTree};
pub use order::zero_order;
pub use winding::{count_zeros, winding_circle, winding_rect};

/// Which function the record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    F,
    FPrime,
    FDoublePrime,
}

impl Target {
    pub fn shift(self) -> usize {
        match self {
            Target::F => 0,
            Target::FPrime => 1,
            Target::FDoublePrime => 2,
        }
    }
}

/// A located zero with its argument-principle certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub target: Target,
    pub order: u32,
    pub residual: f64,
    /// Strip index, filled by the classifier when strips are known.
    pub strip: Option<i64>,
    /// Ids of traced curves passing through this zero.
    pub on_curves: Vec<String>,
    pub certificate_box: Rect,
    pub certificate_count: i64,
}

/// Count zeros of the chosen target of a series inside `rect`.
pub fn count_spec_zeros(
    spec: &SeriesSpec,
    target: Target,
    rect: Rect,
    tol: f64,
) -> Result<i64, ZeroError> {
    let map = crate::series::SpecMap {
        spec,
        tol,
        shift: target.shift(),
    };
    winding::count_zeros(&map, rect, tol).map(|(n, _)| n)
}

/// Locate zeros of the chosen target of a series inside `window`.
pub fn locate_spec_zeros(
    spec: &SeriesSpec,
    target: Target,
    window: Rect,
    tol: f64,
    cfg: &Tolerances,
) -> Result<Vec<ZeroRecord>, ZeroError> {
    let map = crate::series::SpecMap {
        spec,
        tol,
        shift: target.shift(),
    };
    locate::locate_zeros(&map, target, window, tol, cfg)
}
