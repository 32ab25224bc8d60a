//! The on-disk document: everything one window run produced, with
//! provenance. Timestamps live only here so that document bodies stay
//! reproducible byte-for-byte.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::FundamentalDomain;
use crate::grid::GridWindow;
use crate::involution::LabReport;
use crate::trace::{StripRecord, TracedCurve};
use crate::verify::CheckReport;
use crate::zeros::{MergeTree, ZeroRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasDocument {
    pub spec: String,
    pub window: Option<GridWindow>,
    #[serde(default)]
    pub curves: Vec<TracedCurve>,
    #[serde(default)]
    pub zeros: Vec<ZeroRecord>,
    #[serde(default)]
    pub strips: Vec<StripRecord>,
    #[serde(default)]
    pub merge_trees: Vec<MergeTree>,
    #[serde(default)]
    pub domains: Vec<FundamentalDomain>,
    #[serde(default)]
    pub reports: Vec<CheckReport>,
    #[serde(default)]
    pub lab: Option<LabReport>,
    pub provenance: Provenance,
}

impl AtlasDocument {
    pub fn new(spec: impl Into<String>, tolerances: Tolerances) -> Self {
        AtlasDocument {
            spec: spec.into(),
            window: None,
            curves: Vec::new(),
            zeros: Vec::new(),
            strips: Vec::new(),
            merge_trees: Vec::new(),
            domains: Vec::new(),
            reports: Vec::new(),
            lab: None,
            provenance: Provenance {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                tolerances,
                timestamp_unix: std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            },
        }
    }

    /// Structural equality ignoring provenance timestamps.
    pub fn same_content(&self, other: &Self) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.provenance.timestamp_unix = 0;
        b.provenance.timestamp_unix = 0;
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_structurally_identical() {
        let mut doc = AtlasDocument::new("zeta", Tolerances::default());
        doc.reports.push(crate::verify::CheckReport::new(
            "demo",
            "zeta",
            crate::geom::Rect::new(0.0, 1.0, 0.0, 1.0),
        ));
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: AtlasDocument = serde_json::from_str(&text).unwrap();
        assert!(doc.same_content(&back));
        assert_eq!(doc, back);
    }
}
