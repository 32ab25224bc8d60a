//! Level-set extraction, refinement, classification, coloring, and strip
//! decomposition for the pre-images of the real axis (Im f = 0) and of
//! circles (|f| = r) under f and f'.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::grid::{FieldGrid, GridWindow};
use crate::series::{SeriesSpec, SpecMap};

mod classify;
mod color;
mod fusion;
mod intersect;
mod marching;
mod refine;
mod tangent;

pub use classify::{classify_components, StripRecord};
pub use classify::poly_below as classify_poly_below;
pub use color::color_segments;
pub use fusion::{gamma_r_fusion_scan, FusionReport};
pub use intersect::mark_intersections;
pub use tangent::find_horizontal_tangents;

/// Which function's level set is traced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    F,
    FPrime,
}

/// Which level set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LevelSet {
    /// Pre-image of the real axis: Im f = 0.
    ImZero,
    /// Pre-image of the circle of radius r: |f| = r.
    AbsEq(f64),
}

/// Curve taxonomy. Gamma classes describe pre-images under f, Upsilon
/// classes under f'; the index k is the strip, j the position within it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurveClass {
    /// Image contained in (1, +inf).
    GammaPrime { k: i64 },
    /// The unique strip component mapped onto (-inf, 1).
    GammaZero { k: i64 },
    /// Mapped onto the whole real axis.
    GammaJ { k: i64, j: i64 },
    /// Image contained in (-inf, 0) under f'.
    UpsilonPrime { k: i64 },
    /// Mapped onto (0, +inf) under f'.
    UpsilonZero { k: i64 },
    /// Mapped onto the whole real axis under f'.
    UpsilonJ { k: i64, j: i64 },
    CircleComponent {
        r: f64,
        bounded: bool,
        fused_gamma_r: bool,
    },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkKind {
    /// u-point: the source function equals 1.
    FEqualsOne,
    FEqualsMinusOne,
    ZeroOnCurve,
    HorizontalTangent,
    IntertwiningIntersection,
    /// Crossing of the real-axis pre-image by a circle component, colored by
    /// the sign of Re f there.
    ColorCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub location: Complex64,
    pub kind: MarkKind,
    /// Residual of the defining equation at the refined point.
    pub defect: f64,
    /// Index into the host curve's point list.
    pub point_index: usize,
}

/// One refined polyline component of a level set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub id: String,
    pub source: Source,
    pub levelset: LevelSet,
    /// Refined points in walk order.
    pub points: Vec<Complex64>,
    /// Source-function values at the points (not serialized).
    #[serde(skip)]
    pub values: Vec<Complex64>,
    /// |f'| (of the source function's derivative) at the points.
    #[serde(skip)]
    pub derivs: Vec<Complex64>,
    pub class: CurveClass,
    /// +1 when the points run in the direction of increasing image value
    /// along real-axis pre-images; -1 otherwise; 0 when not applicable.
    pub orientation: i8,
    /// (start point index, color) runs for real-axis pre-images;
    /// (crossing point index, color) sequences for circle components.
    pub color_runs: Vec<(usize, u8)>,
    pub anchors: Vec<MarkedPoint>,
    /// True when the component exits the window.
    pub truncated: bool,
    pub closed: bool,
}

impl TracedCurve {
    pub fn is_gamma_prime(&self) -> bool {
        matches!(self.class, CurveClass::GammaPrime { .. })
    }

    pub fn strip_index(&self) -> Option<i64> {
        match self.class {
            CurveClass::GammaPrime { k }
            | CurveClass::GammaZero { k }
            | CurveClass::GammaJ { k, .. }
            | CurveClass::UpsilonPrime { k }
            | CurveClass::UpsilonZero { k }
            | CurveClass::UpsilonJ { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Insert a refined point at `location` on segment `seg` (between point
    /// seg and seg+1), keeping anchors' indices consistent. Returns the
    /// index of the inserted point.
    pub(crate) fn insert_point(
        &mut self,
        seg: usize,
        location: Complex64,
        value: Complex64,
        deriv: Complex64,
    ) -> usize {
        let idx = seg + 1;
        self.points.insert(idx, location);
        self.values.insert(idx, value);
        self.derivs.insert(idx, deriv);
        for a in &mut self.anchors {
            if a.point_index >= idx {
                a.point_index += 1;
            }
        }
        for run in &mut self.color_runs {
            if run.0 >= idx {
                run.0 += 1;
            }
        }
        idx
    }
}

/// Trace the requested level set of a series over a window. `step` controls
/// the cell size of the extraction grid (clamped to at least 64 cells per
/// axis); points are refined to the geometry tolerance.
pub fn trace_level_set(
    spec: &SeriesSpec,
    source: Source,
    levelset: LevelSet,
    window: GridWindow,
    cfg: &Tolerances,
) -> Result<Vec<TracedCurve>, TraceError> {
    if let LevelSet::AbsEq(r) = levelset {
        if !(r > 0.0) {
            return Err(TraceError::InvalidWindow(format!(
                "circle radius must be positive, got {r}"
            )));
        }
    }
    let map = SpecMap {
        spec,
        tol: cfg.eval,
        shift: 0,
    };
    let grid = FieldGrid::fill(&map, window, cfg.eval);
    trace_on_grid(&map, &grid, source, levelset, cfg)
}

/// Trace using an existing grid (shared between several level sets).
pub fn trace_on_grid(
    map: &(impl AnalyticMap + ?Sized),
    grid: &FieldGrid,
    source: Source,
    levelset: LevelSet,
    cfg: &Tolerances,
) -> Result<Vec<TracedCurve>, TraceError> {
    let chains = marching::extract(grid, source, levelset)?;
    let mut curves = Vec::new();
    for (n, chain) in chains.into_iter().enumerate() {
        let id = format!(
            "{}:{}:{}",
            match source {
                Source::F => "f",
                Source::FPrime => "f1",
            },
            match levelset {
                LevelSet::ImZero => "im0".to_string(),
                LevelSet::AbsEq(r) => format!("abs{r}"),
            },
            n
        );
        let mut refined =
            refine::refine_chain(map, grid, source, levelset, chain, cfg)?;
        for c in &mut refined {
            c.id = if refined_suffix_needed(&c.id) {
                format!("{id}{}", c.id)
            } else {
                id.clone()
            };
        }
        curves.extend(refined);
    }
    // Deterministic ids even after chain splitting.
    for (n, c) in curves.iter_mut().enumerate() {
        let prefix = c.id.split(':').take(2).collect::<Vec<_>>().join(":");
        c.id = format!("{prefix}:{n}");
    }
    Ok(curves)
}

fn refined_suffix_needed(id: &str) -> bool {
    !id.is_empty()
}

/// Convenience wrapper producing the spec-facing map for a source.
pub(crate) fn source_shift(source: Source) -> usize {
    match source {
        Source::F => 0,
        Source::FPrime => 1,
    }
}
