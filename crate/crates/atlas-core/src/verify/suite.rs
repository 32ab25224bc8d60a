//! Full pipeline orchestration: trace both families, locate zeros, classify,
//! mark intersections and tangents, and run every check in a fixed order.

use crate::config::Tolerances;
use crate::error::TraceError;
use crate::grid::{FieldGrid, GridWindow};
use crate::series::{SeriesSpec, SpecMap};
use crate::trace::{
    classify_components, color_segments, find_horizontal_tangents, mark_intersections,
    trace_on_grid, LevelSet, MarkedPoint, Source, StripRecord, TracedCurve,
};
use crate::verify::{checks, CheckReport};
use crate::zeros::{locate_spec_zeros, Target, ZeroRecord};

/// Everything the suite computed, for reuse by documents and rendering.
pub struct SuiteArtifacts {
    pub window: GridWindow,
    pub curves: Vec<TracedCurve>,
    pub zeros: Vec<ZeroRecord>,
    pub strips: Vec<StripRecord>,
    pub tangent_marks: Vec<(String, MarkedPoint)>,
    pub reports: Vec<CheckReport>,
}

/// Run tracing, zero location, classification, and all checks over a window.
/// `circle_radii` adds circle pre-images (needed by the color checks).
pub fn run_suite(
    spec: &SeriesSpec,
    window: GridWindow,
    circle_radii: &[f64],
    cfg: &Tolerances,
) -> Result<SuiteArtifacts, TraceError> {
    let map = SpecMap {
        spec,
        tol: cfg.eval,
        shift: 0,
    };
    let grid = FieldGrid::fill(&map, window, cfg.eval);
    let mut curves = trace_on_grid(&map, &grid, Source::F, LevelSet::ImZero, cfg)?;
    curves.extend(trace_on_grid(&map, &grid, Source::FPrime, LevelSet::ImZero, cfg)?);
    for &r in circle_radii {
        curves.extend(trace_on_grid(&map, &grid, Source::F, LevelSet::AbsEq(r), cfg)?);
    }

    let mut zeros = locate_spec_zeros(spec, Target::F, window.rect, cfg.eval, cfg)
        .map_err(|e| TraceError::ResolutionInsufficient(format!("zero location failed: {e}")))?;
    zeros.extend(
        locate_spec_zeros(spec, Target::FPrime, window.rect, cfg.eval, cfg).map_err(|e| {
            TraceError::ResolutionInsufficient(format!("derivative zero location failed: {e}"))
        })?,
    );

    let strips = classify_components(&map, &mut curves, &mut zeros, &window, cfg)?;
    mark_intersections(&map, &mut curves, cfg)?;
    for c in curves.iter_mut() {
        color_segments(&map, c, cfg)?;
    }
    let mut tangent_marks = Vec::new();
    for c in &curves {
        if matches!(c.levelset, LevelSet::ImZero) {
            for m in find_horizontal_tangents(&map, c, cfg)? {
                tangent_marks.push((c.id.clone(), m));
            }
        }
    }

    let rect = window.rect;
    let id = spec.id();
    let reports = vec![
        checks::check_no_zero_on_gamma_prime(id, rect, &curves, &zeros, cfg),
        checks::check_no_fprime_zero_on_gamma_j(id, rect, &curves, &zeros, cfg),
        checks::check_speiser_bound(id, rect, &strips, &zeros, cfg),
        checks::check_double_zero_geometry(id, rect, &curves, &zeros, cfg),
        checks::check_intertwining(id, rect, &map, &curves, &tangent_marks, cfg)?,
        checks::check_color_rules(id, rect, &curves, cfg),
        checks::check_strip_extends_left(id, rect, &curves, window.dx().max(window.dy())),
    ];

    Ok(SuiteArtifacts {
        window,
        curves,
        zeros,
        strips,
        tangent_marks,
        reports,
    })
}
