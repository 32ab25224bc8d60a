//! Horizontal-tangent markers. On a level curve of Im F the tangent
//! direction is proportional to the conjugate of F', so the tangent is
//! horizontal exactly where Im F' vanishes - the point where the paired
//! derivative pre-image passes through (the intertwining contact).

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::trace::{LevelSet, MarkKind, MarkedPoint, Source, TracedCurve};

/// Find horizontal-tangent points on a real-axis pre-image component by the
/// sign changes of the discrete tangent's imaginary part, refined by a 2-d
/// Newton solve of (Im F, Im F') = 0.
pub fn find_horizontal_tangents(
    map: &(impl AnalyticMap + ?Sized),
    curve: &TracedCurve,
    cfg: &Tolerances,
) -> Result<Vec<MarkedPoint>, TraceError> {
    if curve.points.len() < 3 || !matches!(curve.levelset, LevelSet::ImZero) {
        return Ok(Vec::new());
    }
    let shift = match curve.source {
        Source::F => 0usize,
        Source::FPrime => 1,
    };
    let mut out = Vec::new();
    let tangents: Vec<f64> = curve
        .points
        .windows(2)
        .map(|w| (w[1] - w[0]).im)
        .collect();
    for i in 0..tangents.len().saturating_sub(1) {
        if tangents[i] == 0.0 && tangents[i + 1] == 0.0 {
            continue;
        }
        if (tangents[i] > 0.0) == (tangents[i + 1] > 0.0) {
            continue;
        }
        // Newton on (Im V, Im V') with V the source function.
        let mut s = curve.points[i + 1];
        let mut converged = false;
        for _ in 0..30 {
            let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
            let (v, d, dd) = match shift {
                0 => (jet.f(), jet.d1(), jet.d2()),
                _ => (jet.d1(), jet.d2(), jet.d3()),
            };
            let g = [v.im, d.im];
            if g[0].abs() < cfg.geometry * (1.0 + v.norm()) && g[1].abs() < cfg.geometry * (1.0 + d.norm())
            {
                converged = true;
                break;
            }
            let j = [[d.im, d.re], [dd.im, dd.re]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-280 {
                break;
            }
            let dx = (g[0] * j[1][1] - g[1] * j[0][1]) / det;
            let dy = (g[1] * j[0][0] - g[0] * j[1][0]) / det;
            let step = Complex64::new(dx, dy);
            s -= step;
            if step.norm() < cfg.newton_step * (1.0 + s.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            continue;
        }
        // Keep markers that stay near the discrete curve.
        let d_curve = crate::geom::point_polyline_distance(s, &curve.points);
        if d_curve > 4.0 * (curve.points[i + 1] - curve.points[i]).norm().max(cfg.distance) {
            continue;
        }
        let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
        let d = match shift {
            0 => jet.d1(),
            _ => jet.d2(),
        };
        // Defect: sine of the tangent angle against horizontal.
        let defect = if d.norm() > 0.0 {
            (d.im / d.norm()).abs()
        } else {
            0.0
        };
        out.push(MarkedPoint {
            location: s,
            kind: MarkKind::HorizontalTangent,
            defect,
            point_index: i + 1,
        });
    }
    // Deduplicate refinements that converged to the same point.
    out.sort_by(|a, b| {
        (a.location.im, a.location.re)
            .partial_cmp(&(b.location.im, b.location.re))
            .unwrap()
    });
    out.dedup_by(|a, b| (a.location - b.location).norm() < 1e-7);
    Ok(out)
}
