//! Intersections between the two pre-image families (curves of f against
//! curves of f'), refined by a 2-d Newton solve of (Im f, Im f') = 0 and
//! anchored on both curves.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::geom::segment_intersection;
use crate::trace::{LevelSet, MarkKind, MarkedPoint, Source, TracedCurve};

/// Mark every intersection of an Im f = 0 curve with an Im f' = 0 curve.
/// `map` must expose f (value channel) with two further derivatives.
pub fn mark_intersections(
    map: &(impl AnalyticMap + ?Sized),
    curves: &mut [TracedCurve],
    cfg: &Tolerances,
) -> Result<usize, TraceError> {
    let f_idx: Vec<usize> = curves
        .iter()
        .enumerate()
        .filter(|(_, c)| c.source == Source::F && matches!(c.levelset, LevelSet::ImZero))
        .map(|(i, _)| i)
        .collect();
    let g_idx: Vec<usize> = curves
        .iter()
        .enumerate()
        .filter(|(_, c)| c.source == Source::FPrime && matches!(c.levelset, LevelSet::ImZero))
        .map(|(i, _)| i)
        .collect();
    let mut found = 0usize;
    for &fi in &f_idx {
        for &gi in &g_idx {
            // Coarse bounding-box reject.
            let (fa, fb) = poly_bounds(&curves[fi].points);
            let (ga, gb) = poly_bounds(&curves[gi].points);
            if fa.re > gb.re || ga.re > fb.re || fa.im > gb.im || ga.im > fb.im {
                continue;
            }
            let mut hits: Vec<Complex64> = Vec::new();
            for i in 0..curves[fi].points.len() - 1 {
                for j in 0..curves[gi].points.len() - 1 {
                    let (a1, a2) = (curves[fi].points[i], curves[fi].points[i + 1]);
                    let (b1, b2) = (curves[gi].points[j], curves[gi].points[j + 1]);
                    if let Some(x) = segment_intersection(a1, a2, b1, b2) {
                        hits.push(x);
                    }
                }
            }
            hits.sort_by(|a, b| (a.im, a.re).partial_cmp(&(b.im, b.re)).unwrap());
            hits.dedup_by(|a, b| (*a - *b).norm() < cfg.distance);
            for x in hits {
                if let Some(s) = refine_intersection(map, x, cfg)? {
                    let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
                    attach(&mut curves[fi], s, jet.f(), jet.d1(), cfg);
                    attach(&mut curves[gi], s, jet.d1(), jet.d2(), cfg);
                    found += 1;
                }
            }
        }
    }
    Ok(found)
}

fn poly_bounds(pts: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    (lo, hi)
}

/// Newton solve (Im f, Im f') = 0 from a crossing estimate.
pub fn refine_intersection(
    map: &(impl AnalyticMap + ?Sized),
    start: Complex64,
    cfg: &Tolerances,
) -> Result<Option<Complex64>, TraceError> {
    let mut s = start;
    for _ in 0..30 {
        let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
        let g = [jet.f().im, jet.d1().im];
        if g[0].abs() < cfg.geometry * (1.0 + jet.f().norm())
            && g[1].abs() < cfg.geometry * (1.0 + jet.d1().norm())
        {
            return Ok(Some(s));
        }
        let j = [
            [jet.d1().im, jet.d1().re],
            [jet.d2().im, jet.d2().re],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-280 {
            return Ok(None);
        }
        let dx = (g[0] * j[1][1] - g[1] * j[0][1]) / det;
        let dy = (g[1] * j[0][0] - g[0] * j[1][0]) / det;
        let step = Complex64::new(dx, dy);
        s -= step;
        if (s - start).norm() > 1.0 {
            return Ok(None);
        }
        if step.norm() < cfg.newton_step * (1.0 + s.norm()) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn attach(
    curve: &mut TracedCurve,
    s: Complex64,
    value: Complex64,
    deriv: Complex64,
    cfg: &Tolerances,
) {
    let mut best = (f64::INFINITY, 0usize);
    for (i, w) in curve.points.windows(2).enumerate() {
        let d = crate::geom::point_segment_distance(s, w[0], w[1]);
        if d < best.0 {
            best = (d, i);
        }
    }
    if best.0 > 10.0 * cfg.distance {
        return;
    }
    if curve
        .anchors
        .iter()
        .any(|a| a.kind == MarkKind::IntertwiningIntersection && (a.location - s).norm() < cfg.distance)
    {
        return;
    }
    let idx = curve.insert_point(best.1, s, value, deriv);
    curve.anchors.push(MarkedPoint {
        location: s,
        kind: MarkKind::IntertwiningIntersection,
        defect: best.0,
        point_index: idx,
    });
}
