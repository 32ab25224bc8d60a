//! Circle pre-image census across radii: for r slightly below 1 every strip
//! holds one unbounded component of |f| = r; past r = 1 they fuse into a
//! single curve crossing every (1,inf)-class boundary curve in the window.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::TraceError;
use crate::geom::segment_intersection;
use crate::grid::{FieldGrid, GridWindow};
use crate::series::{SeriesSpec, SpecMap};
use crate::trace::{classify_components, trace_on_grid, LevelSet, Source, TracedCurve};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionReport {
    pub r: f64,
    /// Number of window-truncated ("unbounded") components.
    pub unbounded_components: usize,
    /// (strip k, count of unbounded components whose representative point
    /// lies in that strip), complete strips only.
    pub per_strip_counts: Vec<(i64, usize)>,
    /// Boundary curves crossed by the largest unbounded component.
    pub gamma_prime_crossings: usize,
    /// True when a single unbounded component crosses every boundary curve.
    pub fused: bool,
}

/// Count unbounded circle-pre-image components per radius and report the
/// fusion transition. The radii must straddle 1.
pub fn gamma_r_fusion_scan(
    spec: &SeriesSpec,
    window: GridWindow,
    r_list: &[f64],
    cfg: &Tolerances,
) -> Result<Vec<FusionReport>, TraceError> {
    if r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(TraceError::InvalidWindow(
            "radii must be strictly increasing".into(),
        ));
    }
    if !(r_list.first().copied().unwrap_or(1.0) < 1.0
        && r_list.last().copied().unwrap_or(1.0) > 1.0)
    {
        return Err(TraceError::InvalidWindow(
            "radius list must straddle r = 1".into(),
        ));
    }
    let map = SpecMap {
        spec,
        tol: cfg.eval,
        shift: 0,
    };
    let grid = FieldGrid::fill(&map, window, cfg.eval);
    // Strip structure from the real-axis pre-image (no zeros needed for the
    // boundary-curve classification).
    let mut axis_curves = trace_on_grid(&map, &grid, Source::F, LevelSet::ImZero, cfg)?;
    let mut no_zeros: Vec<crate::zeros::ZeroRecord> = Vec::new();
    let strips = classify_components(&map, &mut axis_curves, &mut no_zeros, &window, cfg)?;
    let gamma_primes: Vec<&TracedCurve> = axis_curves
        .iter()
        .filter(|c| c.is_gamma_prime())
        .collect();

    let mut out = Vec::new();
    for &r in r_list {
        let comps = trace_on_grid(&map, &grid, Source::F, LevelSet::AbsEq(r), cfg)?;
        let unbounded: Vec<&TracedCurve> = comps.iter().filter(|c| c.truncated).collect();
        let mut per_strip: Vec<(i64, usize)> = strips
            .iter()
            .filter(|s| s.complete())
            .map(|s| (s.k, 0usize))
            .collect();
        for c in &unbounded {
            let rep = c.points[c.points.len() / 2];
            let below = gamma_primes
                .iter()
                .filter(|g| super::classify::curve_below_public(g, rep))
                .count();
            // Region `below` corresponds to the strip with matching order.
            if let Some(strip) = strips.get(below) {
                if let Some(slot) = per_strip.iter_mut().find(|(k, _)| *k == strip.k) {
                    slot.1 += 1;
                }
            }
        }
        // Crossing census for the longest unbounded component.
        let mut best_crossings = 0usize;
        for c in &unbounded {
            let mut crossed = 0usize;
            for g in &gamma_primes {
                let mut hit = false;
                'outer: for i in 0..c.points.len() - 1 {
                    for j in 0..g.points.len() - 1 {
                        if segment_intersection(
                            c.points[i],
                            c.points[i + 1],
                            g.points[j],
                            g.points[j + 1],
                        )
                        .is_some()
                        {
                            hit = true;
                            break 'outer;
                        }
                    }
                }
                if hit {
                    crossed += 1;
                }
            }
            best_crossings = best_crossings.max(crossed);
        }
        let fused = unbounded.len() == 1 && best_crossings == gamma_primes.len()
            && !gamma_primes.is_empty();
        out.push(FusionReport {
            r,
            unbounded_components: unbounded.len(),
            per_strip_counts: per_strip,
            gamma_prime_crossings: best_crossings,
            fused,
        });
    }
    Ok(out)
}
