//! The four-color convention: colors 1 and 2 for the pre-images under f of
//! the positive and negative real half axes, 3 and 4 for the same under f'.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::trace::{LevelSet, MarkKind, MarkedPoint, Source, TracedCurve};

fn positive_color(source: Source) -> u8 {
    match source {
        Source::F => 1,
        Source::FPrime => 3,
    }
}

fn negative_color(source: Source) -> u8 {
    match source {
        Source::F => 2,
        Source::FPrime => 4,
    }
}

/// Assign color runs. Real-axis pre-images get maximal constant-sign runs
/// of Re(value), with boundaries at the zero anchors; circle components get
/// the sequence of real-axis crossings, each colored by the sign of
/// Re(value) at the refined crossing.
pub fn color_segments(
    map: &(impl AnalyticMap + ?Sized),
    curve: &mut TracedCurve,
    cfg: &Tolerances,
) -> Result<(), TraceError> {
    match curve.levelset {
        LevelSet::ImZero => {
            let mut runs: Vec<(usize, u8)> = Vec::new();
            let mut last_color = 0u8;
            for (i, v) in curve.values.iter().enumerate() {
                // Skip exact zero insertions; the sign resumes after them.
                if v.norm() == 0.0 {
                    continue;
                }
                let color = if v.re > 0.0 {
                    positive_color(curve.source)
                } else {
                    negative_color(curve.source)
                };
                if color != last_color {
                    runs.push((i, color));
                    last_color = color;
                }
            }
            curve.color_runs = runs;
        }
        LevelSet::AbsEq(_) => {
            // Crossings of Im(value) = 0 along the component.
            let shift = crate::trace::source_shift(curve.source);
            let mut crossings: Vec<(usize, Complex64)> = Vec::new();
            for i in 0..curve.points.len().saturating_sub(1) {
                let a = curve.values[i].im;
                let b = curve.values[i + 1].im;
                if a == 0.0 || (a > 0.0) != (b > 0.0) {
                    // Refine: solve (|v| - r, Im v) = 0 by a 2d Newton step
                    // sequence from the segment midpoint.
                    let mut s = 0.5 * (curve.points[i] + curve.points[i + 1]);
                    let mut ok = false;
                    for _ in 0..20 {
                        let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
                        let (v, d) = match shift {
                            0 => (jet.f(), jet.d1()),
                            _ => (jet.d1(), jet.d2()),
                        };
                        let LevelSet::AbsEq(r) = curve.levelset else {
                            unreachable!()
                        };
                        let g = [v.norm() - r, v.im];
                        if g[0].abs() < cfg.geometry * (1.0 + r) && g[1].abs() < cfg.geometry {
                            ok = true;
                            break;
                        }
                        // Jacobian rows: grad(|v|-r), grad(Im v).
                        let n = v.norm().max(1e-300);
                        let fbar_d = v.conj() * d;
                        let j00 = fbar_d.re / n;
                        let j01 = -fbar_d.im / n;
                        let j10 = d.im;
                        let j11 = d.re;
                        let det = j00 * j11 - j01 * j10;
                        if det.abs() < 1e-280 {
                            break;
                        }
                        let dx = (g[0] * j11 - g[1] * j01) / det;
                        let dy = (g[1] * j00 - g[0] * j10) / det;
                        s -= Complex64::new(dx, dy);
                    }
                    if ok {
                        crossings.push((i, s));
                    }
                }
            }
            let mut runs = Vec::new();
            let mut inserted = 0usize;
            for (seg, s) in crossings {
                let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
                let (v, d) = match shift {
                    0 => (jet.f(), jet.d1()),
                    _ => (jet.d1(), jet.d2()),
                };
                let idx = curve.insert_point(seg + inserted, s, v, d);
                inserted += 1;
                let color = if v.re > 0.0 {
                    positive_color(curve.source)
                } else {
                    negative_color(curve.source)
                };
                curve.anchors.push(MarkedPoint {
                    location: s,
                    kind: MarkKind::ColorCrossing,
                    defect: v.im.abs(),
                    point_index: idx,
                });
                runs.push((idx, color));
            }
            curve.color_runs = runs;
        }
    }
    Ok(())
}
