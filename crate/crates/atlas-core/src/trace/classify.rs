//! Curve classification, strip decomposition, and index assignment.
//!
//! Real-axis pre-image components of f fall into three classes by their
//! image: contained in (1, +inf), contained in (-inf, 1) with the value
//! approaching 1 rightward (the unique j = 0 curve per strip), or covering
//! the whole axis (crossing the value 1 at an interior u-point). Components
//! for f' classify the same way with threshold 0. Strips are the regions
//! between consecutive (1,inf)-class curves ordered vertically; the strip
//! containing s = 1 gets index 0 when the window sees it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::grid::GridWindow;
use crate::trace::{CurveClass, LevelSet, MarkKind, MarkedPoint, Source, TracedCurve};
use crate::zeros::{Target, ZeroRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripRecord {
    pub k: i64,
    /// Curve id of the lower bounding (1,inf)-class curve, None at the
    /// window's bottom partial region.
    pub lower_curve: Option<String>,
    pub upper_curve: Option<String>,
    /// Number of zeros of f inside, with multiplicity.
    pub zero_count: usize,
    pub j_indices: Vec<i64>,
    pub contains_one: bool,
    /// True when k is anchored at the strip containing s = 1; false when
    /// the window does not see s = 1 and indices are window-relative.
    pub absolute: bool,
    /// A strip missing one of its bounding curves (window truncation).
    pub partial: bool,
}

impl StripRecord {
    pub fn complete(&self) -> bool {
        !self.partial
    }
}

/// Count how many polyline segments cross the downward vertical ray from
/// `s`; odd parity means the curve passes below the point.
pub(crate) fn curve_below_public(curve: &TracedCurve, s: Complex64) -> bool {
    poly_below(&curve.points, s)
}

pub fn poly_below(points: &[Complex64], s: Complex64) -> bool {
    let mut crossings = 0usize;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.re > s.re) == (b.re > s.re) {
            continue;
        }
        let t = a.im + (b.im - a.im) * (s.re - a.re) / (b.re - a.re);
        if t < s.im {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

fn region_index(gamma_polys: &[Vec<Complex64>], s: Complex64) -> usize {
    gamma_polys.iter().filter(|c| poly_below(c, s)).count()
}

/// Attach located zeros to curves they lie on: inserts the exact zero into
/// the polyline, records the anchor, and cross-links the zero record.
fn attach_zeros(
    curves: &mut [TracedCurve],
    zeros: &mut [ZeroRecord],
    attach_dist: f64,
) {
    for z in zeros.iter_mut() {
        for c in curves.iter_mut() {
            if !matches!(c.levelset, LevelSet::ImZero) {
                continue;
            }
            let want = match (c.source, z.target) {
                (Source::F, Target::F) => true,
                (Source::FPrime, Target::FPrime) => true,
                _ => false,
            };
            if !want {
                continue;
            }
            let mut best = (f64::INFINITY, 0usize);
            for (i, w) in c.points.windows(2).enumerate() {
                let d = crate::geom::point_segment_distance(z.location, w[0], w[1]);
                if d < best.0 {
                    best = (d, i);
                }
            }
            if best.0 > attach_dist {
                continue;
            }
            let idx = c.insert_point(
                best.1,
                z.location,
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            );
            c.anchors.push(MarkedPoint {
                location: z.location,
                kind: MarkKind::ZeroOnCurve,
                defect: z.residual,
                point_index: idx,
            });
            if !z.on_curves.contains(&c.id) {
                z.on_curves.push(c.id.clone());
            }
        }
    }
}

/// Find u-points (source value = +1) and value = -1 crossings along
/// real-axis pre-images, refine them by complex Newton, and anchor them.
fn attach_unit_points(
    map: &(impl AnalyticMap + ?Sized),
    curves: &mut [TracedCurve],
    cfg: &Tolerances,
    attach_dist: f64,
) -> Result<(), TraceError> {
    for c in curves.iter_mut() {
        if !matches!(c.levelset, LevelSet::ImZero) {
            continue;
        }
        let shift = crate::trace::source_shift(c.source);
        for target in [1.0f64, -1.0] {
            let mut hits = Vec::new();
            for i in 0..c.points.len().saturating_sub(1) {
                let a = c.values[i].re - target;
                let b = c.values[i + 1].re - target;
                if a == 0.0 || (a > 0.0) != (b > 0.0) {
                    hits.push(i);
                }
            }
            let mut inserted = 0usize;
            for raw in hits {
                let i = raw + inserted;
                let mut s = 0.5 * (c.points[i] + c.points[i + 1]);
                let mut ok = false;
                for _ in 0..30 {
                    let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
                    let (v, d) = match shift {
                        0 => (jet.f(), jet.d1()),
                        _ => (jet.d1(), jet.d2()),
                    };
                    let g = v - Complex64::new(target, 0.0);
                    if g.norm() < cfg.geometry {
                        ok = true;
                        break;
                    }
                    if d.norm() < 1e-280 {
                        break;
                    }
                    let step = g / d;
                    s -= step;
                    if step.norm() < cfg.newton_step * (1.0 + s.norm()) {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let seg_dist =
                    crate::geom::point_segment_distance(s, c.points[i], c.points[i + 1]);
                if seg_dist > attach_dist {
                    continue;
                }
                let jet = map.jet(s, cfg.eval).map_err(TraceError::Eval)?;
                let (v, d) = match shift {
                    0 => (jet.f(), jet.d1()),
                    _ => (jet.d1(), jet.d2()),
                };
                let idx = c.insert_point(i, s, v, d);
                c.anchors.push(MarkedPoint {
                    location: s,
                    kind: if target > 0.0 {
                        MarkKind::FEqualsOne
                    } else {
                        MarkKind::FEqualsMinusOne
                    },
                    defect: (v - Complex64::new(target, 0.0)).norm(),
                    point_index: idx,
                });
                inserted += 1;
            }
        }
    }
    Ok(())
}

/// Shape classification without strip indices. The threshold is 1 for f
/// and 0 for f'.
fn shape_class(c: &TracedCurve, window: &GridWindow) -> CurveClass {
    let threshold = match c.source {
        Source::F => 1.0,
        Source::FPrime => 0.0,
    };
    let has_unit = c
        .anchors
        .iter()
        .any(|a| a.kind == MarkKind::FEqualsOne);
    let has_zero = c.anchors.iter().any(|a| a.kind == MarkKind::ZeroOnCurve);
    let re_min = c
        .values
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min);
    let re_max = c
        .values
        .iter()
        .map(|v| v.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let cell = window.dx().max(window.dy());
    let exits_right = [c.points.first(), c.points.last()]
        .into_iter()
        .flatten()
        .any(|p| (window.rect.sigma_max - p.re).abs() < 2.0 * cell);

    match c.source {
        Source::F => {
            if has_unit || (re_min < threshold && re_max > threshold) {
                // Crosses the value 1: maps onto the whole axis.
                CurveClass::GammaJ { k: 0, j: 0 }
            } else if re_min > threshold {
                // The (1,inf) curve runs out to sigma = +inf; a whole-axis
                // fragment trapped above 1 exits leftward only.
                if exits_right {
                    CurveClass::GammaPrime { k: 0 }
                } else {
                    CurveClass::Unknown
                }
            } else if re_max < threshold {
                // Below 1 everywhere: the j = 0 curve approaches 1 rightward;
                // a truncated whole-axis piece shows large values both ways.
                let right_val_near_one = [0usize, c.values.len() - 1]
                    .into_iter()
                    .map(|i| (c.values[i], c.points[i]))
                    .any(|(v, p)| {
                        (v - Complex64::new(1.0, 0.0)).norm() < 0.5
                            && (window.rect.sigma_max - p.re).abs() < 4.0 * cell
                    });
                if right_val_near_one && exits_right {
                    CurveClass::GammaZero { k: 0 }
                } else if has_zero {
                    // Zero present but no approach to 1 in evidence.
                    CurveClass::GammaJ { k: 0, j: 0 }
                } else {
                    CurveClass::Unknown
                }
            } else {
                CurveClass::Unknown
            }
        }
        Source::FPrime => {
            if has_zero || (re_min < threshold && re_max > threshold) {
                CurveClass::UpsilonJ { k: 0, j: 0 }
            } else if re_max < threshold {
                // Same evidence rule as the f side: the one-signed curves
                // run out to sigma = +inf (value -> 0 from one side); a
                // one-signed whole-axis fragment exits leftward only.
                if exits_right {
                    CurveClass::UpsilonPrime { k: 0 }
                } else {
                    CurveClass::Unknown
                }
            } else if re_min > threshold {
                if exits_right {
                    CurveClass::UpsilonZero { k: 0 }
                } else {
                    CurveClass::Unknown
                }
            } else {
                CurveClass::Unknown
            }
        }
    }
}

/// Classify curves, build strips, and assign k and j indices. Curves from
/// both sources (traced on the same window) are classified in place; zero
/// records get their strip index and curve memberships filled.
pub fn classify_components(
    map: &(impl AnalyticMap + ?Sized),
    curves: &mut [TracedCurve],
    zeros: &mut [ZeroRecord],
    window: &GridWindow,
    cfg: &Tolerances,
) -> Result<Vec<StripRecord>, TraceError> {
    let cell = window.dx().max(window.dy());
    let attach_dist = 1.5 * cell;
    attach_zeros(curves, zeros, attach_dist);
    attach_unit_points(map, curves, cfg, attach_dist)?;

    // Shape pass.
    for c in curves.iter_mut() {
        if matches!(c.levelset, LevelSet::ImZero) {
            c.class = shape_class(c, window);
            let n = c.values.len();
            if n >= 2 {
                c.orientation = if c.values[n - 1].re >= c.values[0].re {
                    1
                } else {
                    -1
                };
            }
        } else if let LevelSet::AbsEq(r) = c.levelset {
            c.class = CurveClass::CircleComponent {
                r,
                bounded: !c.truncated,
                fused_gamma_r: false,
            };
        }
    }

    // Strip decomposition from the (1,inf)-class curves of f.
    let mut gp_order: Vec<usize> = curves
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            matches!(c.class, CurveClass::GammaPrime { .. }) && c.source == Source::F
        })
        .map(|(i, _)| i)
        .collect();
    // Order by height at the right window edge (endpoint nearest the edge).
    let t_right = |c: &TracedCurve| {
        let first = *c.points.first().unwrap();
        let last = *c.points.last().unwrap();
        if (window.rect.sigma_max - first.re).abs() < (window.rect.sigma_max - last.re).abs() {
            first.im
        } else {
            last.im
        }
    };
    gp_order.sort_by(|&a, &b| t_right(&curves[a]).partial_cmp(&t_right(&curves[b])).unwrap());
    let gamma_polys: Vec<Vec<Complex64>> =
        gp_order.iter().map(|&i| curves[i].points.clone()).collect();

    let one = Complex64::new(1.0, 0.0);
    let window_sees_one = window.rect.contains(one);
    let r0 = if window_sees_one {
        Some(region_index(&gamma_polys, one))
    } else {
        None
    };
    let to_k = |region: usize| -> i64 {
        match r0 {
            Some(r0) => region as i64 - r0 as i64,
            None => region as i64,
        }
    };

    // Assign k to the gamma-prime curves themselves: curve at sorted
    // position r is the lower boundary of region r + 1.
    let gamma_ids: Vec<String> = gp_order.iter().map(|&i| curves[i].id.clone()).collect();
    for (r, &i) in gp_order.iter().enumerate() {
        curves[i].class = CurveClass::GammaPrime { k: to_k(r + 1) };
    }

    // Strip records for every region.
    let mut strips = Vec::new();
    for region in 0..=gamma_polys.len() {
        let lower = if region == 0 {
            None
        } else {
            Some(gamma_ids[region - 1].clone())
        };
        let upper = if region == gamma_polys.len() {
            None
        } else {
            Some(gamma_ids[region].clone())
        };
        let contains_one = r0 == Some(region);
        strips.push(StripRecord {
            k: to_k(region),
            lower_curve: lower.clone(),
            upper_curve: upper.clone(),
            zero_count: 0,
            j_indices: Vec::new(),
            contains_one,
            absolute: r0.is_some(),
            partial: lower.is_none() || upper.is_none(),
        });
    }

    // Zeros get strips; strips count their f-zeros.
    for z in zeros.iter_mut() {
        let region = region_index(&gamma_polys, z.location);
        z.strip = Some(to_k(region));
        if z.target == Target::F {
            strips[region].zero_count += z.order as usize;
        }
    }

    // k for the remaining classified curves, by a representative interior
    // point (median point of the polyline).
    let regions: Vec<usize> = curves
        .iter()
        .map(|c| region_index(&gamma_polys, c.points[c.points.len() / 2]))
        .collect();
    for (i, c) in curves.iter_mut().enumerate() {
        let k = to_k(regions[i]);
        match &mut c.class {
            CurveClass::GammaZero { k: kk }
            | CurveClass::GammaJ { k: kk, .. }
            | CurveClass::UpsilonPrime { k: kk }
            | CurveClass::UpsilonZero { k: kk }
            | CurveClass::UpsilonJ { k: kk, .. } => *kk = k,
            _ => {}
        }
    }

    // j indices: per strip, the j = 0 curve's zero anchors the ordering.
    assign_j_indices(curves, zeros, Source::F, &mut strips, r0);

    // Derivative pre-images intertwine with their f partners and straddle
    // strip boundaries, so their k comes from the nearest partner of the
    // paired class rather than from a region test.
    pair_upsilon_indices(curves);
    assign_j_indices(curves, zeros, Source::FPrime, &mut strips, r0);

    Ok(strips)
}

/// Adopt k (and j) for Upsilon-class curves from the closest Gamma-class
/// partner of the paired taxonomy class.
fn pair_upsilon_indices(curves: &mut [TracedCurve]) {
    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Prime,
        Zero,
        Jay,
    }
    let f_catalog: Vec<(Kind, i64, Vec<Complex64>)> = curves
        .iter()
        .filter(|c| c.source == Source::F)
        .filter_map(|c| match c.class {
            CurveClass::GammaPrime { k } => Some((Kind::Prime, k, c.points.clone())),
            CurveClass::GammaZero { k } => Some((Kind::Zero, k, c.points.clone())),
            CurveClass::GammaJ { k, .. } => Some((Kind::Jay, k, c.points.clone())),
            _ => None,
        })
        .collect();
    let mean_distance = |pts: &[Complex64], target: &[Complex64]| -> f64 {
        let n = pts.len();
        let samples = 12.min(n);
        let mut acc = 0.0;
        for m in 0..samples {
            let p = pts[m * (n - 1) / samples.max(1)];
            acc += crate::geom::point_polyline_distance(p, target);
        }
        acc / samples as f64
    };
    for c in curves.iter_mut() {
        if c.source != Source::FPrime {
            continue;
        }
        let want = match c.class {
            CurveClass::UpsilonPrime { .. } => Kind::Prime,
            CurveClass::UpsilonZero { .. } => Kind::Zero,
            CurveClass::UpsilonJ { .. } => Kind::Jay,
            _ => continue,
        };
        let mut best: Option<(f64, i64)> = None;
        for (kind, k, pts) in &f_catalog {
            if *kind != want {
                continue;
            }
            let d = mean_distance(&c.points, pts);
            if best.map(|(bd, _)| d < bd).unwrap_or(true) {
                best = Some((d, *k));
            }
        }
        if let Some((_, k)) = best {
            match &mut c.class {
                CurveClass::UpsilonPrime { k: kk }
                | CurveClass::UpsilonZero { k: kk }
                | CurveClass::UpsilonJ { k: kk, .. } => *kk = k,
                _ => {}
            }
        }
    }
}

fn assign_j_indices(
    curves: &mut [TracedCurve],
    zeros: &[ZeroRecord],
    source: Source,
    strips: &mut [StripRecord],
    r0: Option<usize>,
) {
    let target = match source {
        Source::F => Target::F,
        Source::FPrime => Target::FPrime,
    };
    let _ = r0;
    for strip in strips.iter_mut() {
        let k = strip.k;
        // The anchor height: the zero sitting on the j=0 curve, else the
        // median zero height in the strip.
        let zero_curve_id = curves
            .iter()
            .find(|c| {
                c.source == source
                    && matches!(
                        (source, c.class),
                        (Source::F, CurveClass::GammaZero { k: ck }) if ck == k
                    )
                    || c.source == source
                        && matches!(
                            (source, c.class),
                            (Source::FPrime, CurveClass::UpsilonZero { k: ck }) if ck == k
                        )
            })
            .map(|c| c.id.clone());
        let anchor_t = zeros
            .iter()
            .find(|z| {
                z.target == target
                    && z.strip == Some(k)
                    && zero_curve_id
                        .as_ref()
                        .map(|id| z.on_curves.contains(id))
                        .unwrap_or(false)
            })
            .map(|z| z.location.im);

        // Whole-axis curves in this strip, ordered by their zero height.
        let mut jays: Vec<(usize, f64)> = curves
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.source == source
                    && match (source, c.class) {
                        (Source::F, CurveClass::GammaJ { k: ck, .. }) => ck == k,
                        (Source::FPrime, CurveClass::UpsilonJ { k: ck, .. }) => ck == k,
                        _ => false,
                    }
            })
            .map(|(i, c)| {
                let t = c
                    .anchors
                    .iter()
                    .find(|a| a.kind == MarkKind::ZeroOnCurve)
                    .map(|a| a.location.im)
                    .unwrap_or_else(|| c.points[c.points.len() / 2].im);
                (i, t)
            })
            .collect();
        jays.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let anchor = anchor_t.unwrap_or_else(|| {
            if jays.is_empty() {
                0.0
            } else {
                jays[jays.len() / 2].1 - 1e-9
            }
        });
        let below: Vec<usize> = jays
            .iter()
            .filter(|(_, t)| *t < anchor)
            .map(|(i, _)| *i)
            .collect();
        let above: Vec<usize> = jays
            .iter()
            .filter(|(_, t)| *t >= anchor)
            .map(|(i, _)| *i)
            .collect();
        let mut j_present = Vec::new();
        for (rank, &i) in below.iter().rev().enumerate() {
            let j = -(rank as i64 + 1);
            set_j(&mut curves[i], j);
            j_present.push(j);
        }
        for (rank, &i) in above.iter().enumerate() {
            let j = rank as i64 + 1;
            set_j(&mut curves[i], j);
            j_present.push(j);
        }
        if zero_curve_id.is_some() {
            j_present.push(0);
        }
        if source == Source::F {
            j_present.sort();
            strip.j_indices = j_present;
        }
    }
}

fn set_j(curve: &mut TracedCurve, j_new: i64) {
    match &mut curve.class {
        CurveClass::GammaJ { j, .. } | CurveClass::UpsilonJ { j, .. } => *j = j_new,
        _ => {}
    }
}
