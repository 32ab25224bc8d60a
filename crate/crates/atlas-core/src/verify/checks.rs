//! The individual theorem checks.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::geom::{point_polyline_distance, Rect};
use crate::trace::{CurveClass, LevelSet, MarkKind, Source, StripRecord, TracedCurve};
use crate::verify::CheckReport;
use crate::zeros::{Target, ZeroRecord};

/// Derivative of s with respect to x at the middle node of three samples
/// with uneven spacing (3-point Lagrange formula, exact for quadratics).
fn lagrange3_derivative(
    x0: f64,
    s0: Complex64,
    x1: f64,
    s1: Complex64,
    x2: f64,
    s2: Complex64,
) -> Option<Complex64> {
    let (d01, d02, d12) = (x0 - x1, x0 - x2, x1 - x2);
    if d01.abs() < 1e-11 || d02.abs() < 1e-11 || d12.abs() < 1e-11 {
        return None;
    }
    Some(
        s0 * (d12 / (d01 * d02)) + s1 * ((d01 - d12) / (d01 * d12))
            - s2 * (d01 / (d02 * d12)),
    )
}

/// No zero of f or f' may lie on a (1,inf)-class curve of f, and no zero of
/// f' on a (-inf,0)-class curve of f'.
pub fn check_no_zero_on_gamma_prime(
    spec_id: &str,
    window: Rect,
    curves: &[TracedCurve],
    zeros: &[ZeroRecord],
    cfg: &Tolerances,
) -> CheckReport {
    let mut rep = CheckReport::new("no_zero_on_gamma_prime", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));
    let gamma_primes: Vec<&TracedCurve> = curves
        .iter()
        .filter(|c| matches!(c.class, CurveClass::GammaPrime { .. }))
        .collect();
    let upsilon_primes: Vec<&TracedCurve> = curves
        .iter()
        .filter(|c| matches!(c.class, CurveClass::UpsilonPrime { .. }))
        .collect();
    if gamma_primes.is_empty() {
        let unknowns = curves
            .iter()
            .filter(|c| c.class == CurveClass::Unknown && c.source == Source::F)
            .count();
        if unknowns > 0 {
            rep.inconclusive(format!(
                "no classified (1,inf)-class curves; {unknowns} unknown components"
            ));
            return rep;
        }
    }
    let mut margin = f64::INFINITY;
    for z in zeros {
        let against: &[&TracedCurve] = match z.target {
            Target::F | Target::FPrime => &gamma_primes,
            Target::FDoublePrime => continue,
        };
        for c in against {
            let d = point_polyline_distance(z.location, &c.points);
            margin = margin.min(d);
            if d <= cfg.distance {
                rep.fail(
                    Some(z.location),
                    Some(c.id.clone()),
                    format!("{:?}-zero at distance {d:e} from {}", z.target, c.id),
                );
            }
        }
        if z.target == Target::FPrime {
            for c in &upsilon_primes {
                let d = point_polyline_distance(z.location, &c.points);
                margin = margin.min(d);
                if d <= cfg.distance {
                    rep.fail(
                        Some(z.location),
                        Some(c.id.clone()),
                        format!("derivative zero at distance {d:e} from {}", c.id),
                    );
                }
            }
        }
    }
    rep.margin = margin;
    rep
}

/// A zero of f' within tolerance of a whole-axis or (-inf,1)-class curve of
/// f must coincide with a double zero of f.
pub fn check_no_fprime_zero_on_gamma_j(
    spec_id: &str,
    window: Rect,
    curves: &[TracedCurve],
    zeros: &[ZeroRecord],
    cfg: &Tolerances,
) -> CheckReport {
    let mut rep = CheckReport::new("no_fprime_zero_on_gamma_j", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));
    let hosts: Vec<&TracedCurve> = curves
        .iter()
        .filter(|c| {
            matches!(
                c.class,
                CurveClass::GammaJ { .. } | CurveClass::GammaZero { .. }
            )
        })
        .collect();
    let doubles: Vec<Complex64> = zeros
        .iter()
        .filter(|z| z.target == Target::F && z.order == 2)
        .map(|z| z.location)
        .collect();
    let mut margin = f64::INFINITY;
    for z in zeros.iter().filter(|z| z.target == Target::FPrime) {
        for c in &hosts {
            let d = point_polyline_distance(z.location, &c.points);
            if d <= cfg.distance {
                let exempt = doubles
                    .iter()
                    .any(|dz| (dz - z.location).norm() <= cfg.distance);
                if !exempt {
                    rep.fail(
                        Some(z.location),
                        Some(c.id.clone()),
                        format!(
                            "derivative zero on {} (distance {d:e}) without a double zero of f",
                            c.id
                        ),
                    );
                }
            } else {
                margin = margin.min(d);
            }
        }
    }
    rep.margin = margin;
    rep
}

/// Per complete strip with k != 0: the leftmost zero of f' is not left of
/// the leftmost zero of f.
pub fn check_speiser_bound(
    spec_id: &str,
    window: Rect,
    strips: &[StripRecord],
    zeros: &[ZeroRecord],
    cfg: &Tolerances,
) -> CheckReport {
    let mut rep = CheckReport::new("speiser_bound", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));
    let mut margin = f64::INFINITY;
    for strip in strips.iter().filter(|s| s.complete() && s.k != 0) {
        let f_min = zeros
            .iter()
            .filter(|z| z.target == Target::F && z.strip == Some(strip.k))
            .map(|z| z.location.re)
            .fold(f64::INFINITY, f64::min);
        let fp_min = zeros
            .iter()
            .filter(|z| z.target == Target::FPrime && z.strip == Some(strip.k))
            .map(|z| z.location.re)
            .fold(f64::INFINITY, f64::min);
        if !f_min.is_finite() || !fp_min.is_finite() {
            continue; // vacuous: empty comparison set
        }
        let slack = fp_min - (f_min - cfg.distance);
        margin = margin.min(slack);
        if slack < 0.0 {
            rep.fail(
                Some(Complex64::new(fp_min, 0.0)),
                None,
                format!(
                    "strip {}: derivative zero at Re {fp_min} left of leftmost zero Re {f_min}",
                    strip.k
                ),
            );
        }
    }
    rep.margin = margin;
    rep
}

/// At most one double zero per strip, and each double zero lies on both a
/// (-inf,1)-class curve and a neighboring whole-axis curve (j = +-1).
pub fn check_double_zero_geometry(
    spec_id: &str,
    window: Rect,
    curves: &[TracedCurve],
    zeros: &[ZeroRecord],
    cfg: &Tolerances,
) -> CheckReport {
    let mut rep = CheckReport::new("double_zero_geometry", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));
    let doubles: Vec<&ZeroRecord> = zeros
        .iter()
        .filter(|z| z.target == Target::F && z.order == 2)
        .collect();
    let mut strips_seen = std::collections::BTreeMap::new();
    for d in &doubles {
        if let Some(k) = d.strip {
            let n = strips_seen.entry(k).or_insert(0usize);
            *n += 1;
            if *n > 1 {
                rep.fail(
                    Some(d.location),
                    None,
                    format!("strip {k} carries more than one double zero"),
                );
            }
        }
        let near_zero_curve = curves.iter().any(|c| {
            matches!(c.class, CurveClass::GammaZero { .. })
                && point_polyline_distance(d.location, &c.points) <= 10.0 * cfg.distance
        });
        let near_j1_curve = curves.iter().any(|c| {
            matches!(c.class, CurveClass::GammaJ { j, .. } if j.abs() == 1)
                && point_polyline_distance(d.location, &c.points) <= 10.0 * cfg.distance
        });
        if !near_zero_curve || !near_j1_curve {
            rep.fail(
                Some(d.location),
                None,
                format!(
                    "double zero not at the required curve intersection (zero-curve: {near_zero_curve}, j=+-1 curve: {near_j1_curve})"
                ),
            );
        }
    }
    rep
}

/// Intertwining geometry: horizontal-tangent contacts, the angle identity
/// at crossings, and taxonomy-respecting pairing.
pub fn check_intertwining(
    spec_id: &str,
    window: Rect,
    map: &(impl AnalyticMap + ?Sized),
    curves: &[TracedCurve],
    tangent_marks: &[(String, crate::trace::MarkedPoint)],
    cfg: &Tolerances,
) -> Result<CheckReport, TraceError> {
    let mut rep = CheckReport::new("intertwining", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));
    rep.tolerances.push(("angle".into(), cfg.angle));
    let mut margin = f64::INFINITY;

    // (i) every horizontal tangent of an f-curve has a derivative-family
    // curve passing through it.
    for (curve_id, mark) in tangent_marks {
        let host = curves.iter().find(|c| &c.id == curve_id);
        let Some(host) = host else { continue };
        if host.source != Source::F {
            continue;
        }
        let jet = map.jet(mark.location, cfg.eval).map_err(TraceError::Eval)?;
        // Slacken near branch points, where both families turn sharply.
        let local = jet.d1().norm().max(1e-2);
        let tol_eff = cfg.distance * (1.0 + 1.0 / local) * 10.0;
        let best = curves
            .iter()
            .filter(|c| c.source == Source::FPrime && matches!(c.levelset, LevelSet::ImZero))
            .map(|c| point_polyline_distance(mark.location, &c.points))
            .fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            margin = margin.min(tol_eff - best);
            if best > tol_eff {
                rep.fail(
                    Some(mark.location),
                    Some(curve_id.clone()),
                    format!("horizontal tangent with nearest derivative curve {best:e} away"),
                );
            }
        }
    }

    // (ii) angle identity at marked intersections, with s'(x) from finite
    // differences along the traced f-curve, and (iii) pairing taxonomy.
    for c in curves.iter().filter(|c| c.source == Source::F) {
        for a in c
            .anchors
            .iter()
            .filter(|a| a.kind == MarkKind::IntertwiningIntersection)
        {
            let i = a.point_index;
            if i == 0 || i + 1 >= c.points.len() {
                continue;
            }
            // Walk outward to a baseline wide enough that point scatter
            // does not dominate the difference quotient.
            let x_i = c.values[i].re;
            let floor = 1e-3 * (1.0 + x_i.abs());
            let mut lo = i - 1;
            while lo > 0 && (c.values[lo].re - x_i).abs() < floor {
                lo -= 1;
            }
            let mut hi = i + 1;
            while hi + 1 < c.points.len() && (c.values[hi].re - x_i).abs() < floor {
                hi += 1;
            }
            let Some(s_prime) = lagrange3_derivative(
                c.values[lo].re,
                c.points[lo],
                x_i,
                c.points[i],
                c.values[hi].re,
                c.points[hi],
            ) else {
                continue;
            };
            let jet = map.jet(a.location, cfg.eval).map_err(TraceError::Eval)?;
            if jet.d1().norm() < 10.0 * cfg.branch_step_threshold {
                continue; // angle identity degenerates at branch points
            }
            let total = jet.d1().arg() + s_prime.arg();
            let wrapped = (total + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                - std::f64::consts::PI;
            margin = margin.min(cfg.angle - wrapped.abs());
            if wrapped.abs() > cfg.angle {
                rep.fail(
                    Some(a.location),
                    Some(c.id.clone()),
                    format!("angle identity off by {wrapped:e} rad"),
                );
            }
            // Pairing: the derivative-family curve through this point must
            // be of the partner class.
            // Unknown-class fragments carry no taxonomy evidence (window
            // truncation policy): skip rather than guess.
            if c.class == CurveClass::Unknown {
                continue;
            }
            let partner = curves
                .iter()
                .filter(|u| u.source == Source::FPrime && u.class != CurveClass::Unknown)
                .map(|u| (point_polyline_distance(a.location, &u.points), u))
                .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            if let Some((d, u)) = partner {
                if d <= cfg.distance * 10.0 {
                    let ok = matches!(
                        (c.class, u.class),
                        (CurveClass::GammaPrime { .. }, CurveClass::UpsilonPrime { .. })
                            | (CurveClass::GammaZero { .. }, CurveClass::UpsilonZero { .. })
                            | (CurveClass::GammaJ { .. }, CurveClass::UpsilonJ { .. })
                    );
                    if !ok {
                        rep.fail(
                            Some(a.location),
                            Some(u.id.clone()),
                            format!("pairing {:?} with {:?} breaks the taxonomy", c.class, u.class),
                        );
                    }
                }
            }
        }
    }
    rep.margin = margin;
    Ok(rep)
}

/// Color rules: circle components alternate their half-axis crossings, and
/// intersections match 1-4 / 2-3, with 2-4 permitted only where the two
/// j = 0 curves meet.
pub fn check_color_rules(
    spec_id: &str,
    window: Rect,
    curves: &[TracedCurve],
    cfg: &Tolerances,
) -> CheckReport {
    let mut rep = CheckReport::new("color_rules", spec_id, window);
    rep.tolerances.push(("distance".into(), cfg.distance));

    // Alternating rule along circle components.
    for c in curves.iter().filter(|c| matches!(c.levelset, LevelSet::AbsEq(_))) {
        for w in c.color_runs.windows(2) {
            if w[0].1 == w[1].1 {
                rep.fail(
                    Some(c.points[w[1].0]),
                    Some(c.id.clone()),
                    format!("consecutive crossings share color {}", w[0].1),
                );
            }
        }
        // Closed components must alternate cyclically (even crossing count).
        if c.closed && c.color_runs.len() >= 2 {
            let first = c.color_runs.first().unwrap();
            let last = c.color_runs.last().unwrap();
            if first.1 == last.1 && c.color_runs.len() % 2 == 1 {
                rep.fail(
                    Some(c.points[first.0]),
                    Some(c.id.clone()),
                    "odd crossing count on a closed component".into(),
                );
            }
        }
    }

    // Matching rule at marked intersections.
    for c in curves.iter().filter(|c| {
        c.source == Source::F && matches!(c.levelset, LevelSet::ImZero)
    }) {
        for a in c
            .anchors
            .iter()
            .filter(|a| a.kind == MarkKind::IntertwiningIntersection)
        {
            let f_color = color_at(c, a.point_index);
            let partner = curves
                .iter()
                .filter(|u| u.source == Source::FPrime && matches!(u.levelset, LevelSet::ImZero))
                .filter_map(|u| {
                    u.anchors
                        .iter()
                        .find(|b| {
                            b.kind == MarkKind::IntertwiningIntersection
                                && (b.location - a.location).norm() <= cfg.distance * 10.0
                        })
                        .map(|b| (u, b))
                })
                .next();
            let Some((u, b)) = partner else { continue };
            let g_color = color_at(u, b.point_index);
            let (Some(fc), Some(gc)) = (f_color, g_color) else {
                continue;
            };
            if c.class == CurveClass::Unknown || u.class == CurveClass::Unknown {
                continue;
            }
            // A crossing within tolerance of a zero sits on a color-run
            // boundary where the met color is not well defined.
            let near_zero = c
                .anchors
                .iter()
                .chain(u.anchors.iter())
                .any(|z| {
                    z.kind == MarkKind::ZeroOnCurve
                        && (z.location - a.location).norm() <= 20.0 * cfg.distance
                });
            if near_zero {
                continue;
            }
            // The (0,inf)-image curve carries color 3 identically, so the
            // j = 0 pair meets as 1-3 or 2-3; all other pairings obey the
            // sign-opposition rule 1-4 / 2-3.
            let zero_pair = matches!(
                (c.class, u.class),
                (CurveClass::GammaZero { .. }, CurveClass::UpsilonZero { .. })
            );
            let ok = matches!((fc, gc), (1, 4) | (2, 3)) || (zero_pair && matches!((fc, gc), (1, 3)));
            if !ok {
                rep.fail(
                    Some(a.location),
                    Some(format!("{}+{}", c.id, u.id)),
                    format!(
                        "colors {fc} and {gc} meet at an intersection of {:?} and {:?}",
                        c.class, u.class
                    ),
                );
            }
        }
    }
    rep
}

/// Color of the run covering point index `i`, skipping the exact anchor.
fn color_at(c: &TracedCurve, i: usize) -> Option<u8> {
    // For axis curves the color changes only at zeros; take the color of
    // the run that starts at or before i+1 (the anchor point itself has an
    // inserted sign on one side).
    let mut color = None;
    for (start, col) in &c.color_runs {
        if *start <= i + 1 {
            color = Some(*col);
        }
    }
    color
}

/// Weak falsification check: no boundary-class curve may be confined to a
/// right half plane. Curves reaching the left edge pass; curves truncated
/// at top/bottom are inconclusive; right-edge-only curves are violations.
pub fn check_strip_extends_left(
    spec_id: &str,
    window: Rect,
    curves: &[TracedCurve],
    cell: f64,
) -> CheckReport {
    let mut rep = CheckReport::new("strip_extends_left", spec_id, window);
    let mut saw_inconclusive = 0usize;
    for c in curves
        .iter()
        .filter(|c| matches!(c.class, CurveClass::GammaPrime { .. }))
    {
        let near = |p: &Complex64, which: u8| -> bool {
            match which {
                0 => (p.re - window.sigma_min).abs() < 2.0 * cell,
                1 => (p.re - window.sigma_max).abs() < 2.0 * cell,
                _ => (p.im - window.t_min).abs() < 2.0 * cell
                    || (p.im - window.t_max).abs() < 2.0 * cell,
            }
        };
        let ends = [c.points.first().unwrap(), c.points.last().unwrap()];
        let touches_left = ends.iter().any(|p| near(p, 0));
        let touches_right = ends.iter().any(|p| near(p, 1));
        let touches_tb = ends.iter().any(|p| near(p, 2));
        if touches_left {
            continue;
        }
        if touches_tb || !c.truncated {
            saw_inconclusive += 1;
            continue;
        }
        if touches_right {
            rep.fail(
                Some(*ends[0]),
                Some(c.id.clone()),
                "boundary curve confined to the right in the window".into(),
            );
        }
    }
    if saw_inconclusive > 0 {
        rep.inconclusive(format!(
            "{saw_inconclusive} boundary curves truncated without left-edge evidence"
        ));
    }
    rep
}

/// Max deviation |f'(s(x)) s'(x) - 1| along a real-axis pre-image, with
/// s'(x) from centered differences in the real image coordinate, excluding
/// `exclude_steps` polyline steps around low-|f'| (branch-point) samples.
pub fn eq4_max_deviation(
    curve: &TracedCurve,
    branch_threshold: f64,
    exclude_steps: usize,
) -> f64 {
    let n = curve.points.len();
    if n < 3 {
        return 0.0;
    }
    let slow: Vec<bool> = curve
        .derivs
        .iter()
        .map(|d| d.norm() < branch_threshold)
        .collect();
    let mut excluded = vec![false; n];
    for (i, s) in slow.iter().enumerate() {
        if *s {
            let lo = i.saturating_sub(exclude_steps);
            let hi = (i + exclude_steps).min(n - 1);
            for e in excluded.iter_mut().take(hi + 1).skip(lo) {
                *e = true;
            }
        }
    }
    let mut max_dev = 0.0f64;
    for i in 1..n - 1 {
        if excluded[i] || curve.derivs[i].norm() == 0.0 {
            continue;
        }
        let Some(s_prime) = lagrange3_derivative(
            curve.values[i - 1].re,
            curve.points[i - 1],
            curve.values[i].re,
            curve.points[i],
            curve.values[i + 1].re,
            curve.points[i + 1],
        ) else {
            continue;
        };
        let dev = (curve.derivs[i] * s_prime - Complex64::new(1.0, 0.0)).norm();
        max_dev = max_dev.max(dev);
    }
    max_dev
}
