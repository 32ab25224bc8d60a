//! Arc tracing through branch points: the pre-image through v (a zero of f')
//! of the straight segment from z = 1 to f(v), continued in both directions
//! until the value reaches 1 or the window edge truncates the arc.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::DomainError;
use crate::geom::Rect;
use crate::trace::{MarkKind, TracedCurve};
use crate::zeros::MergeTree;

use super::{ArcEnd, EtaArc};

/// Newton-correct s so that f(s) = target, keeping the step bounded.
fn solve_to(
    map: &(impl AnalyticMap + ?Sized),
    start: Complex64,
    target: Complex64,
    max_step: f64,
    cfg: &Tolerances,
) -> Option<Complex64> {
    let mut s = start;
    for _ in 0..24 {
        let jet = map.jet(s, cfg.eval).ok()?;
        let g = jet.f() - target;
        if g.norm() < 1e-12 * (1.0 + target.norm()) {
            return Some(s);
        }
        let d = jet.d1();
        if d.norm() < 1e-290 {
            return None;
        }
        let step = g / d;
        if step.norm() > max_step {
            return None;
        }
        s -= step;
    }
    None
}

/// Trace one branch of the arc from near v toward tau = 0 (z = 1).
/// `sign` selects the square-root branch of the launch direction.
#[allow(clippy::too_many_arguments)]
fn trace_branch(
    map: &(impl AnalyticMap + ?Sized),
    v: Complex64,
    z_v: Complex64,
    f2_v: Complex64,
    sign: f64,
    window: Rect,
    curves: &[TracedCurve],
    other_branch_points: &[Complex64],
    cfg: &Tolerances,
    step_cap: f64,
) -> Result<(Vec<Complex64>, ArcEnd), DomainError> {
    let one = Complex64::new(1.0, 0.0);
    let seg = z_v - one;
    // Launch from a small image-space offset along the segment, where the
    // local square-root model of f is accurate.
    let eps = 1e-3;
    let mut tau = 1.0 - eps;
    let offset = (-2.0 * seg * eps / f2_v).sqrt() * sign;
    let Some(mut s) = solve_to(map, v + offset, one + seg * tau, 4.0 * offset.norm(), cfg)
    else {
        return Err(DomainError::ContinuationCrossedBranchPoint(v));
    };
    let launch_zone = 6.0 * offset.norm();
    let mut pts = vec![s];
    let mut dtau = eps;
    let mut guard = 0usize;
    while tau > 0.0 && guard < 200_000 {
        guard += 1;
        let tau_next = (tau - dtau).max(0.0);
        let target = one + seg * tau_next;
        let jet = map.jet(s, cfg.eval).map_err(DomainError::Eval)?;
        let d = jet.d1();
        // Crossing a *different* branch point mid-arc invalidates the
        // continuation (the rightward tail has small |f'| legitimately, so
        // the test is proximity to known derivative zeros, not |f'| alone).
        let _ = launch_zone;
        if other_branch_points
            .iter()
            .any(|b| (s - b).norm() < 2.0 * step_cap)
        {
            return Err(DomainError::ContinuationCrossedBranchPoint(s));
        }
        let predictor = if d.norm() > 1e-290 {
            s + (target - jet.f()) / d
        } else {
            s
        };
        let allowed = 3.0 * step_cap;
        match solve_to(map, predictor, target, allowed, cfg) {
            Some(next) => {
                let hop = (next - s).norm();
                if hop > step_cap && dtau > 1e-8 {
                    dtau *= 0.5;
                    continue;
                }
                s = next;
                tau = tau_next;
                pts.push(s);
                if hop < 0.2 * step_cap {
                    dtau = (dtau * 1.7).min(0.04);
                }
                if !window.contains(s) {
                    return Ok((pts, ArcEnd::Unbounded { exit: s }));
                }
            }
            None => {
                if dtau <= 1e-8 {
                    return Err(DomainError::ContinuationCrossedBranchPoint(s));
                }
                dtau *= 0.5;
            }
        }
    }
    if guard >= 200_000 {
        return Err(DomainError::BoundaryAssemblyFailure(s));
    }
    // tau = 0: the endpoint satisfies f = 1. Attach to the curve whose
    // u-point marker sits here.
    let mut host = None;
    for c in curves {
        for a in &c.anchors {
            if a.kind == MarkKind::FEqualsOne && (a.location - s).norm() < 50.0 * cfg.distance {
                host = Some((c.id.clone(), a.location));
            }
        }
    }
    if let Some((id, loc)) = host {
        *pts.last_mut().unwrap() = loc;
        Ok((
            pts,
            ArcEnd::UPoint {
                location: loc,
                curve: Some(id),
            },
        ))
    } else {
        Ok((
            pts,
            ArcEnd::UPoint {
                location: s,
                curve: None,
            },
        ))
    }
}

/// Build the arcs for every positive-radius internal node of a strip's merge
/// tree. Radius-zero nodes (double zeros) carry no arc; the partition uses
/// curve portions there instead.
pub fn build_eta_arcs(
    map: &(impl AnalyticMap + ?Sized),
    merge_tree: &MergeTree,
    curves: &[TracedCurve],
    window: Rect,
    cfg: &Tolerances,
) -> Result<Vec<EtaArc>, DomainError> {
    // Degenerate-configuration guard: distinct branch points sharing the
    // same image modulus make the fusion order ambiguous.
    let mut radii: Vec<f64> = merge_tree
        .nodes
        .iter()
        .map(|n| n.merge_radius)
        .filter(|r| *r > 0.0)
        .collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in radii.windows(2) {
        if (w[1] - w[0]).abs() < 1e-9 * w[1].max(1e-12) {
            return Err(DomainError::DegenerateConfiguration(format!(
                "two branch points share image modulus {:.12}",
                w[1]
            )));
        }
    }
    let step_cap = (0.02 * window.width().min(window.height())).min(0.15);
    let mut arcs = Vec::new();
    for node in merge_tree.nodes.iter().filter(|n| n.merge_radius > 0.0) {
        let v = node.branch_point;
        let jet = map.jet(v, cfg.eval).map_err(DomainError::Eval)?;
        let z_v = jet.f();
        let f2 = jet.d2();
        if f2.norm() < 1e-8 {
            return Err(DomainError::DegenerateConfiguration(format!(
                "branch point at {v} is not simple (|f''| = {:.3e})",
                f2.norm()
            )));
        }
        let others: Vec<Complex64> = merge_tree
            .nodes
            .iter()
            .filter(|n| n.merge_radius > 0.0 && (n.branch_point - v).norm() > 1e-9)
            .map(|n| n.branch_point)
            .collect();
        let mut branches = Vec::new();
        for sign in [1.0, -1.0] {
            let mut attempt =
                trace_branch(map, v, z_v, f2, sign, window, curves, &others, cfg, step_cap);
            if attempt.is_err() {
                attempt = trace_branch(
                    map,
                    v,
                    z_v,
                    f2,
                    sign,
                    window,
                    curves,
                    &others,
                    cfg,
                    step_cap / 8.0,
                );
            }
            branches.push(attempt?);
        }
        let (b2, e2) = branches.pop().unwrap();
        let (b1, e1) = branches.pop().unwrap();
        // Stitch: branch1 reversed, v, branch2.
        let mut points: Vec<Complex64> = b1.into_iter().rev().collect();
        points.push(v);
        points.extend(b2);
        arcs.push(EtaArc {
            branch_point: v,
            image_end: z_v,
            points,
            ends: [e1, e2],
        });
    }
    Ok(arcs)
}
