//! Orthogonal Newton correction of extracted chains onto the exact level
//! set, step densification near branch points, and defect bookkeeping.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::TraceError;
use crate::grid::FieldGrid;
use crate::trace::marching::Crossing;
use crate::trace::{CurveClass, LevelSet, Source, TracedCurve};

/// Level function g, its gradient, and the source value/derivatives at s.
struct Probe {
    g: f64,
    grad: Complex64,
    value: Complex64,
    deriv: Complex64,
    deriv2: Complex64,
}

fn probe(
    map: &(impl AnalyticMap + ?Sized),
    source: Source,
    levelset: LevelSet,
    s: Complex64,
    tol: f64,
) -> Result<Probe, TraceError> {
    let jet = map.jet(s, tol)?;
    let (v, d, d2) = match source {
        Source::F => (jet.f(), jet.d1(), jet.d2()),
        Source::FPrime => (jet.d1(), jet.d2(), jet.d3()),
    };
    let (g, grad) = match levelset {
        // grad(Im v) = (Im v', Re v') as a real 2-vector, kept complex.
        LevelSet::ImZero => (v.im, Complex64::new(d.im, d.re)),
        LevelSet::AbsEq(r) => {
            let n = v.norm().max(1e-300);
            let fbar_d = v.conj() * d;
            (v.norm() - r, Complex64::new(fbar_d.re / n, -fbar_d.im / n))
        }
    };
    Ok(Probe {
        g,
        grad,
        value: v,
        deriv: d,
        deriv2: d2,
    })
}

/// Newton-correct a point onto the level set. Returns the refined point and
/// its probe, or None when the correction does not converge.
fn correct(
    map: &(impl AnalyticMap + ?Sized),
    source: Source,
    levelset: LevelSet,
    start: Complex64,
    cfg: &Tolerances,
) -> Option<(Complex64, Probe)> {
    let mut s = start;
    let tol_eval = cfg.eval;
    // Converge to the float noise floor, not merely the geometry tolerance:
    // downstream finite differences along the curve amplify any residual
    // normal scatter by 1/|f'| over short baselines.
    for _ in 0..16 {
        let p = probe(map, source, levelset, s, tol_eval).ok()?;
        let scale = match levelset {
            LevelSet::ImZero => 1.0 + p.value.norm(),
            LevelSet::AbsEq(r) => 1.0 + r,
        };
        if p.g.abs() <= 1e-13 * scale {
            return Some((s, p));
        }
        let g2 = p.grad.norm_sqr();
        if g2 < 1e-280 {
            return (p.g.abs() <= cfg.geometry * scale).then_some((s, p));
        }
        // s <- s - g * grad / |grad|^2, as real 2-vectors.
        let step = Complex64::new(p.grad.re, p.grad.im) * (p.g / g2);
        s -= step;
        if step.norm() > 1.0 {
            return None;
        }
        if step.norm() < 1e-15 * (1.0 + s.norm()) {
            let p = probe(map, source, levelset, s, tol_eval).ok()?;
            return Some((s, p));
        }
    }
    let p = probe(map, source, levelset, s, tol_eval).ok()?;
    let scale = match levelset {
        LevelSet::ImZero => 1.0 + p.value.norm(),
        LevelSet::AbsEq(r) => 1.0 + r,
    };
    (p.g.abs() <= cfg.geometry * scale).then_some((s, p))
}

/// Refine one extracted chain. Points that fail refinement split the chain;
/// segments whose endpoints see |derivative| below the branch threshold are
/// densified by chord bisection (step shrink near branch points).
pub(crate) fn refine_chain(
    map: &(impl AnalyticMap + ?Sized),
    grid: &FieldGrid,
    source: Source,
    levelset: LevelSet,
    chain: Vec<Crossing>,
    cfg: &Tolerances,
) -> Result<Vec<TracedCurve>, TraceError> {
    let w = grid.window;
    let closed_input = chain.len() > 3
        && (chain.first().unwrap().at - chain.last().unwrap().at).norm() < 1e-12;

    // Refine every crossing; None marks a failed point (chain split there).
    type Pt = (Complex64, Complex64, Complex64, Complex64);
    let mut refined: Vec<Option<Pt>> = Vec::new();
    for c in &chain {
        match correct(map, source, levelset, c.at, cfg) {
            Some((s, p)) => refined.push(Some((s, p.value, p.deriv, p.deriv2))),
            None => refined.push(None),
        }
    }

    // Split into runs of refined points.
    let mut pieces: Vec<Vec<Pt>> = Vec::new();
    let mut cur = Vec::new();
    for r in refined {
        match r {
            Some(t) => cur.push(t),
            None => {
                if cur.len() >= 2 {
                    pieces.push(std::mem::take(&mut cur));
                } else {
                    cur.clear();
                }
            }
        }
    }
    if cur.len() >= 2 {
        pieces.push(cur);
    }

    let cell = w.dx().min(w.dy());
    let mut out = Vec::new();
    for (pn, mut piece) in pieces.into_iter().enumerate() {
        // Densify: near branch points (low |f'|) the step shrinks to
        // cell/8; elsewhere the local spacing is held to a curvature budget
        // so that finite-difference reparameterizations downstream stay
        // second-order accurate.
        let mut guard = 0usize;
        let mut i = 0;
        while i + 1 < piece.len() && guard < 40000 {
            let (a, _, da, dda) = piece[i];
            let (b, _, db, ddb) = piece[i + 1];
            let d_min = da.norm().min(db.norm());
            let len = (b - a).norm();
            let need_split = if d_min < 4.0 * cfg.branch_step_threshold {
                // Graded shrink through the low-|f'| zone: the inverse
                // parameterization conditions like 1/|f'|^3 there.
                let frac = (d_min / (4.0 * cfg.branch_step_threshold)).max(1.0 / 8.0);
                len > (cell / 8.0 * frac).max(cell / 64.0)
            } else {
                // Hold (|f''/f'| len)^2 under budget so finite-difference
                // reparameterizations downstream stay second-order clean.
                let kappa = (dda.norm() / da.norm().max(1e-300))
                    .max(ddb.norm() / db.norm().max(1e-300));
                len > cell / 64.0 && (kappa * len) * (kappa * len) > 5e-5
            };
            if need_split {
                if let Some((m, p)) = correct(map, source, levelset, 0.5 * (a + b), cfg) {
                    piece.insert(i + 1, (m, p.value, p.deriv, p.deriv2));
                    guard += 1;
                    continue;
                }
            }
            i += 1;
        }

        let points: Vec<Complex64> = piece.iter().map(|t| t.0).collect();
        let values: Vec<Complex64> = piece.iter().map(|t| t.1).collect();
        let derivs: Vec<Complex64> = piece.iter().map(|t| t.2).collect();
        let closed = closed_input
            && out.is_empty()
            && (points.first().unwrap() - points.last().unwrap()).norm() < cell;
        let near_edge = |s: &Complex64| w.rect.boundary_distance(*s) < 1.5 * cell;
        let truncated = !closed
            && (near_edge(points.first().unwrap()) || near_edge(points.last().unwrap()));
        out.push(TracedCurve {
            id: format!(":{pn}"),
            source,
            levelset,
            points,
            values,
            derivs,
            class: CurveClass::Unknown,
            orientation: 0,
            color_runs: Vec::new(),
            anchors: Vec::new(),
            truncated,
            closed,
        });
    }
    Ok(out)
}
