//! Numerical evidence that an assembled domain is fundamental: interior
//! samples map injectively, interior images avoid the slit set, boundary
//! samples land on it, and exactly one zero is accounted for.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::DomainError;
use crate::geom::point_in_polygon;
use crate::verify::CheckReport;

use super::{FundamentalDomain, SegKind};

/// Low-discrepancy interior samples (R2 sequence filtered by the polygon),
/// kept `margin` away from the boundary so that image-side assertions are
/// not confounded by points straddling it.
pub fn interior_samples(domain: &FundamentalDomain, count: usize, margin: f64) -> Vec<Complex64> {
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in &domain.polygon {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let g = 1.32471795724474602596; // plastic number, R2 sequence
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    let mut closed = domain.polygon.clone();
    if let Some(first) = closed.first().copied() {
        closed.push(first);
    }
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count && k < 4_000_000 {
        k += 1;
        let x = (a1 * k as f64).fract();
        let y = (a2 * k as f64).fract();
        let p = Complex64::new(lo.re + x * (hi.re - lo.re), lo.im + y * (hi.im - lo.im));
        if point_in_polygon(p, &domain.polygon)
            && crate::geom::point_polyline_distance(p, &closed) > margin
        {
            out.push(p);
        }
    }
    out
}

/// Run the fundamental-domain evidence checks on `sample_count` interior
/// points.
pub fn verify_fundamental(
    map: &(impl AnalyticMap + ?Sized),
    domain: &FundamentalDomain,
    sample_count: usize,
    cfg: &Tolerances,
) -> Result<CheckReport, DomainError> {
    let window = crate::geom::Rect {
        sigma_min: domain.polygon.iter().map(|p| p.re).fold(f64::INFINITY, f64::min),
        sigma_max: domain.polygon.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max),
        t_min: domain.polygon.iter().map(|p| p.im).fold(f64::INFINITY, f64::min),
        t_max: domain.polygon.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max),
    };
    let mut rep = CheckReport::new(
        &format!("fundamental_domain_{}_{}", domain.strip, domain.index),
        "",
        window,
    );
    rep.tolerances.push(("distance".into(), cfg.distance));

    let diag = window.width().hypot(window.height());
    let mut margin = 2e-3 * diag;
    let mut samples = interior_samples(domain, sample_count, margin);
    if samples.len() < sample_count / 2 {
        margin *= 0.25;
        samples = interior_samples(domain, sample_count, margin);
    }
    if samples.len() < sample_count / 2 {
        rep.inconclusive(format!(
            "only {} interior samples found in the bounding box",
            samples.len()
        ));
        return Ok(rep);
    }
    let mut images = Vec::with_capacity(samples.len());
    let mut errs = Vec::with_capacity(samples.len());
    for s in &samples {
        let jet = map.jet(*s, cfg.eval).map_err(DomainError::Eval)?;
        images.push(jet.f());
        errs.push(jet.err[0]);
    }

    // (i) injectivity evidence: pairwise image separation above 10x the
    // evaluation errors of the pair.
    let mut idx: Vec<usize> = (0..images.len()).collect();
    idx.sort_by(|&a, &b| {
        (images[a].re, images[a].im)
            .partial_cmp(&(images[b].re, images[b].im))
            .unwrap()
    });
    let mut min_sep = f64::INFINITY;
    for w in idx.windows(2) {
        let d = (images[w[0]] - images[w[1]]).norm();
        let floor = 10.0 * (errs[w[0]] + errs[w[1]]).max(1e-14);
        min_sep = min_sep.min(d);
        if d < floor {
            rep.fail(
                Some(samples[w[0]]),
                None,
                format!(
                    "images of {} and {} coincide within {d:e}",
                    samples[w[0]], samples[w[1]]
                ),
            );
        }
    }
    rep.margin = min_sep;

    // (ii) interior images stay off the slit set.
    for ((s, w), e) in samples.iter().zip(&images).zip(&errs) {
        let d = domain.image_slit.distance(*w);
        if d <= 10.0 * e.max(1e-14) {
            rep.fail(
                Some(*s),
                None,
                format!("interior image {w} lies on the slit set (distance {d:e})"),
            );
        }
    }

    // (iii) boundary samples (on curve and arc pieces, not window-edge
    // closures) map into the slit set.
    for seg in &domain.boundary {
        let on_slit_expected = !matches!(seg.kind, SegKind::WindowLeft | SegKind::WindowRight);
        if !on_slit_expected {
            continue;
        }
        let step = (seg.points.len() / 24).max(1);
        for p in seg.points.iter().step_by(step) {
            let jet = map.jet(*p, cfg.eval).map_err(DomainError::Eval)?;
            let d = domain.image_slit.distance(jet.f());
            if d > 200.0 * cfg.distance * (1.0 + jet.f().norm()) {
                rep.fail(
                    Some(*p),
                    None,
                    format!(
                        "boundary sample maps {d:e} away from the slit set ({:?})",
                        seg.kind
                    ),
                );
            }
        }
    }

    // (iv) exactly one zero accounted for.
    let ok_zero = domain.interior_zero.is_some() ^ domain.boundary_double_zero.is_some();
    if !ok_zero {
        rep.fail(
            None,
            None,
            format!(
                "zero accounting broken: interior {:?}, boundary double {:?}",
                domain.interior_zero, domain.boundary_double_zero
            ),
        );
    }
    Ok(rep)
}
