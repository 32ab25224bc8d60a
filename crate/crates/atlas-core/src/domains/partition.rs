//! Strip partition by iterative polygon splitting along cut chains: each
//! chain (whole-axis-curve arm with image [1, inf) plus the arc through its
//! branch point, or the curve portions through a double zero) cuts one face
//! into two. A strip with m zeros (with multiplicity) yields m domains.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::DomainError;
use crate::geom::{point_in_polygon, point_segment_distance, polygon_area, Rect};
use crate::trace::{CurveClass, MarkKind, StripRecord, TracedCurve};
use crate::zeros::{MergeTree, Target, ZeroRecord};

use super::{ArcEnd, BoundarySegment, FundamentalDomain, SegKind, SlitDescription};

/// A tagged point of a face polygon: the segment from this point to the next
/// carries the tag.
#[derive(Debug, Clone)]
struct TaggedPoly {
    pts: Vec<Complex64>,
    tags: Vec<SegKind>,
}

fn find_curve<'a>(curves: &'a [TracedCurve], id: &str) -> Option<&'a TracedCurve> {
    curves.iter().find(|c| c.id == id)
}

/// Ordered points of a curve, left-to-right in sigma.
fn oriented_points(c: &TracedCurve) -> Vec<Complex64> {
    let mut pts = c.points.clone();
    if pts.first().unwrap().re > pts.last().unwrap().re {
        pts.reverse();
    }
    pts
}

/// Build the window-truncated polygon of a complete strip, counterclockwise.
fn strip_polygon(
    strip: &StripRecord,
    curves: &[TracedCurve],
) -> Result<TaggedPoly, DomainError> {
    let lower_id = strip.lower_curve.as_ref().ok_or(DomainError::ZerosStraddleWindow)?;
    let upper_id = strip.upper_curve.as_ref().ok_or(DomainError::ZerosStraddleWindow)?;
    let lower = find_curve(curves, lower_id)
        .ok_or_else(|| DomainError::DegenerateConfiguration("missing lower curve".into()))?;
    let upper = find_curve(curves, upper_id)
        .ok_or_else(|| DomainError::DegenerateConfiguration("missing upper curve".into()))?;
    let lo = oriented_points(lower);
    let mut up = oriented_points(upper);
    up.reverse(); // traverse right-to-left along the top
    let mut pts = Vec::with_capacity(lo.len() + up.len());
    let mut tags = Vec::with_capacity(lo.len() + up.len());
    for p in &lo {
        pts.push(*p);
        tags.push(SegKind::StripLower(lower_id.clone()));
    }
    // Last lower tag connects to the upper curve along the right edge.
    if let Some(t) = tags.last_mut() {
        *t = SegKind::WindowRight;
    }
    for p in &up {
        pts.push(*p);
        tags.push(SegKind::StripUpper(upper_id.clone()));
    }
    if let Some(t) = tags.last_mut() {
        *t = SegKind::WindowLeft; // closes back to the first lower point
    }
    if polygon_area(&pts) < 0.0 {
        pts.reverse();
        tags.reverse();
    }
    Ok(TaggedPoly { pts, tags })
}

/// Locate the boundary position nearest to `p`: (segment index, distance).
fn nearest_boundary_segment(poly: &TaggedPoly, p: Complex64) -> (usize, f64) {
    let n = poly.pts.len();
    let mut best = (0usize, f64::INFINITY);
    for i in 0..n {
        let a = poly.pts[i];
        let b = poly.pts[(i + 1) % n];
        let d = point_segment_distance(p, a, b);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Split `poly` along `chain` (whose endpoints lie on the boundary within
/// `snap`). Returns the two faces.
fn split_face(
    poly: &TaggedPoly,
    chain: &[Complex64],
    chain_tags: &[SegKind],
    snap: f64,
) -> Result<(TaggedPoly, TaggedPoly), DomainError> {
    assert_eq!(chain.len(), chain_tags.len() + 1);
    let first = *chain.first().unwrap();
    let last = *chain.last().unwrap();
    let (si, sd) = nearest_boundary_segment(poly, first);
    let (ei, ed) = nearest_boundary_segment(poly, last);
    if sd > snap || ed > snap {
        return Err(DomainError::BoundaryAssemblyFailure(if sd > ed {
            first
        } else {
            last
        }));
    }
    let n = poly.pts.len();
    // Walk boundary from the insertion after `si` to `ei` inclusive.
    let collect = |from_seg: usize, to_seg: usize| -> (Vec<Complex64>, Vec<SegKind>) {
        let mut pts = Vec::new();
        let mut tags = Vec::new();
        let mut i = (from_seg + 1) % n;
        loop {
            pts.push(poly.pts[i]);
            tags.push(poly.tags[i].clone());
            if i == to_seg {
                break;
            }
            i = (i + 1) % n;
        }
        (pts, tags)
    };
    // Face A: chain forward, then boundary from end-segment back to start.
    let (ba_pts, ba_tags) = collect(ei, si);
    let mut a_pts = chain.to_vec();
    let mut a_tags = chain_tags.to_vec();
    // Connect chain end to the boundary walk (tag of the segment it lands on).
    a_tags.push(poly.tags[ei].clone());
    a_pts.extend(ba_pts.iter().copied());
    a_tags.extend(ba_tags.iter().cloned());
    // Last boundary tag connects back to chain start along segment si: keep.
    let face_a = TaggedPoly {
        pts: a_pts,
        tags: a_tags,
    };
    // Face B: chain reversed, then boundary from start-segment to end.
    let (bb_pts, bb_tags) = collect(si, ei);
    let mut b_pts: Vec<Complex64> = chain.iter().rev().copied().collect();
    let mut b_tags: Vec<SegKind> = chain_tags.iter().rev().cloned().collect();
    b_tags.push(poly.tags[si].clone());
    b_pts.extend(bb_pts.iter().copied());
    b_tags.extend(bb_tags.iter().cloned());
    let face_b = TaggedPoly {
        pts: b_pts,
        tags: b_tags,
    };
    Ok((face_a, face_b))
}

/// Arm of a whole-axis curve with image in [1, inf), from its u-point
/// outward (toward growing values).
fn gamma_arm(curve: &TracedCurve) -> Option<(Vec<Complex64>, Complex64)> {
    let anchor = curve
        .anchors
        .iter()
        .find(|a| a.kind == MarkKind::FEqualsOne)?;
    let i = anchor.point_index;
    let n = curve.points.len();
    // Direction of increasing Re value.
    let forward = if i + 1 < n {
        curve.values[i + 1].re >= curve.values[i].re
    } else {
        false
    };
    let pts: Vec<Complex64> = if forward {
        curve.points[i..].to_vec()
    } else {
        curve.points[..=i].iter().rev().copied().collect()
    };
    Some((pts, anchor.location))
}

/// Partition a complete strip into fundamental domains.
pub fn partition_strip(
    map: &(impl AnalyticMap + ?Sized),
    strip: &StripRecord,
    curves: &[TracedCurve],
    zeros: &[ZeroRecord],
    merge_tree: &MergeTree,
    window: Rect,
    cfg: &Tolerances,
) -> Result<Vec<FundamentalDomain>, DomainError> {
    if strip.partial {
        return Err(DomainError::ZerosStraddleWindow);
    }
    let strip_zeros: Vec<&ZeroRecord> = zeros
        .iter()
        .filter(|z| z.target == Target::F && z.strip == Some(strip.k))
        .collect();
    let m_k: usize = strip_zeros.iter().map(|z| z.order as usize).sum();
    for z in &strip_zeros {
        if !window.contains_strict(z.location, 1e-6) {
            return Err(DomainError::ZerosStraddleWindow);
        }
    }

    let base = strip_polygon(strip, curves)?;
    let snap = 5e-2 * window.width().max(window.height());

    let arcs = super::build_eta_arcs(map, merge_tree, curves, window, cfg)?;

    // Cut chains: one per arc, extended by the [1,inf) arms of the curves the
    // arc ends on (each arm used once; later arcs ending at the same u-point
    // land on an existing face boundary).
    let mut used_arms: Vec<String> = Vec::new();
    let mut chains: Vec<(Vec<Complex64>, Vec<SegKind>)> = Vec::new();
    for (ai, arc) in arcs.iter().enumerate() {
        let mut pts: Vec<Complex64> = Vec::new();
        let mut tags: Vec<SegKind> = Vec::new();
        // Front extension.
        if let ArcEnd::UPoint {
            curve: Some(id), ..
        } = &arc.ends[0]
        {
            if !used_arms.contains(id) {
                if let Some(c) = find_curve(curves, id) {
                    if let Some((arm, _u)) = gamma_arm(c) {
                        // Arm runs u -> outward; we need outward -> u.
                        let rev: Vec<Complex64> = arm.into_iter().rev().collect();
                        for p in &rev {
                            pts.push(*p);
                            tags.push(SegKind::GammaArm(id.clone()));
                        }
                        pts.pop();
                        tags.pop();
                        used_arms.push(id.clone());
                    }
                }
            }
        }
        for (pi, p) in arc.points.iter().enumerate() {
            pts.push(*p);
            if pi + 1 < arc.points.len() {
                tags.push(SegKind::EtaArc(ai));
            }
        }
        // Back extension.
        if let ArcEnd::UPoint {
            curve: Some(id), ..
        } = &arc.ends[1]
        {
            if !used_arms.contains(id) {
                if let Some(c) = find_curve(curves, id) {
                    if let Some((arm, _u)) = gamma_arm(c) {
                        for p in arm.iter().skip(1) {
                            pts.push(*p);
                            tags.push(SegKind::GammaArm(id.clone()));
                        }
                        // tags are one short after the loop ends
                        used_arms.push(id.clone());
                    }
                }
            }
        }
        // Normalize tag count to pts.len() - 1.
        while tags.len() + 1 > pts.len() {
            tags.pop();
        }
        while tags.len() + 1 < pts.len() {
            tags.push(tags.last().cloned().unwrap_or(SegKind::EtaArc(ai)));
        }
        chains.push((pts, tags));
    }

    // Double-zero configuration: cut along the (-inf,1)-curve portion with
    // image [0,1] plus the whole-axis arm through the zero with image
    // [0,inf).
    for z in strip_zeros.iter().filter(|z| z.order == 2) {
        let host_zero_curve = curves.iter().find(|c| {
            matches!(c.class, CurveClass::GammaZero { k } if k == strip.k)
                && z.on_curves.contains(&c.id)
        });
        let host_j_curve = curves.iter().find(|c| {
            matches!(c.class, CurveClass::GammaJ { k, j } if k == strip.k && j.abs() == 1)
                && z.on_curves.contains(&c.id)
        });
        let (Some(g0), Some(gj)) = (host_zero_curve, host_j_curve) else {
            return Err(DomainError::BoundaryAssemblyFailure(z.location));
        };
        // G0 portion from the double zero rightward (values in [0,1)).
        let g0_anchor = g0
            .anchors
            .iter()
            .find(|a| a.kind == MarkKind::ZeroOnCurve && (a.location - z.location).norm() < 1e-6)
            .ok_or(DomainError::BoundaryAssemblyFailure(z.location))?;
        let i0 = g0_anchor.point_index;
        let dir_right = g0.points[(i0 + 1).min(g0.points.len() - 1)].re > g0.points[i0].re;
        let g0_part: Vec<Complex64> = if dir_right {
            g0.points[i0..].to_vec()
        } else {
            g0.points[..=i0].iter().rev().copied().collect()
        };
        // GJ arm from the double zero through its u-point and outward:
        // values go 0 -> +inf.
        let gj_anchor = gj
            .anchors
            .iter()
            .find(|a| a.kind == MarkKind::ZeroOnCurve && (a.location - z.location).norm() < 1e-6)
            .ok_or(DomainError::BoundaryAssemblyFailure(z.location))?;
        let ij = gj_anchor.point_index;
        let forward = gj
            .values
            .get(ij + 1)
            .map(|v| v.re > 0.0)
            .unwrap_or(false);
        let gj_part: Vec<Complex64> = if forward {
            gj.points[ij..].to_vec()
        } else {
            gj.points[..=ij].iter().rev().copied().collect()
        };
        // Chain: gj outward end <- .. <- double zero -> .. -> g0 right end.
        let mut pts: Vec<Complex64> = gj_part.iter().rev().copied().collect();
        let mut tags: Vec<SegKind> = vec![SegKind::GammaArm(gj.id.clone()); pts.len() - 1];
        for p in g0_part.iter().skip(1) {
            pts.push(*p);
            tags.push(SegKind::GammaZeroPart(g0.id.clone()));
        }
        chains.push((pts, tags));
    }

    // Iteratively split faces.
    let mut faces = vec![base];
    for (pts, tags) in &chains {
        let mid = pts[pts.len() / 2];
        let Some(host) = faces
            .iter()
            .position(|f| point_in_polygon(mid, &f.pts))
        else {
            return Err(DomainError::BoundaryAssemblyFailure(mid));
        };
        let face = faces.remove(host);
        let (a, b) = split_face(&face, pts, tags, snap)?;
        faces.push(a);
        faces.push(b);
    }

    if faces.len() != m_k {
        return Err(DomainError::BoundaryAssemblyFailure(
            strip_zeros
                .first()
                .map(|z| z.location)
                .unwrap_or_default(),
        ));
    }

    // Assemble domain records, sorted by the height of their lowest vertex
    // for deterministic indexing.
    let mut order: Vec<usize> = (0..faces.len()).collect();
    let face_key = |f: &TaggedPoly| {
        f.pts
            .iter()
            .map(|p| (p.im, p.re))
            .fold((f64::INFINITY, f64::INFINITY), |acc, x| {
                if x < acc {
                    x
                } else {
                    acc
                }
            })
    };
    order.sort_by(|&a, &b| face_key(&faces[a]).partial_cmp(&face_key(&faces[b])).unwrap());

    let mut out = Vec::new();
    for (index, &fi) in order.iter().enumerate() {
        let f = &faces[fi];
        // Boundary segments: group consecutive same-tag runs.
        let mut boundary: Vec<BoundarySegment> = Vec::new();
        for (i, tag) in f.tags.iter().enumerate() {
            let a = f.pts[i];
            let b = f.pts[(i + 1) % f.pts.len()];
            match boundary.last_mut() {
                Some(seg) if seg.kind == *tag => seg.points.push(b),
                _ => boundary.push(BoundarySegment {
                    kind: tag.clone(),
                    points: vec![a, b],
                }),
            }
        }
        // Slits: [1,inf) plus one segment per arc on the boundary; a
        // double-zero boundary switches the axis slit to [0,inf).
        let mut slit = SlitDescription {
            positive_axis_from_zero: false,
            branch_values: Vec::new(),
        };
        for seg in &boundary {
            match &seg.kind {
                SegKind::EtaArc(ai) => {
                    let bv = arcs[*ai].image_end;
                    if !slit.branch_values.iter().any(|v| (v - bv).norm() < 1e-9) {
                        slit.branch_values.push(bv);
                    }
                }
                SegKind::GammaZeroPart(_) => slit.positive_axis_from_zero = true,
                _ => {}
            }
        }
        let interior = strip_zeros
            .iter()
            .find(|z| z.order == 1 && point_in_polygon(z.location, &f.pts))
            .map(|z| z.location);
        let boundary_double = strip_zeros
            .iter()
            .find(|z| {
                z.order == 2
                    && f.tags
                        .iter()
                        .any(|t| matches!(t, SegKind::GammaZeroPart(_)))
            })
            .map(|z| z.location);
        let bounded_right = !f
            .pts
            .iter()
            .any(|p| (window.sigma_max - p.re).abs() < 0.05 * window.width());
        out.push(FundamentalDomain {
            strip: strip.k,
            index,
            boundary,
            polygon: f.pts.clone(),
            interior_zero: interior,
            boundary_double_zero: boundary_double,
            image_slit: slit,
            bounded_right,
        });
    }
    Ok(out)
}
