//! The involution between a functional-equation-paired zero couple,
//! continued across the union H of their two fundamental domains.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::domains::FundamentalDomain;
use crate::error::InvolutionError;
use crate::geom::{point_in_polygon, point_segment_distance};
use crate::verify::CheckReport;

use super::inverse::continue_along;

pub struct InvolutionMap<'a, M: AnalyticMap + ?Sized> {
    map: &'a M,
    pub s1: Complex64,
    pub s2: Complex64,
    /// Radius of the image disc on which both pre-image components are
    /// injective (bounded by the nearest branch value).
    pub disc_radius: f64,
    /// Continuations are restricted to image values below this modulus:
    /// beyond it the window-truncated domains stop being faithful models of
    /// the unbounded fundamental domains (the next critical values of the
    /// ambient strips come into play).
    pub safe_image_radius: f64,
    pub domain1: FundamentalDomain,
    pub domain2: FundamentalDomain,
}

/// Pairing precondition plus injectivity radius, then the map object.
/// `domain1` must contain `s1`, `domain2` must contain `s2`; the two domains
/// are expected to share a boundary component.
pub fn build_involution<'a, M: AnalyticMap + ?Sized>(
    map: &'a M,
    s1: Complex64,
    s2: Complex64,
    domain1: FundamentalDomain,
    domain2: FundamentalDomain,
    other_critical_values: &[Complex64],
    cfg: &Tolerances,
) -> Result<InvolutionMap<'a, M>, InvolutionError> {
    let re_sum = s1.re + s2.re;
    if (re_sum - 1.0).abs() > 100.0 * cfg.distance || (s1.im - s2.im).abs() > 100.0 * cfg.distance
    {
        return Err(InvolutionError::PairingPreconditionFailed(format!(
            "Re sum = {re_sum}, t gap = {}",
            (s1.im - s2.im).abs()
        )));
    }
    if !point_in_polygon(s1, &domain1.polygon) || !point_in_polygon(s2, &domain2.polygon) {
        return Err(InvolutionError::PairingPreconditionFailed(
            "zeros do not lie in their domains".into(),
        ));
    }
    let mut disc_radius: f64 = 1.0;
    for d in [&domain1, &domain2] {
        for bv in &d.image_slit.branch_values {
            disc_radius = disc_radius.min(bv.norm());
        }
    }
    disc_radius *= 0.9;
    if !(disc_radius > 0.0) {
        return Err(InvolutionError::InjectivityRadiusNotFound);
    }
    // Critical values owned by the domains' own boundaries are routable;
    // foreign ones cap the safe image modulus.
    let own_max = [&domain1, &domain2]
        .iter()
        .flat_map(|d| d.image_slit.branch_values.iter())
        .map(|v| v.norm())
        .fold(1.0f64, f64::max);
    let safe_image_radius = other_critical_values
        .iter()
        .map(|v| v.norm())
        .filter(|r| *r > own_max * (1.0 + 1e-9))
        .fold(f64::INFINITY, f64::min)
        * 0.9;
    Ok(InvolutionMap {
        map,
        s1,
        s2,
        disc_radius,
        safe_image_radius,
        domain1,
        domain2,
    })
}

/// Obstacles for image-space routing: the ray [1, inf) and the finite
/// slit segments [1, bv].
struct Obstacles {
    branch_values: Vec<Complex64>,
}

impl Obstacles {
    /// First crossing of the leg [a, b] with any obstacle, by leg parameter.
    fn first_crossing(&self, a: Complex64, b: Complex64) -> Option<(f64, Option<Complex64>)> {
        let one = Complex64::new(1.0, 0.0);
        let mut best: Option<(f64, Option<Complex64>)> = None;
        // Finite slits.
        for bv in &self.branch_values {
            if let Some(c) = crate::geom::segment_intersection(a, b, one, *bv) {
                let t = if (b - a).norm() > 0.0 {
                    ((c - a) / (b - a)).re
                } else {
                    0.0
                };
                if t > 1e-9 && t < 1.0 - 1e-9 && best.map(|(bt, _)| t < bt).unwrap_or(true) {
                    best = Some((t, Some(*bv)));
                }
            }
        }
        // The ray [1, inf): crossing where the leg passes y = 0 at x >= 1.
        if (a.im > 0.0) != (b.im > 0.0) {
            let t = a.im / (a.im - b.im);
            let x = a.re + (b.re - a.re) * t;
            if x >= 1.0 && t > 1e-9 && t < 1.0 - 1e-9 && best.map(|(bt, _)| t < bt).unwrap_or(true)
            {
                best = Some((t, None));
            }
        }
        best
    }

    /// Recursive routing around obstacle ends. `side` picks which side of
    /// the real axis to use when rounding the z = 1 end of the ray.
    fn route(
        &self,
        a: Complex64,
        b: Complex64,
        side: f64,
        depth: usize,
        out: &mut Vec<Complex64>,
    ) -> bool {
        if depth > 6 {
            return false;
        }
        match self.first_crossing(a, b) {
            None => {
                out.push(b);
                true
            }
            Some((_, Some(bv))) => {
                // Round the far (branch-value) end of the finite slit.
                let one = Complex64::new(1.0, 0.0);
                let u = (bv - one) / (bv - one).norm().max(1e-300);
                let delta = 0.25 * (bv - one).norm().max(0.2);
                let via = bv + u * delta;
                self.route(a, via, side, depth + 1, out) && self.route(via, b, side, depth + 1, out)
            }
            Some((_, None)) => {
                // Round the z = 1 end of the positive ray on the given side.
                let via = Complex64::new(0.5, 0.35 * side);
                self.route(a, via, side, depth + 1, out) && self.route(via, b, side, depth + 1, out)
            }
        }
    }
}

impl<M: AnalyticMap + ?Sized> InvolutionMap<'_, M> {
    pub fn in_h(&self, s: Complex64) -> bool {
        point_in_polygon(s, &self.domain1.polygon) || point_in_polygon(s, &self.domain2.polygon)
    }

    /// Route an image path from 0 to w around the slit system. All slits
    /// emanate from z = 1, so the path approaches w along its own ray from
    /// 1 (the maximal-angular-clearance direction), reaching that ray via
    /// an arc around the hub at a safe radius; individual legs are further
    /// routed around slit ends when they would cross one.
    fn image_path(&self, w: Complex64, side: f64) -> Option<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut slits: Vec<Complex64> = Vec::new();
        for d in [&self.domain1, &self.domain2] {
            for bv in &d.image_slit.branch_values {
                if !slits.iter().any(|v| (v - bv).norm() < 1e-12) {
                    slits.push(*bv);
                }
            }
        }
        let obstacles = Obstacles {
            branch_values: slits,
        };
        let rel = w - one;
        let r_w = rel.norm();
        if r_w < 1e-9 {
            return None;
        }
        let theta_w = rel.arg();
        // Entry angle kept away from the positive-axis slit.
        let w_side = if w.im != 0.0 { w.im.signum() } else { side };
        let theta_entry = if theta_w.abs() < 0.45 {
            0.45 * w_side
        } else {
            theta_w
        };
        let hub_r = 0.35f64.max(r_w.min(1.0));

        let mut anchors = vec![zero];
        anchors.push(one + Complex64::from_polar(hub_r, theta_entry));
        // Arc from the entry angle to the target's angle at the hub radius.
        let dth = theta_w - theta_entry;
        let steps = (dth.abs() / 0.35).ceil() as usize;
        for k in 1..=steps {
            let th = theta_entry + dth * (k as f64 / steps as f64);
            anchors.push(one + Complex64::from_polar(hub_r, th));
        }
        anchors.push(w);
        anchors.dedup_by(|a, b| (*a - *b).norm() < 1e-12);

        // Route each anchor-to-anchor leg around slit-end obstacles.
        let mut path = vec![zero];
        for leg in anchors.windows(2) {
            if !obstacles.route(leg[0], leg[1], side, 0, &mut path) {
                return None;
            }
        }
        Some(path)
    }

    /// The involution: the pre-image of f(s) on the opposite domain's branch.
    pub fn phi(&self, s: Complex64) -> Result<Complex64, InvolutionError> {
        if (s - self.s1).norm() < 1e-12 {
            return Ok(self.s2);
        }
        if (s - self.s2).norm() < 1e-12 {
            return Ok(self.s1);
        }
        let jet = self.map.jet(s, 1e-12).map_err(InvolutionError::Eval)?;
        let w = jet.f();
        let in_first = point_in_polygon(s, &self.domain1.polygon);
        let (anchor, target_poly) = if in_first {
            (self.s2, &self.domain2.polygon)
        } else {
            (self.s1, &self.domain1.polygon)
        };
        if w.norm() >= self.safe_image_radius {
            return Err(InvolutionError::BranchPointOnPath(s));
        }
        let cfg = Tolerances::default();
        let mut last_err = None;
        for side in [1.0, -1.0] {
            let Some(path) = self.image_path(w, side) else {
                continue;
            };
            let mut x = anchor;
            let mut from = Complex64::new(0.0, 0.0);
            let mut ok = true;
            for leg in path.windows(2) {
                match continue_along(self.map, x, from, leg[1], &cfg) {
                    Ok(next) => {
                        x = next;
                        from = leg[1];
                    }
                    Err(e) => {
                        last_err = Some(e);
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                // Accept when the landing point is in (or on) the target
                // domain; the boundary L maps to itself, so allow proximity.
                if point_in_polygon(x, target_poly)
                    || polygon_distance(x, target_poly) < 0.05
                {
                    return Ok(x);
                }
                last_err = Some(InvolutionError::Divergence(x));
            }
        }
        Err(last_err.unwrap_or(InvolutionError::Divergence(s)))
    }

    /// The ratio f(s) / f(phi(s)); returns exactly 1 at the removable points.
    pub fn phi_ratio(&self, s: Complex64) -> Result<Complex64, InvolutionError> {
        let tol_removable = 1e-9;
        if (s - self.s1).norm() < tol_removable || (s - self.s2).norm() < tol_removable {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let num = self
            .map
            .jet(s, 1e-13)
            .map_err(InvolutionError::Eval)?
            .f();
        let p = self.phi(s)?;
        let den = self
            .map
            .jet(p, 1e-13)
            .map_err(InvolutionError::Eval)?
            .f();
        if den.norm() < 1e-100 {
            return Err(InvolutionError::DenominatorUnderflow(s));
        }
        Ok(num / den)
    }
}

fn polygon_distance(p: Complex64, poly: &[Complex64]) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    }
    best
}

/// Sample H and check the involution and value-invariance residuals.
pub fn verify_involution<M: AnalyticMap + ?Sized>(
    inv: &InvolutionMap<'_, M>,
    sample_count: usize,
    cfg: &Tolerances,
) -> Result<(CheckReport, super::LabReport, Vec<(Complex64, f64)>), InvolutionError> {
    let window = crate::geom::Rect {
        sigma_min: inv
            .domain1
            .polygon
            .iter()
            .chain(&inv.domain2.polygon)
            .map(|p| p.re)
            .fold(f64::INFINITY, f64::min),
        sigma_max: inv
            .domain1
            .polygon
            .iter()
            .chain(&inv.domain2.polygon)
            .map(|p| p.re)
            .fold(f64::NEG_INFINITY, f64::max),
        t_min: inv
            .domain1
            .polygon
            .iter()
            .chain(&inv.domain2.polygon)
            .map(|p| p.im)
            .fold(f64::INFINITY, f64::min),
        t_max: inv
            .domain1
            .polygon
            .iter()
            .chain(&inv.domain2.polygon)
            .map(|p| p.im)
            .fold(f64::NEG_INFINITY, f64::max),
    };
    let mut rep = CheckReport::new("involution", "", window);
    rep.tolerances.push(("residual".into(), 1e-6));

    let half = sample_count / 2;
    let diag = window.width().hypot(window.height());
    let mut samples = crate::domains::verify_domain::interior_samples(
        &inv.domain1,
        half,
        2e-3 * diag,
    );
    samples.extend(crate::domains::verify_domain::interior_samples(
        &inv.domain2,
        sample_count - half,
        2e-3 * diag,
    ));
    // Keep to the region where (a) the truncated domains faithfully model
    // the unbounded ones (image modulus below the next foreign critical
    // value) and (b) double precision leaves residual headroom under 1e-6.
    let image_cap = (0.9 * inv.safe_image_radius).min(1e4);
    samples.retain(|s| {
        inv.map
            .jet(*s, 1e-10)
            .map(|j| j.f().norm() < image_cap)
            .unwrap_or(false)
    });

    let results: Vec<Result<(Complex64, f64, f64, f64, f64), InvolutionError>> = samples
        .par_iter()
        .map(|s| {
            let p = inv.phi(*s)?;
            let back = inv.phi(p)?;
            let inv_res = (back - *s).norm();
            let f_s = inv.map.jet(*s, 1e-13).map_err(InvolutionError::Eval)?.f();
            let f_p = inv.map.jet(p, 1e-13).map_err(InvolutionError::Eval)?.f();
            let val_res = (f_s - f_p).norm();
            let ratio = inv.phi_ratio(*s)?;
            let dev = (ratio - Complex64::new(1.0, 0.0)).norm();
            Ok((*s, inv_res, val_res, dev, f_s.norm()))
        })
        .collect();
    let mut max_inv = 0.0f64;
    let mut max_val = 0.0f64;
    let mut max_phi_dev = 0.0f64;
    let mut phi_samples = Vec::with_capacity(samples.len());
    for r in results {
        let (s, inv_res, val_res, dev, f_scale) = r?;
        max_inv = max_inv.max(inv_res);
        max_val = max_val.max(val_res);
        max_phi_dev = max_phi_dev.max(dev);
        phi_samples.push((s, dev));
        if inv_res > 1e-6 {
            rep.fail(Some(s), None, format!("phi(phi(s)) off by {inv_res:e}"));
        }
        if val_res > 1e-6 * (1.0 + f_scale) {
            rep.fail(Some(s), None, format!("f(phi(s)) - f(s) = {val_res:e}"));
        }
    }
    // Swap exactness at the zeros themselves.
    let swap1 = (inv.phi(inv.s1)? - inv.s2).norm();
    let swap2 = (inv.phi(inv.s2)? - inv.s1).norm();
    if swap1 > 1e-9 || swap2 > 1e-9 {
        rep.fail(None, None, format!("zero swap residuals {swap1:e}, {swap2:e}"));
    }
    rep.margin = 1e-6 - max_inv.max(max_val);

    let mut hist: Vec<(f64, usize)> = Vec::new();
    for k in 0..=16 {
        let lo = 10f64.powi(-(16 - k));
        let count = phi_samples
            .iter()
            .filter(|(_, d)| *d <= lo)
            .count();
        hist.push((lo, count));
    }
    let lab = super::LabReport {
        spec_id: String::new(),
        s1: inv.s1,
        s2: inv.s2,
        disc_radius: inv.disc_radius,
        samples: samples.len(),
        max_involution_residual: max_inv,
        max_value_residual: max_val,
        max_phi_deviation: max_phi_dev,
        phi_histogram: hist,
    };
    let _ = cfg;
    Ok((rep, lab, phi_samples))
}
